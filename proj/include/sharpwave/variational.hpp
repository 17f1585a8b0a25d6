#pragma once

#include <vector>

#include "sharpwave/interp.hpp"
#include "sharpwave/kinetics.hpp"
#include "sharpwave/phase_plane.hpp"

namespace sharpwave {

// Admissible trial function on [0, K]: g(K) = 0, integral 1, g' < 0 inside.
// power_family is norm*(1 - s/K)^alpha*(1 + beta*s/K); beta = 0 is the plain
// one-parameter family, beta in (-1, alpha) keeps g strictly decreasing.
struct trial_function {
    enum class rep_kind { power_family, knot_spline };
    rep_kind rep = rep_kind::power_family;
    double K = 1.0;
    double alpha = 1.0, beta = 0.0, norm = 1.0;
    pchip spline;  // knot_spline only
    double spline_scale = 1.0;

    double g(double s) const;
    double dg(double s) const;
};

trial_function make_power_trial(double alpha, double K, double beta = 0.0);
// values strictly decreasing to 0 at the last knot; normalized at construction
trial_function make_knot_trial(const std::vector<double>& knots,
                               const std::vector<double>& values);

// 2*sqrt(D) * integral of sqrt(-m s^(m-1) g g' (b - d)) over (0, K)
double j_functional(const trial_function& g, const kinetics_spec& kin, double m, double D);

enum class search_family { power, tilted_power, spline };

struct var_max {
    double value = 0.0;
    trial_function best;
};

// supremum estimate of the no-delay speed over the chosen family; for m = 1
// the result is the max of the family value and 2*sqrt(D*(b'(0) - d'(0)))
var_max c_star_no_delay(const kinetics_spec& kin, double m, double D,
                        search_family family = search_family::tilted_power, int budget = 400);

// the equality-attaining trial function built from a sharp trajectory:
// (ln g)' = -D*m*phi^(m-1)*(b - d)/psi^2, anchored at K/2, normalized
trial_function optimal_g(const phase_trajectory& traj, const kinetics_spec& kin);

// integral of g * D*m*phi^(m-1) * (b(phi) - b(phi_delayed)) / psi over the
// trajectory; zero exactly when c*r = 0
double delay_gap(const phase_trajectory& traj, const trial_function& g,
                 const kinetics_spec& kin);

}  // namespace sharpwave
