#pragma once

#include <utility>
#include <vector>

#include "sharpwave/kinetics.hpp"
#include "sharpwave/shooting.hpp"

namespace sharpwave {

struct speed_options {
    // integration horizon per shot; 0 picks a scale-aware default and every
    // probe still gets at least 10*max(c*r, 1)
    double t_max = 0.0;
    // after the bracket reaches tol, keep bisecting to machine width and
    // certify the midpoint profile as ConvergedNearK under relaxed bands
    bool polish = true;
    double polish_eps_K_rel = 1e-2;
    double polish_eps_flat = 1e-2;
    double polish_level = 0.995;  // climb target (fraction of K) fixing the certificate horizon
    shoot_thresholds thresholds{};
    shoot_options shot{};
};

struct speed_result {
    double c_star = 0.0;
    double c_lo = 0.0;  // certified DecayedToZero
    double c_hi = 0.0;  // certified GrewPastK
    int iterations = 0;  // bisection steps spent reaching the requested tol
    profile prof;        // profile at the best interior speed
    shoot_outcome prof_outcome{};
    bool certified = false;  // prof_outcome is a ConvergedNearK certificate
    double r_used = 0.0, m_used = 0.0, D_used = 0.0, t_max_used = 0.0;
};

struct sweep_row {
    double r = 0.0;
    double c_star = 0.0;
    double c_lo = 0.0, c_hi = 0.0;
    int iterations = 0;
};

// scale-aware horizon: grows with the delay window and with sluggish kinetics
double default_t_max(const kinetics_spec& kin, double m, double D, double r);

// geometric search from the anchor 2*sqrt(D*(b'(0)-d'(0))): halve to a
// certified DecayedToZero, double to a certified GrewPastK
std::pair<double, double> bracket(const kinetics_spec& kin, double m, double D, double r,
                                  double t_max, const speed_options& opt = {});

speed_result critical_speed(const kinetics_spec& kin, double m, double D, double r, double tol,
                            const speed_options& opt = {});

// one critical_speed per r; enforces c*(r) < c*(0) - tol for every r > 0
std::vector<sweep_row> delay_sweep(const kinetics_spec& kin, double m, double D,
                                   const std::vector<double>& r_list, double tol,
                                   int parallel = 1, const speed_options& opt = {});

}  // namespace sharpwave
