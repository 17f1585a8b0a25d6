#pragma once

#include <vector>

#include "sharpwave/kinetics.hpp"
#include "sharpwave/shooting.hpp"

namespace sharpwave {

// Trajectory psi_tilde(phi) together with the elapsed traverse time T(phi) of
// the edge-to-phi passage. T is what makes the delayed-argument inversion a
// table lookup: theta solves T(phi) - T(theta) = c*r. Below phi[0] the
// trajectory is a fitted power law A*phi^gamma; when gamma >= m the head
// integral diverges (smooth branch) and elapsed times are anchored at phi[0],
// only differences are meaningful then.
struct phase_trajectory {
    std::vector<double> phi;          // strictly increasing, in (0, phi_max]
    std::vector<double> psi_tilde;    // >= 0
    std::vector<double> elapsed;      // T(phi), increasing
    std::vector<double> phi_delayed;  // inverted delayed argument per sample
    double c = 0.0, m = 2.0, D = 1.0, r = 0.0, K = 1.0;
    double head_exponent = 1.0;  // gamma of the sub-grid power law
    double head_coeff = 0.0;     // A of the sub-grid power law
    bool head_divergent = false;
};

struct barrier_curve {
    std::vector<double> phi;
    std::vector<double> psi_bar;
};

enum class edge_kind { sharp, smooth };

struct edge_fit {
    edge_kind kind = edge_kind::sharp;
    double exponent = 0.0;     // fitted gamma
    double coefficient = 0.0;  // fitted A in psi_tilde ~ A*phi^gamma
    double reference = 0.0;    // c (sharp) or D*m*(b'(0)e^{-lambda*c*r} - d'(0))/c (smooth)
};

struct phase_options {
    double phi_floor_rel = 1e-8;          // lowest grid phi, relative to K
    int log_pts_per_decade = 800;         // grid density below the split
    int uniform_pts = 4000;               // grid density above, per K
    double split_rel = 0.05;              // log/uniform split, relative to K
    bool smooth_seed = false;             // seed from the phi^m branch instead of c*phi
};

// inversion of a monotone time-domain profile into the phase plane
phase_trajectory from_profile(const profile& prof, const wave_params& params);

// theta with elapsed(phi) - elapsed(theta) = c*r, clamped to 0 when the whole
// traverse from the edge fits inside the delay window
double delayed_argument(const phase_trajectory& traj, double phi);

// direct integration of dpsi/dphi = c - D*m*phi^(m-1)*(b(phi_delayed) - d(phi))/psi,
// independent of the time-domain solver
phase_trajectory integrate_phase_ode(const kinetics_spec& kin, const wave_params& params,
                                     double phi_max, const phase_options& opt = {});

double barrier_value(const kinetics_spec& kin, const wave_params& params, double phi);
barrier_curve barrier(const kinetics_spec& kin, const wave_params& params, int n);

edge_fit edge_asymptotics(const phase_trajectory& traj, const kinetics_spec& kin);

// assembles a trajectory from raw arrays, reconstructing elapsed times by
// quadrature plus a fitted power-law head; used by tests and by callers that
// synthesize trajectories
phase_trajectory make_phase_trajectory(const std::vector<double>& phi,
                                       const std::vector<double>& psi_tilde,
                                       const wave_params& params, double K);

}  // namespace sharpwave
