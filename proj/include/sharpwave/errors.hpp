#pragma once

#include <stdexcept>
#include <string>

namespace sharpwave {

// Two roots: config_error means the inputs were never admissible (caller bug
// or bad scenario), solver_error means a numeric procedure failed or detected
// an inconsistent state at runtime. frontctl maps them to exit codes 2 and 1.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct solver_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct invalid_params : config_error {
    using config_error::config_error;
};

// kinetics
struct no_positive_equilibrium : solver_error {
    using solver_error::solver_error;
};
struct no_root : solver_error {
    using solver_error::solver_error;
};

// shooting
struct seed_too_large : config_error {
    using config_error::config_error;
};
struct state_blowup : solver_error {
    using solver_error::solver_error;
};
struct step_failure : solver_error {
    using solver_error::solver_error;
};
struct insufficient_edge_samples : solver_error {
    using solver_error::solver_error;
};

// speed_finder
struct bracket_failure : solver_error {
    using solver_error::solver_error;
};
struct non_monotone_classification : solver_error {
    using solver_error::solver_error;
};
struct undetermined_shot : solver_error {
    using solver_error::solver_error;
};
struct delay_inequality_violation : solver_error {
    using solver_error::solver_error;
};

// phase_plane
struct non_monotone_profile : solver_error {
    using solver_error::solver_error;
};
struct integral_diverged : solver_error {
    using solver_error::solver_error;
};
struct trajectory_hit_zero : solver_error {
    double phi0;  // the phi value at which psi reached zero
    explicit trajectory_hit_zero(double phi0_, const std::string& msg)
        : solver_error(msg), phi0(phi0_) {}
};
struct ambiguous_exponent : solver_error {
    using solver_error::solver_error;
};

// variational
struct negative_radicand : solver_error {
    using solver_error::solver_error;
};
struct optimizer_stalled : solver_error {
    using solver_error::solver_error;
};
struct trajectory_not_sharp : solver_error {
    using solver_error::solver_error;
};

// pde_lab
struct unstable_blowup : solver_error {
    using solver_error::solver_error;
};
struct config_unstable : config_error {
    using config_error::config_error;
};
struct front_stalled : solver_error {
    using solver_error::solver_error;
};

}  // namespace sharpwave
