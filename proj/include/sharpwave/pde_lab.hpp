#pragma once

#include <vector>

#include "sharpwave/kinetics.hpp"

namespace sharpwave {

enum class init_kind { zero, constant, bump, step };

struct sim_config {
    double L = 60.0;   // domain [0, L]
    double dx = 0.05;
    double dt = 0.0;   // 0: CFL-limited automatically, then aligned to r
    double T = 40.0;
    double m = 2.0, D = 1.0, r = 0.0;
    double cfl_safety = 0.4;  // dt bound is cfl_safety*dx^2/(2*D*m*K^(m-1))
    init_kind init = init_kind::bump;
    double init_height = 0.0;  // 0: K
    double init_width = 10.0;  // bump support / step edge
    double eps_front = 0.0;    // 0: 1e-3*K for m > 1, 1e-6*K otherwise
    double snapshot_every = 0.5;
    bool record_fields = false;
};

struct sim_record {
    std::vector<double> t;          // snapshot times
    std::vector<double> x_f;        // front position, threshold crossing + sub-grid interp
    std::vector<double> x_support;  // rightmost node with u above the support floor
    std::vector<double> xs;         // spatial grid
    std::vector<std::vector<double>> fields;  // only when record_fields
    double u_min = 0.0, u_max = 0.0;          // over every step, not just snapshots
    double dt_used = 0.0, dx_used = 0.0;
    int n_lag = 0;
    double K = 0.0;
    double eps_front_used = 0.0;
};

struct front_fit {
    double speed = 0.0;
    double r_squared = 0.0;
};

sim_record simulate(const kinetics_spec& kin, const sim_config& cfg);

// least-squares slope of x_f(t) over the trailing fit_window fraction
front_fit front_speed(const sim_record& rec, double fit_window = 0.5);

}  // namespace sharpwave
