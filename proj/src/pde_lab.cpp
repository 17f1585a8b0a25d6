#include "sharpwave/pde_lab.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sharpwave/errors.hpp"
#include "sharpwave/numerics.hpp"

namespace sharpwave {

namespace {

void fill_w(std::vector<double>& w, const std::vector<double>& u, double m) {
    const std::size_t n = u.size();
    if (m == 1.0) {
        for (std::size_t i = 0; i < n; ++i) w[i] = std::max(u[i], 0.0);
    } else if (m == 2.0) {
        for (std::size_t i = 0; i < n; ++i) {
            const double v = std::max(u[i], 0.0);
            w[i] = v * v;
        }
    } else if (m == 1.5) {
        for (std::size_t i = 0; i < n; ++i) {
            const double v = std::max(u[i], 0.0);
            w[i] = v * std::sqrt(v);
        }
    } else if (m == 3.0) {
        for (std::size_t i = 0; i < n; ++i) {
            const double v = std::max(u[i], 0.0);
            w[i] = v * v * v;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            w[i] = u[i] > 0.0 ? std::pow(u[i], m) : 0.0;
    }
}

// rightmost crossing of the level, sub-grid linear interpolation
double right_crossing(const std::vector<double>& u, const std::vector<double>& xs, double level) {
    for (std::size_t i = u.size(); i-- > 1;) {
        if (u[i - 1] > level && u[i] <= level) {
            const double w = (u[i - 1] - level) / (u[i - 1] - u[i]);
            return xs[i - 1] + w * (xs[i] - xs[i - 1]);
        }
    }
    if (!u.empty() && u.back() > level) return xs.back();
    return 0.0;
}

double rightmost_support(const std::vector<double>& u, const std::vector<double>& xs,
                         double floor_val) {
    for (std::size_t i = u.size(); i-- > 0;)
        if (u[i] > floor_val) return xs[i];
    return 0.0;
}

template <class BFn, class DFn>
sim_record run_core(const sim_config& cfg, double K, BFn bf, DFn df) {
    const double m = cfg.m, D = cfg.D;

    const int nx = std::max(8, static_cast<int>(std::lround(cfg.L / cfg.dx))) + 1;
    const double dx = cfg.L / (nx - 1);
    const double dt_bound = cfg.cfl_safety * dx * dx / (2.0 * D * m * std::pow(K, m - 1.0));
    double dt = cfg.dt > 0.0 ? cfg.dt : dt_bound;
    if (dt > dt_bound * (1.0 + 1e-12))
        throw config_unstable("simulate: dt = " + std::to_string(dt) + " exceeds the bound " +
                              std::to_string(dt_bound));
    int n_lag = 0;
    if (cfg.r > 0.0) {
        n_lag = std::max(1, static_cast<int>(std::ceil(cfg.r / dt - 1e-12)));
        dt = cfg.r / n_lag;  // align so the ring buffer spans exactly [t-r, t)
        if (static_cast<double>(n_lag) * nx > 4e7)
            throw invalid_params("simulate: history buffer too large; coarsen dx or shrink r");
    }

    sim_record rec;
    rec.dx_used = dx;
    rec.dt_used = dt;
    rec.n_lag = n_lag;
    rec.K = K;
    rec.eps_front_used = cfg.eps_front > 0.0 ? cfg.eps_front : (m > 1.0 ? 1e-3 * K : 1e-6 * K);
    rec.xs.resize(nx);
    for (int i = 0; i < nx; ++i) rec.xs[i] = i * dx;

    const double height = cfg.init_height > 0.0 ? cfg.init_height : K;
    if (height > K * (1.0 + 1e-12))
        throw invalid_params("simulate: initial height must not exceed K");
    std::vector<double> u(nx, 0.0);
    switch (cfg.init) {
        case init_kind::zero: break;
        case init_kind::constant:
            std::fill(u.begin(), u.end(), height);
            break;
        case init_kind::bump:
            for (int i = 0; i < nx; ++i) {
                const double s = rec.xs[i] / cfg.init_width;
                u[i] = s < 1.0 ? height * (1.0 - s * s) * (1.0 - s * s) : 0.0;
            }
            break;
        case init_kind::step:
            for (int i = 0; i < nx; ++i) u[i] = rec.xs[i] <= cfg.init_width ? height : 0.0;
            break;
    }

    // delayed fields, initial history held at the initial datum
    std::vector<std::vector<double>> ring(static_cast<std::size_t>(n_lag), u);

    const long n_steps = std::lround(cfg.T / dt);
    const long k_snap = std::max(1L, std::lround(cfg.snapshot_every / dt));
    const double support_floor = 1e-12;

    auto snapshot = [&](double tnow) {
        rec.t.push_back(tnow);
        rec.x_f.push_back(right_crossing(u, rec.xs, rec.eps_front_used));
        rec.x_support.push_back(rightmost_support(u, rec.xs, support_floor));
        if (cfg.record_fields) rec.fields.push_back(u);
    };

    rec.u_min = *std::min_element(u.begin(), u.end());
    rec.u_max = *std::max_element(u.begin(), u.end());
    snapshot(0.0);

    std::vector<double> w(nx), un(nx);
    const double lam = D * dt / (dx * dx);
    for (long step = 0; step < n_steps; ++step) {
        fill_w(w, u, m);
        const std::vector<double>& udel = n_lag > 0 ? ring[step % n_lag] : u;

        double lo = u[0], hi = u[0];
        // no-flux boundaries via mirrored ghosts
        un[0] = u[0] + lam * (2.0 * w[1] - 2.0 * w[0]) + dt * (bf(udel[0]) - df(u[0]));
        for (int i = 1; i + 1 < nx; ++i) {
            un[i] = u[i] + lam * (w[i - 1] - 2.0 * w[i] + w[i + 1]) +
                    dt * (bf(udel[i]) - df(u[i]));
            lo = std::min(lo, un[i]);
            hi = std::max(hi, un[i]);
        }
        un[nx - 1] = u[nx - 1] + lam * (2.0 * w[nx - 2] - 2.0 * w[nx - 1]) +
                     dt * (bf(udel[nx - 1]) - df(u[nx - 1]));
        lo = std::min({lo, un[0], un[nx - 1]});
        hi = std::max({hi, un[0], un[nx - 1]});

        if (n_lag > 0) ring[step % n_lag] = u;  // becomes the lagged field n_lag steps on
        u.swap(un);
        rec.u_min = std::min(rec.u_min, lo);
        rec.u_max = std::max(rec.u_max, hi);
        if (hi > 2.0 * K)
            throw unstable_blowup("simulate: max u = " + std::to_string(hi) + " at t = " +
                                  std::to_string((step + 1) * dt));
        if ((step + 1) % k_snap == 0 || step + 1 == n_steps) snapshot((step + 1) * dt);
    }
    return rec;
}

}  // namespace

sim_record simulate(const kinetics_spec& kin, const sim_config& cfg) {
    if (!(cfg.L > 0.0) || !(cfg.dx > 0.0) || cfg.dx >= cfg.L)
        throw invalid_params("simulate: need 0 < dx < L");
    if (!(cfg.T > 0.0)) throw invalid_params("simulate: T must be > 0");
    if (!(cfg.m >= 1.0)) throw invalid_params("simulate: m must be >= 1");
    if (!(cfg.D > 0.0)) throw invalid_params("simulate: D must be > 0");
    if (!(cfg.r >= 0.0)) throw invalid_params("simulate: r must be >= 0");
    if (!(cfg.cfl_safety > 0.0)) throw invalid_params("simulate: cfl_safety must be > 0");
    if (!(cfg.init_width > 0.0) &&
        (cfg.init == init_kind::bump || cfg.init == init_kind::step))
        throw invalid_params("simulate: init_width must be > 0");
    if (!(cfg.snapshot_every > 0.0)) throw invalid_params("simulate: snapshot_every must be > 0");

    // reaction evaluation dominates the hot loop; specialize the common family
    if (kin.family == kinetics_family::fisher) {
        const double p = kin.params.at("p"), icap = p / kin.params.at("capacity");
        return run_core(
            cfg, kin.K, [p](double v) { return p * std::max(v, 0.0); },
            [icap](double v) {
                const double w = std::max(v, 0.0);
                return icap * w * w;
            });
    }
    const kinetics_spec& k = kin;
    return run_core(
        cfg, kin.K, [&k](double v) { return k.b(std::max(v, 0.0)); },
        [&k](double v) { return k.d(std::max(v, 0.0)); });
}

front_fit front_speed(const sim_record& rec, double fit_window) {
    if (!(fit_window > 0.0 && fit_window <= 1.0))
        throw invalid_params("front_speed: fit_window must lie in (0, 1]");
    if (rec.t.size() < 4) throw invalid_params("front_speed: record too short");
    const double t0 = rec.t.back() - fit_window * (rec.t.back() - rec.t.front());
    std::vector<double> ts, xf;
    for (std::size_t i = 0; i < rec.t.size(); ++i) {
        if (rec.t[i] >= t0) {
            ts.push_back(rec.t[i]);
            xf.push_back(rec.x_f[i]);
        }
    }
    if (ts.size() < 3) throw invalid_params("front_speed: fit window has fewer than 3 samples");
    const double span = *std::max_element(xf.begin(), xf.end()) -
                        *std::min_element(xf.begin(), xf.end());
    if (span < 10.0 * rec.dx_used)
        throw front_stalled("front_speed: front moved " + std::to_string(span) +
                            " within the window, below 10*dx");
    const auto fit = fit_line(ts, xf);
    return {fit.slope, fit.r_squared};
}

}  // namespace sharpwave
