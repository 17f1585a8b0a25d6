#include "sharpwave/phase_plane.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sharpwave/errors.hpp"
#include "sharpwave/interp.hpp"
#include "sharpwave/numerics.hpp"

namespace sharpwave {

namespace {

// traverse time from the edge to phi0 under psi = A*phi^gamma, finite iff gamma < m
double power_head_time(double phi0, double A, double gamma, double m, double D) {
    return D * m * std::pow(phi0, m - gamma) / (A * (m - gamma));
}

void fill_delayed(phase_trajectory& traj) {
    traj.phi_delayed.resize(traj.phi.size());
    if (traj.c * traj.r == 0.0) {
        traj.phi_delayed = traj.phi;
        return;
    }
    for (std::size_t i = 0; i < traj.phi.size(); ++i)
        traj.phi_delayed[i] = delayed_argument(traj, traj.phi[i]);
}

}  // namespace

phase_trajectory from_profile(const profile& prof, const wave_params& params) {
    const double cr = params.cr();
    std::vector<double> t, phi, psi;
    t.reserve(prof.t.size());
    phi.reserve(prof.t.size());
    psi.reserve(prof.t.size());
    for (std::size_t i = 0; i < prof.t.size(); ++i) {
        if (prof.phi[i] <= 0.0) continue;
        if (prof.psi[i] < 0.0) break;  // past the turn
        if (!phi.empty() && prof.phi[i] <= phi.back()) {
            if (prof.psi[i] > 0.0)
                throw non_monotone_profile("from_profile: profile not increasing at t = " +
                                           std::to_string(prof.t[i]));
            break;
        }
        t.push_back(prof.t[i]);
        phi.push_back(prof.phi[i]);
        psi.push_back(prof.psi[i]);
    }
    if (phi.size() < 4)
        throw non_monotone_profile("from_profile: fewer than 4 increasing samples");

    phase_trajectory traj;
    traj.phi = phi;
    traj.psi_tilde = psi;
    traj.elapsed = t;  // the profile clock is exactly the traverse time
    traj.c = params.c;
    traj.m = params.m;
    traj.D = params.D;
    traj.r = params.r;
    traj.K = prof.K;
    traj.head_exponent = 1.0;
    traj.head_coeff = params.c;
    traj.head_divergent = false;

    // delayed samples straight from the time domain, zero extension below t = 0
    traj.phi_delayed.resize(phi.size());
    if (cr == 0.0) {
        traj.phi_delayed = phi;
    } else {
        const pchip itp(t, phi);
        const double A_edge = (params.m - 1.0) * params.c / (params.D * params.m);
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double tq = t[i] - cr;
            if (tq <= 0.0)
                traj.phi_delayed[i] = 0.0;
            else if (tq < t.front())
                traj.phi_delayed[i] = std::pow(A_edge * tq, 1.0 / (params.m - 1.0));
            else
                traj.phi_delayed[i] = std::max(itp(tq), 0.0);
        }
    }
    return traj;
}

double delayed_argument(const phase_trajectory& traj, double phi) {
    if (!(phi >= 0.0)) throw invalid_params("delayed_argument: phi must be >= 0");
    if (phi == 0.0) return 0.0;
    if (phi > traj.phi.back() * (1.0 + 1e-9))
        throw invalid_params("delayed_argument: phi above the trajectory grid");
    const double cr = traj.c * traj.r;
    if (cr == 0.0) return phi;
    const double Dm = traj.D * traj.m;

    double Tq;
    if (phi <= traj.phi.front()) {
        Tq = traj.head_divergent
                 ? traj.elapsed.front() +
                       Dm / traj.head_coeff * std::log(phi / traj.phi.front())
                 : power_head_time(phi, traj.head_coeff, traj.head_exponent, traj.m, traj.D);
    } else {
        Tq = lerp_sorted(traj.phi, traj.elapsed, phi);
    }
    if (!std::isfinite(Tq))
        throw integral_diverged("delayed_argument: traverse time not finite at phi = " +
                                std::to_string(phi));
    const double target = Tq - cr;

    if (traj.head_divergent) {
        if (target > traj.elapsed.front()) return lerp_sorted(traj.elapsed, traj.phi, target);
        // log-time tail: theta shrinks exponentially but never reaches 0
        return traj.phi.front() *
               std::exp((target - traj.elapsed.front()) * traj.head_coeff / Dm);
    }
    if (target <= 0.0) return 0.0;  // the whole traverse fits in the delay window
    if (target <= traj.elapsed.front()) {
        const double mg = traj.m - traj.head_exponent;
        return std::pow(target * traj.head_coeff * mg / Dm, 1.0 / mg);
    }
    return lerp_sorted(traj.elapsed, traj.phi, target);
}

phase_trajectory integrate_phase_ode(const kinetics_spec& kin, const wave_params& params,
                                     double phi_max, const phase_options& opt) {
    params.validate();
    const double K = kin.K;
    if (!(phi_max > 0.0) || phi_max > K * (1.0 + 1e-12))
        throw invalid_params("integrate_phase_ode: phi_max must lie in (0, K]");
    const double cr = params.cr();
    const double Dm = params.D * params.m, mm1 = params.m - 1.0;

    // log-spaced grid near the edge to resolve the exponent, uniform above
    std::vector<double> grid;
    const double phi_lo = opt.phi_floor_rel * K;
    const double split = std::min(opt.split_rel * K, phi_max);
    const int n_log = std::max(
        8, static_cast<int>(std::ceil(std::log10(split / phi_lo) * opt.log_pts_per_decade)));
    grid.reserve(static_cast<std::size_t>(n_log) + opt.uniform_pts + 2);
    for (int j = 0; j <= n_log; ++j)
        grid.push_back(phi_lo * std::pow(split / phi_lo, static_cast<double>(j) / n_log));
    if (split < phi_max) {
        const int n_u = std::max(
            4, static_cast<int>(std::ceil((phi_max - split) / (K / opt.uniform_pts))));
        for (int j = 1; j <= n_u; ++j)
            grid.push_back(split + (phi_max - split) * static_cast<double>(j) / n_u);
    }

    double gamma, A;
    if (!opt.smooth_seed) {
        gamma = 1.0;
        A = params.c;
    } else {
        const double lam = lambda_root(kin, params.c, params.r);
        A = Dm * (kin.db(0.0) * std::exp(-lam * cr) - kin.dd(0.0)) / params.c;
        if (!(A > 0.0))
            throw invalid_params("integrate_phase_ode: smooth branch coefficient must be > 0");
        gamma = params.m;
    }
    const bool divergent = gamma >= params.m - 1e-12;

    phase_trajectory traj;
    traj.c = params.c;
    traj.m = params.m;
    traj.D = params.D;
    traj.r = params.r;
    traj.K = K;
    traj.head_exponent = gamma;
    traj.head_coeff = A;
    traj.head_divergent = divergent;
    traj.phi.reserve(grid.size());
    traj.psi_tilde.reserve(grid.size());
    traj.elapsed.reserve(grid.size());
    traj.phi.push_back(phi_lo);
    traj.psi_tilde.push_back(A * std::pow(phi_lo, gamma));
    traj.elapsed.push_back(divergent ? 0.0 : power_head_time(phi_lo, A, gamma, params.m, params.D));

    // delayed argument for an in-flight stage: the accumulated (T, phi) table,
    // power-law head below it, analytic-slope extrapolation just past its end
    auto theta_at = [&](double T_s) -> double {
        const double target = T_s - cr;
        const auto& TT = traj.elapsed;
        const auto& PP = traj.phi;
        if (divergent) {
            if (target > TT.back()) {
                const double slope = traj.psi_tilde.back() / (Dm * std::pow(PP.back(), mm1));
                return PP.back() + (target - TT.back()) * slope;
            }
            if (target > TT.front()) return lerp_sorted(TT, PP, target);
            return PP.front() * std::exp((target - TT.front()) * A / Dm);
        }
        if (target <= 0.0) return 0.0;
        if (target <= TT.front()) {
            const double mg = params.m - gamma;
            return std::pow(target * A * mg / Dm, 1.0 / mg);
        }
        if (target >= TT.back()) {
            const double slope = traj.psi_tilde.back() / (Dm * std::pow(PP.back(), mm1));
            return PP.back() + (target - TT.back()) * slope;
        }
        return lerp_sorted(TT, PP, target);
    };

    struct deriv {
        double dpsi, dT;
    };
    auto f = [&](double x, double psi, double T) -> deriv {
        const double w = Dm * std::pow(x, mm1);
        const double th = cr == 0.0 ? x : std::max(theta_at(T), 0.0);
        return {params.c - w * (kin.b(th) - kin.d(x)) / psi, w / psi};
    };

    double psi = traj.psi_tilde.back(), T = traj.elapsed.back();
    for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
        double x = grid[j];
        const double X = grid[j + 1];
        double h = X - x;
        while (x < X * (1.0 - 1e-15)) {
            h = std::min(h, X - x);
            bool ok = true;
            double psi_new = 0.0, T_new = 0.0;
            const deriv k1 = f(x, psi, T);
            const double p2 = psi + 0.5 * h * k1.dpsi;
            if (p2 <= 0.0) {
                ok = false;
            } else {
                const deriv k2 = f(x + 0.5 * h, p2, T + 0.5 * h * k1.dT);
                const double p3 = psi + 0.5 * h * k2.dpsi;
                if (p3 <= 0.0) {
                    ok = false;
                } else {
                    const deriv k3 = f(x + 0.5 * h, p3, T + 0.5 * h * k2.dT);
                    const double p4 = psi + h * k3.dpsi;
                    if (p4 <= 0.0) {
                        ok = false;
                    } else {
                        const deriv k4 = f(x + h, p4, T + h * k3.dT);
                        psi_new = psi + h / 6.0 * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi);
                        T_new = T + h / 6.0 * (k1.dT + 2.0 * k2.dT + 2.0 * k3.dT + k4.dT);
                        ok = psi_new > 0.0 && std::isfinite(psi_new) && std::isfinite(T_new);
                    }
                }
            }
            if (!ok) {
                h *= 0.5;
                if (h < 1e-14 * std::max(X, 1.0))
                    throw trajectory_hit_zero(
                        x, "integrate_phase_ode: psi reached zero near phi = " + std::to_string(x));
                continue;
            }
            x += h;
            psi = psi_new;
            T = T_new;
            h = std::min(2.0 * h, X - x > 0.0 ? X - x : h);
        }
        traj.phi.push_back(X);
        traj.psi_tilde.push_back(psi);
        traj.elapsed.push_back(T);
    }

    fill_delayed(traj);
    return traj;
}

double barrier_value(const kinetics_spec& kin, const wave_params& params, double phi) {
    return params.D * params.m * std::pow(phi, params.m - 1.0) * (kin.b(phi) - kin.d(phi)) /
           params.c;
}

barrier_curve barrier(const kinetics_spec& kin, const wave_params& params, int n) {
    if (n < 16) throw invalid_params("barrier: grid size must be >= 16");
    params.validate();
    barrier_curve out;
    out.phi.reserve(n);
    out.psi_bar.reserve(n);
    for (int j = 1; j <= n; ++j) {
        const double phi = kin.K * static_cast<double>(j) / (n + 1);
        out.phi.push_back(phi);
        out.psi_bar.push_back(barrier_value(kin, params, phi));
    }
    return out;
}

edge_fit edge_asymptotics(const phase_trajectory& traj, const kinetics_spec& kin) {
    const double phi0 = traj.phi.front();
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < traj.phi.size() && traj.phi[i] <= 10.0 * phi0; ++i) {
        if (traj.psi_tilde[i] > 0.0) {
            lx.push_back(std::log(traj.phi[i]));
            ly.push_back(std::log(traj.psi_tilde[i]));
        }
    }
    if (lx.size() < 8 || lx.back() - lx.front() < std::log(5.0))
        throw insufficient_edge_samples("edge_asymptotics: needs a decade of samples near phi = 0");
    const auto fit = fit_line(lx, ly);
    edge_fit out;
    out.exponent = fit.slope;
    out.coefficient = std::exp(fit.intercept);
    if (std::abs(fit.slope - 1.0) <= 0.1) {
        out.kind = edge_kind::sharp;
        out.reference = traj.c;
    } else if (std::abs(fit.slope - traj.m) <= 0.1 * traj.m) {
        out.kind = edge_kind::smooth;
        const double lam = lambda_root(kin, traj.c, traj.r);
        out.reference = traj.D * traj.m *
                        (kin.db(0.0) * std::exp(-lam * traj.c * traj.r) - kin.dd(0.0)) / traj.c;
    } else {
        throw ambiguous_exponent("edge_asymptotics: fitted exponent " + std::to_string(fit.slope) +
                                 " matches neither 1 nor m = " + std::to_string(traj.m));
    }
    return out;
}

phase_trajectory make_phase_trajectory(const std::vector<double>& phi,
                                       const std::vector<double>& psi_tilde,
                                       const wave_params& params, double K) {
    params.validate();
    if (phi.size() != psi_tilde.size() || phi.size() < 4)
        throw invalid_params("make_phase_trajectory: need >= 4 matched samples");
    for (std::size_t i = 0; i < phi.size(); ++i) {
        if (!(phi[i] > 0.0) || (i > 0 && phi[i] <= phi[i - 1]))
            throw invalid_params("make_phase_trajectory: phi must be strictly increasing and > 0");
        if (!(psi_tilde[i] > 0.0))
            throw invalid_params("make_phase_trajectory: psi_tilde must be > 0");
    }
    phase_trajectory traj;
    traj.phi = phi;
    traj.psi_tilde = psi_tilde;
    traj.c = params.c;
    traj.m = params.m;
    traj.D = params.D;
    traj.r = params.r;
    traj.K = K;
    traj.head_exponent = std::log(psi_tilde[1] / psi_tilde[0]) / std::log(phi[1] / phi[0]);
    traj.head_coeff = psi_tilde[0] / std::pow(phi[0], traj.head_exponent);
    traj.head_divergent = traj.head_exponent >= params.m - 0.05;

    const double Dm = params.D * params.m, mm1 = params.m - 1.0;
    traj.elapsed.resize(phi.size());
    traj.elapsed[0] = traj.head_divergent
                          ? 0.0
                          : power_head_time(phi[0], traj.head_coeff, traj.head_exponent, params.m,
                                            params.D);
    for (std::size_t i = 1; i < phi.size(); ++i) {
        const double g0 = Dm * std::pow(phi[i - 1], mm1) / psi_tilde[i - 1];
        const double g1 = Dm * std::pow(phi[i], mm1) / psi_tilde[i];
        traj.elapsed[i] = traj.elapsed[i - 1] + 0.5 * (g0 + g1) * (phi[i] - phi[i - 1]);
    }
    fill_delayed(traj);
    return traj;
}

}  // namespace sharpwave
