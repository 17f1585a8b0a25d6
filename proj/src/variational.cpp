#include "sharpwave/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "sharpwave/errors.hpp"
#include "sharpwave/numerics.hpp"

namespace sharpwave {

double trial_function::g(double s) const {
    if (s <= 0.0) s = 0.0;
    if (s >= K) return 0.0;
    if (rep == rep_kind::power_family) {
        const double x = s / K;
        return norm * std::pow(1.0 - x, alpha) * (1.0 + beta * x);
    }
    return std::max(spline_scale * spline(s), 0.0);
}

double trial_function::dg(double s) const {
    if (s <= 0.0) s = 0.0;
    if (s > K) return 0.0;
    if (rep == rep_kind::power_family) {
        const double x = s / K;
        return norm / K * std::pow(1.0 - x, alpha - 1.0) *
               ((beta - alpha) - beta * (alpha + 1.0) * x);
    }
    return spline_scale * spline.deriv(s);
}

trial_function make_power_trial(double alpha, double K, double beta) {
    if (!(alpha > 0.0)) throw invalid_params("make_power_trial: alpha must be > 0");
    if (!(K > 0.0)) throw invalid_params("make_power_trial: K must be > 0");
    if (!(beta > -1.0 && beta < alpha))
        throw invalid_params("make_power_trial: beta must lie in (-1, alpha) to keep g decreasing");
    trial_function out;
    out.rep = trial_function::rep_kind::power_family;
    out.K = K;
    out.alpha = alpha;
    out.beta = beta;
    // exact normalization: integral of (1-x)^a (1+b x) over [0,1] is (a+2+b)/((a+1)(a+2))
    out.norm = (alpha + 1.0) * (alpha + 2.0) / (K * (alpha + 2.0 + beta));
    return out;
}

namespace {

void normalize_spline(trial_function& tf) {
    tf.spline_scale = 1.0;
    const double total =
        integrate_graded([&](double s) { return std::max(tf.spline(s), 0.0); }, 0.0, tf.K);
    if (!(total > 0.0) || !std::isfinite(total))
        throw invalid_params("trial function: integral must be positive and finite");
    tf.spline_scale = 1.0 / total;
}

}  // namespace

trial_function make_knot_trial(const std::vector<double>& knots,
                               const std::vector<double>& values) {
    if (knots.size() != values.size() || knots.size() < 3)
        throw invalid_params("make_knot_trial: need >= 3 matched knots");
    if (knots.front() != 0.0)
        throw invalid_params("make_knot_trial: first knot must be 0");
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (knots[i] <= knots[i - 1])
            throw invalid_params("make_knot_trial: knots must be strictly increasing");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] >= values[i - 1])
            throw invalid_params("make_knot_trial: values must be strictly decreasing");
    if (values.back() != 0.0)
        throw invalid_params("make_knot_trial: g must vanish at the last knot");
    trial_function out;
    out.rep = trial_function::rep_kind::knot_spline;
    out.K = knots.back();
    out.spline = pchip(knots, values);
    normalize_spline(out);
    return out;
}

double j_functional(const trial_function& g, const kinetics_spec& kin, double m, double D) {
    if (!(m >= 1.0)) throw invalid_params("j_functional: m must be >= 1");
    if (!(D > 0.0)) throw invalid_params("j_functional: D must be > 0");
    auto integrand = [&](double s) {
        const double gs = g.g(s), dgs = g.dg(s);
        double rad = -m * std::pow(s, m - 1.0) * gs * dgs * (kin.b(s) - kin.d(s));
        if (rad < -1e-10)
            throw negative_radicand("j_functional: radicand " + std::to_string(rad) +
                                    " at s = " + std::to_string(s));
        if (!(rad > 0.0)) rad = 0.0;  // also squashes 0*inf NaN at the very endpoints
        return std::sqrt(rad);
    };
    return 2.0 * std::sqrt(D) * integrate_graded(integrand, 0.0, g.K);
}

var_max c_star_no_delay(const kinetics_spec& kin, double m, double D, search_family family,
                        int budget) {
    if (!(m >= 1.0)) throw invalid_params("c_star_no_delay: m must be >= 1");
    if (!(D > 0.0)) throw invalid_params("c_star_no_delay: D must be > 0");
    if (budget < 16) throw invalid_params("c_star_no_delay: budget must be >= 16");
    const double K = kin.K;

    var_max out;
    out.value = -std::numeric_limits<double>::infinity();
    auto consider = [&](const trial_function& tf) {
        const double v = j_functional(tf, kin, m, D);
        if (std::isfinite(v) && v > out.value) {
            out.value = v;
            out.best = tf;
        }
        return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
    };

    // plain power family first; its maximizer seeds the richer searches
    const int g_budget = std::max(32, budget / 4);
    const double la_best = golden_max(
        [&](double la) { return consider(make_power_trial(std::exp(la), K)); }, std::log(0.2),
        std::log(64.0), 1e-8, g_budget);
    const double alpha0 = std::exp(la_best);

    if (family != search_family::power) {
        // tilt coordinate u maps the open admissible strip beta in (-1, alpha)
        auto tilt_of = [](double la, double u) {
            const double a = std::exp(la);
            return -1.0 + (a + 1.0) / (1.0 + std::exp(-u));
        };
        auto score2 = [&](const std::vector<double>& x) {
            return consider(make_power_trial(std::exp(x[0]), K, tilt_of(x[0], x[1])));
        };
        const int nm_budget = std::max(60, budget / 3);
        for (const double u0 : {0.0, 1.5, -1.5})
            nelder_mead_max(score2, {std::log(alpha0), u0}, 0.4, nm_budget);
    }

    if (family == search_family::spline) {
        // fixed knots, decrement parameterization keeps values strictly decreasing
        const int n_knots = 7;
        std::vector<double> knots(n_knots);
        for (int j = 0; j < n_knots; ++j) knots[j] = K * j / (n_knots - 1.0);
        auto score_s = [&](const std::vector<double>& w) {
            std::vector<double> vals(n_knots, 0.0);
            for (int j = n_knots - 2; j >= 0; --j)
                vals[j] = vals[j + 1] + std::exp(std::clamp(w[j], -20.0, 20.0));
            return consider(make_knot_trial(knots, vals));
        };
        // start from the current best sampled at the knots
        std::vector<double> w0(n_knots - 1, 0.0);
        for (int j = 0; j < n_knots - 1; ++j) {
            const double drop = out.best.g(knots[j]) - out.best.g(knots[j + 1]);
            w0[j] = std::log(std::max(drop, 1e-6));
        }
        nelder_mead_max(score_s, w0, 0.5, std::max(120, budget / 2));
    }

    if (!std::isfinite(out.value))
        throw optimizer_stalled("c_star_no_delay: no finite functional value found");
    if (m == 1.0) {
        // linear spreading speed can dominate the family supremum at m = 1
        const double linear = 2.0 * std::sqrt(D * (kin.db(0.0) - kin.dd(0.0)));
        out.value = std::max(out.value, linear);
    }
    return out;
}

trial_function optimal_g(const phase_trajectory& traj, const kinetics_spec& kin) {
    const auto fit = edge_asymptotics(traj, kin);
    if (fit.kind == edge_kind::smooth)
        throw trajectory_not_sharp("optimal_g: smooth phi^m edge, g(0) would diverge");
    if (!(traj.m > 1.0)) throw invalid_params("optimal_g: requires m > 1");
    if (!(traj.phi.back() < traj.K))
        throw invalid_params("optimal_g: trajectory must stop short of K");
    const double m = traj.m, Dm = traj.D * traj.m;
    const auto& P = traj.phi;
    const auto& S = traj.psi_tilde;
    const std::size_t n = P.size();

    std::vector<double> I(n);
    for (std::size_t i = 0; i < n; ++i)
        I[i] = -Dm * std::pow(P[i], m - 1.0) * (kin.b(P[i]) - kin.d(P[i])) / (S[i] * S[i]);

    // cumulative log-derivative, anchored mid-domain; anchor choice washes out
    // in the normalization
    std::size_t a = 0;
    while (a + 1 < n && P[a] < 0.5 * traj.K) ++a;
    std::vector<double> L(n);
    L[a] = 0.0;
    for (std::size_t i = a + 1; i < n; ++i)
        L[i] = L[i - 1] + 0.5 * (I[i - 1] + I[i]) * (P[i] - P[i - 1]);
    for (std::size_t i = a; i-- > 0;)
        L[i] = L[i + 1] - 0.5 * (I[i] + I[i + 1]) * (P[i + 1] - P[i]);

    // analytic head: below P[0] the integrand is ~ -D*m*(b'-d')*s^(m-2)/c^2
    const double head = Dm * (kin.db(0.0) - kin.dd(0.0)) * std::pow(P[0], m - 1.0) /
                        ((m - 1.0) * traj.c * traj.c);
    const double L0 = L[0] + head;

    std::vector<double> knots, values;
    knots.reserve(n + 2);
    values.reserve(n + 2);
    knots.push_back(0.0);
    values.push_back(1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = std::exp(L[i] - L0);
        // drop samples whose value ties the previous one in double precision
        if (v < values.back() * (1.0 - 1e-13)) {
            knots.push_back(P[i]);
            values.push_back(v);
        }
    }
    knots.push_back(traj.K);
    values.push_back(0.0);
    if (knots.size() < 4) throw invalid_params("optimal_g: trajectory grid too coarse");

    trial_function out;
    out.rep = trial_function::rep_kind::knot_spline;
    out.K = traj.K;
    out.spline = pchip(knots, values);
    normalize_spline(out);
    return out;
}

double delay_gap(const phase_trajectory& traj, const trial_function& g,
                 const kinetics_spec& kin) {
    if (traj.c * traj.r == 0.0) return 0.0;
    const double Dm = traj.D * traj.m, mm1 = traj.m - 1.0;
    const auto& P = traj.phi;
    std::vector<double> vals(P.size(), 0.0);
    for (std::size_t i = 0; i < P.size(); ++i) {
        if (!(traj.psi_tilde[i] > 0.0)) continue;
        const double diff =
            std::max(kin.b(P[i]) - kin.b(std::max(traj.phi_delayed[i], 0.0)), 0.0);
        vals[i] = g.g(P[i]) * Dm * std::pow(P[i], mm1) * diff / traj.psi_tilde[i];
    }
    // the head below P[0] contributes O(P[0]^m) and is dropped
    return trapezoid(P, vals);
}

}  // namespace sharpwave
