#include "sharpwave/shooting.hpp"

#include <algorithm>
#include <cmath>

#include "sharpwave/errors.hpp"
#include "sharpwave/numerics.hpp"
#include "sharpwave/ode.hpp"

namespace sharpwave {

void wave_params::validate() const {
    if (!(m > 1.0)) throw invalid_params("wave_params: m must be > 1");
    if (!(D > 0.0)) throw invalid_params("wave_params: D must be > 0");
    if (!(r >= 0.0)) throw invalid_params("wave_params: r must be >= 0");
    if (!(c > 0.0)) throw invalid_params("wave_params: c must be > 0");
}

std::string tag_name(shot_tag t) {
    switch (t) {
        case shot_tag::grew_past_K: return "GrewPastK";
        case shot_tag::decayed_to_zero: return "DecayedToZero";
        case shot_tag::converged_near_K: return "ConvergedNearK";
        case shot_tag::undetermined: return "Undetermined";
    }
    return "unknown";
}

std::pair<double, double> seed_expansion(const wave_params& params, double t_seed) {
    params.validate();
    if (!(t_seed > 0.0)) throw invalid_params("seed_expansion: t_seed must be > 0");
    if (params.r > 0.0 && t_seed >= params.cr())
        throw seed_too_large("seed_expansion: t_seed must be < c*r when r > 0");
    const double A = (params.m - 1.0) * params.c / (params.D * params.m);
    const double phi = std::pow(A * t_seed, 1.0 / (params.m - 1.0));
    return {phi, params.c * phi};
}

namespace {

enum class ev_kind { grew, blowup, turned, dropped, zero };

}  // namespace

segment_result integrate_segment(const kinetics_spec& kin, const wave_params& params,
                                 const segment_entry& entry, const profile& history, int k,
                                 double t_end, const shoot_thresholds& thr,
                                 const shoot_options& opt, bool arm_turn, bool arm_drop,
                                 bool arm_zero) {
    params.validate();
    if (!(entry.phi > 0.0)) throw invalid_params("integrate_segment: entry phi must be > 0");
    if (!(t_end > entry.t)) throw invalid_params("integrate_segment: t_end must exceed entry time");
    const double cr = params.cr();
    if (k > 0 && (history.t.empty() || history.t.back() < k * cr - 1e-9 * std::max(1.0, k * cr)))
        throw invalid_params("integrate_segment: history must cover [0, k*cr]");

    const double K = kin.K;
    const double eps_K = thr.eps_K_rel * K;
    const double ceiling = 10.0 * K;
    const double Dm = params.D * params.m, mm1 = params.m - 1.0;

    pchip hist;
    const bool use_hist = params.r > 0.0 && k > 0;
    if (use_hist) hist = pchip(history.t, history.phi);

    auto rhs = [&](double t, const state<2>& y, state<2>& f) {
        const double phi = std::max(y[0], 1e-300);
        const double g = y[1] / (Dm * std::pow(phi, mm1));
        double src;
        if (params.r == 0.0) {
            src = kin.b(std::max(y[0], 0.0));
        } else if (k == 0) {
            src = 0.0;  // zero extension: phi(t - cr) = 0 on the first segment
        } else {
            const double tq = t - cr;
            src = tq <= 0.0 ? 0.0 : kin.b(std::max(hist(tq), 0.0));
        }
        f[0] = g;
        f[1] = params.c * g + kin.d(std::max(y[0], 0.0)) - src;
    };

    std::vector<ode_event<2>> events;
    std::vector<ev_kind> kinds;
    events.push_back({[K, eps_K](double, const state<2>& y) { return y[0] - (K + eps_K); }, +1, true});
    kinds.push_back(ev_kind::grew);
    events.push_back({[ceiling](double, const state<2>& y) { return y[0] - ceiling; }, +1, true});
    kinds.push_back(ev_kind::blowup);
    if (arm_turn) {
        events.push_back({[](double, const state<2>& y) { return y[1]; }, -1, true});
        kinds.push_back(ev_kind::turned);
    }
    if (arm_drop) {
        events.push_back({[K, eps_K](double, const state<2>& y) { return y[0] - (K - eps_K); }, -1, true});
        kinds.push_back(ev_kind::dropped);
    }
    if (arm_zero) {
        const double ez = thr.eps_zero;
        events.push_back({[ez](double, const state<2>& y) { return y[0] - ez; }, -1, true});
        kinds.push_back(ev_kind::zero);
    }

    ode_options<2> oopt;
    oopt.rtol = 1e-9;
    oopt.atol = 1e-13;
    oopt.max_step = params.r > 0.0 ? std::min(cr / 8.0, 0.25) : 0.25;

    const auto res =
        integrate_ode<2>(rhs, entry.t, t_end, {entry.phi, entry.psi}, oopt, events);

    segment_result out;
    for (const auto& pc : res.pieces) {
        const double len = pc.t1 - pc.t0;
        // near the seed the spacing cap is relative (0.25 t), keeping several
        // samples per decade for the edge-exponent fit; 64 subdivisions per
        // piece bound the profile size
        const double cap = std::max(std::min(opt.record_step, 0.25 * pc.t0), len / 64.0);
        const int nsub = std::max(1, static_cast<int>(std::ceil(len / cap)));
        for (int j = 1; j <= nsub; ++j) {
            if (j == nsub) {
                out.t.push_back(pc.t1);
                out.phi.push_back(pc.y1[0]);
                out.psi.push_back(pc.y1[1]);
            } else {
                const double tq = pc.t0 + len * j / nsub;
                const auto y = pc.eval(tq);
                out.t.push_back(tq);
                out.phi.push_back(y[0]);
                out.psi.push_back(y[1]);
            }
        }
    }
    out.t_stop = res.t_end;
    if (res.event_index < 0) {
        out.stop = segment_stop::reached_end;
    } else {
        const ev_kind kind = kinds[static_cast<std::size_t>(res.event_index)];
        if (kind == ev_kind::blowup)
            throw state_blowup("integrate_segment: phi exceeded 10K at t = " +
                               std::to_string(res.t_end));
        out.stop = kind == ev_kind::grew      ? segment_stop::grew
                   : kind == ev_kind::turned  ? segment_stop::turned
                   : kind == ev_kind::dropped ? segment_stop::dropped
                                              : segment_stop::hit_zero;
    }
    return out;
}

namespace {

// first K-crossing of an increasing sampled profile, linear between samples
double locate_level_crossing(const profile& P, double level) {
    for (std::size_t i = 1; i < P.t.size(); ++i) {
        if (P.phi[i] >= level && P.phi[i - 1] < level) {
            const double w = (level - P.phi[i - 1]) / (P.phi[i] - P.phi[i - 1]);
            return P.t[i - 1] + w * (P.t[i] - P.t[i - 1]);
        }
    }
    return P.t.back();
}

}  // namespace

std::pair<profile, shoot_outcome> shoot(const kinetics_spec& kin, const wave_params& params,
                                        double t_max, const shoot_thresholds& thr,
                                        const shoot_options& opt) {
    params.validate();
    const double cr = params.cr();
    if (!(t_max >= 10.0 * std::max(cr, 1.0)))
        throw invalid_params("shoot: t_max must be >= 10*max(c*r, 1)");
    const double K = kin.K;
    const double eps_K = thr.eps_K_rel * K;

    profile P;
    P.params = params;
    P.K = K;
    double t_seed = opt.t_seed_factor * std::max(cr, 1.0);
    if (cr > 0.0) t_seed = std::min(t_seed, 0.25 * cr);
    P.t_seed = t_seed;

    P.t.push_back(0.0);
    P.phi.push_back(0.0);
    P.psi.push_back(0.0);
    P.segment.push_back(0);
    const double A = (params.m - 1.0) * params.c / (params.D * params.m);
    const int n_sub = 24;  // analytic edge samples, 8 per decade over 3 decades
    for (int j = 1; j < n_sub; ++j) {
        const double tq = t_seed * std::pow(10.0, -3.0 + 3.0 * j / n_sub);
        const double ph = std::pow(A * tq, 1.0 / (params.m - 1.0));
        P.t.push_back(tq);
        P.phi.push_back(ph);
        P.psi.push_back(params.c * ph);
        P.segment.push_back(0);
    }
    const auto [phi0, psi0] = seed_expansion(params, t_seed);
    P.t.push_back(t_seed);
    P.phi.push_back(phi0);
    P.psi.push_back(psi0);
    P.segment.push_back(0);

    segment_entry st{t_seed, phi0, psi0};
    int k = 0;
    bool turned_in_band = false;
    bool diagnostic = false;
    bool have_pending = false;
    shoot_outcome pending;

    while (true) {
        const double seg_end = params.r > 0.0 ? std::min((k + 1) * cr, t_max) : t_max;
        const bool arm_turn = !turned_in_band && !diagnostic;
        const bool arm_drop = turned_in_band;
        const bool arm_zero = turned_in_band || diagnostic;
        auto seg =
            integrate_segment(kin, params, st, P, k, seg_end, thr, opt, arm_turn, arm_drop, arm_zero);
        for (std::size_t i = 0; i < seg.t.size(); ++i) {
            P.t.push_back(seg.t[i]);
            P.phi.push_back(seg.phi[i]);
            P.psi.push_back(seg.psi[i]);
            P.segment.push_back(k);
        }
        const double phf = P.phi.back(), psf = P.psi.back();

        if (seg.stop == segment_stop::grew) {
            P.t_star = locate_level_crossing(P, K);
            return {P, {shot_tag::grew_past_K, seg.t_stop, phf, psf}};
        }
        if (seg.stop == segment_stop::turned) {
            P.t_star = seg.t_stop;
            if (opt.continue_past_turn) {
                diagnostic = true;
                have_pending = true;
                pending = {phf < K - eps_K ? shot_tag::decayed_to_zero : shot_tag::undetermined,
                           seg.t_stop, phf, psf};
                st = {seg.t_stop, phf, psf};
                continue;
            }
            if (phf < K - eps_K)
                return {P, {shot_tag::decayed_to_zero, seg.t_stop, phf, psf}};
            turned_in_band = true;  // turned inside the K band: not yet a decay certificate
            st = {seg.t_stop, phf, psf};
            continue;
        }
        if (seg.stop == segment_stop::dropped)
            return {P, {shot_tag::decayed_to_zero, seg.t_stop, phf, psf}};
        if (seg.stop == segment_stop::hit_zero) {
            if (have_pending) return {P, pending};
            return {P, {shot_tag::decayed_to_zero, seg.t_stop, phf, psf}};
        }

        // reached segment end
        if (seg.t_stop >= t_max - 1e-12 * std::max(1.0, t_max)) {
            if (have_pending) return {P, pending};
            const bool increasing = psf >= 0.0 && !turned_in_band;
            if (increasing && std::abs(phf - K) < eps_K && psf < thr.eps_flat)
                return {P, {shot_tag::converged_near_K, t_max, phf, psf}};
            return {P, {shot_tag::undetermined, t_max, phf, psf}};
        }
        st = {seg.t_stop, phf, psf};
        ++k;
        P.segment_boundaries.push_back(k * cr);
    }
}

regularity_result classify_regularity(const profile& prof, const shoot_outcome& outcome, double m,
                                      double margin) {
    if (outcome.tag != shot_tag::converged_near_K)
        throw invalid_params("classify_regularity: requires a profile classified ConvergedNearK");
    const double cr = prof.params.cr();
    const double t_back = prof.t.back();
    // edge decade: inside (0, min(cr, horizon)/10), capped near the seed so the
    // power law is not polluted by regular higher-order terms
    double w_hi = (cr > 0.0 ? std::min(cr, t_back) : t_back) / 10.0;
    w_hi = std::min(w_hi, 100.0 * prof.t_seed);
    const double w_lo = w_hi / 10.0;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < prof.t.size(); ++i) {
        if (prof.t[i] >= w_lo && prof.t[i] <= w_hi && prof.phi[i] > 0.0) {
            lx.push_back(std::log(prof.t[i]));
            ly.push_back(std::log(prof.phi[i]));
        }
    }
    if (lx.size() < 8 || lx.back() - lx.front() < std::log(5.0))
        throw insufficient_edge_samples("classify_regularity: fewer than a decade of edge samples");
    const auto fit = fit_line(lx, ly);
    regularity_result out;
    out.exponent_fit = fit.slope;
    out.amplitude_fit = std::exp(fit.intercept);
    out.c1 = fit.slope > 1.0 + margin;
    (void)m;  // the expected exponent 1/(m-1) is the caller's oracle, not an input to the fit
    return out;
}

pchip profile_interpolant(const profile& prof) { return pchip(prof.t, prof.phi); }

double profile_phi_at(const profile& prof, const pchip& interp, double tq) {
    if (tq <= 0.0) return 0.0;
    if (tq >= prof.t.back()) return prof.phi.back();
    return std::max(interp(tq), 0.0);
}

double max_profile_residual(const profile& prof, const kinetics_spec& kin) {
    const auto& wp = prof.params;
    const double cr = wp.cr();
    const pchip itp = profile_interpolant(prof);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < prof.t.size(); ++i) {
        const double t0 = prof.t[i];
        if (t0 < 2.0 * prof.t_seed) continue;  // FD truncation dominates on the edge power law
        const double hm = t0 - prof.t[i - 1], hp = prof.t[i + 1] - t0;
        if (cr > 0.0) {
            // the delayed source is only C^1 across segment boundaries
            const double near = std::abs(t0 - std::round(t0 / cr) * cr);
            if (near < 2.0 * std::max(hm, hp)) continue;
        }
        auto d1 = [&](const std::vector<double>& y) {
            return (hm * hm * y[i + 1] + (hp * hp - hm * hm) * y[i] - hp * hp * y[i - 1]) /
                   (hm * hp * (hm + hp));
        };
        const double dphi = d1(prof.phi), dpsi = d1(prof.psi);
        const double src =
            cr == 0.0 ? kin.b(std::max(prof.phi[i], 0.0))
                      : (t0 <= cr ? 0.0 : kin.b(profile_phi_at(prof, itp, t0 - cr)));
        const double res = wp.c * dphi - dpsi + kin.d(std::max(prof.phi[i], 0.0)) - src;
        worst = std::max(worst, std::abs(res) / (1.0 + std::abs(dpsi)));
    }
    return worst;
}

}  // namespace sharpwave
