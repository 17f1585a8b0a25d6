#include "sharpwave/speed_finder.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>
#include <utility>

#include "sharpwave/errors.hpp"

namespace sharpwave {

double default_t_max(const kinetics_spec& kin, double m, double D, double r) {
    (void)m;
    const double gap = std::max(kin.db(0.0) - kin.dd(0.0), 1e-8);
    const double c0 = 2.0 * std::sqrt(D * gap);
    return std::max({200.0, 40.0 * c0 * r, 50.0 / gap});
}

namespace {

// Shot classification with the monotone-consistency ledger. Every classified
// speed is recorded; a decayed speed at or above a grown speed is the
// integrator telling us its tolerance is too loose for this bracket.
struct classifier {
    const kinetics_spec& kin;
    double m, D, r, t_base;
    const speed_options& opt;
    double max_decay_c = 0.0;
    double min_grow_c = std::numeric_limits<double>::infinity();

    void note(double c, shot_tag tag) {
        if (tag == shot_tag::decayed_to_zero) {
            max_decay_c = std::max(max_decay_c, c);
        } else if (tag == shot_tag::grew_past_K) {
            min_grow_c = std::min(min_grow_c, c);
        } else if (tag == shot_tag::converged_near_K) {
            if (c <= max_decay_c || c >= min_grow_c)
                throw non_monotone_classification(
                    "critical_speed: ConvergedNearK at c = " + std::to_string(c) +
                    " outside the open decay/grow interval");
            return;
        }
        if (max_decay_c >= min_grow_c)
            throw non_monotone_classification(
                "critical_speed: decayed at c = " + std::to_string(max_decay_c) +
                " but grew at c = " + std::to_string(min_grow_c) +
                "; integrator tolerance too loose");
    }

    std::pair<profile, shoot_outcome> run(double c) {
        const wave_params wp{m, D, r, c};
        double tm = std::max(t_base, 10.0 * std::max(c * r, 1.0));
        auto pr = shoot(kin, wp, tm, opt.thresholds, opt.shot);
        if (pr.second.tag == shot_tag::undetermined) {
            tm *= 2.0;  // one retry with a doubled horizon, then give up loudly
            pr = shoot(kin, wp, tm, opt.thresholds, opt.shot);
            if (pr.second.tag == shot_tag::undetermined)
                throw undetermined_shot("critical_speed: shot at c = " + std::to_string(c) +
                                        " still Undetermined at t_max = " + std::to_string(tm));
        }
        note(c, pr.second.tag);
        return pr;
    }
};

std::pair<double, double> bracket_impl(classifier& cls) {
    const double bp = cls.kin.db(0.0), dp = cls.kin.dd(0.0);
    if (!(bp > dp)) throw invalid_params("bracket: requires b'(0) > d'(0)");
    const double anchor = 2.0 * std::sqrt(cls.D * (bp - dp));

    double c_lo = anchor;
    for (int n = 0;; ++n) {
        if (n > 60) throw bracket_failure("bracket: 60 halvings without DecayedToZero");
        if (cls.run(c_lo).second.tag == shot_tag::decayed_to_zero) break;
        c_lo *= 0.5;
    }
    double c_hi = anchor;
    for (int n = 0;; ++n) {
        if (n > 60) throw bracket_failure("bracket: 60 doublings without GrewPastK");
        if (cls.run(c_hi).second.tag == shot_tag::grew_past_K) break;
        c_hi *= 2.0;
    }
    return {c_lo, c_hi};
}

void check_increasing(const profile& prof) {
    for (std::size_t i = 1; i < prof.t.size(); ++i)
        if (prof.phi[i] <= prof.phi[i - 1] && prof.phi[i - 1] > 0.0)
            throw non_monotone_profile("critical_speed: certified profile is not increasing at t = " +
                                       std::to_string(prof.t[i]));
}

// first time the sampled profile reaches the given level, linear between samples
double climb_time(const profile& prof, double level, bool& found) {
    for (std::size_t i = 1; i < prof.t.size(); ++i) {
        if (prof.phi[i] >= level && prof.phi[i - 1] < level) {
            found = true;
            const double w = (level - prof.phi[i - 1]) / (prof.phi[i] - prof.phi[i - 1]);
            return prof.t[i - 1] + w * (prof.t[i] - prof.t[i - 1]);
        }
    }
    found = false;
    return 0.0;
}

}  // namespace

std::pair<double, double> bracket(const kinetics_spec& kin, double m, double D, double r,
                                  double t_max, const speed_options& opt) {
    const double t_base = t_max > 0.0 ? t_max : default_t_max(kin, m, D, r);
    classifier cls{kin, m, D, r, t_base, opt};
    return bracket_impl(cls);
}

speed_result critical_speed(const kinetics_spec& kin, double m, double D, double r, double tol,
                            const speed_options& opt) {
    if (!(tol > 0.0)) throw invalid_params("critical_speed: tol must be > 0");
    const double t_base = opt.t_max > 0.0 ? opt.t_max : default_t_max(kin, m, D, r);
    classifier cls{kin, m, D, r, t_base, opt};
    auto [c_lo, c_hi] = bracket_impl(cls);

    speed_result out;
    out.r_used = r;
    out.m_used = m;
    out.D_used = D;
    out.t_max_used = t_base;

    int iters = 0;
    while (c_hi - c_lo > tol) {
        const double mid = 0.5 * (c_lo + c_hi);
        if (mid <= c_lo || mid >= c_hi) break;  // width at the rounding floor
        auto pr = cls.run(mid);
        ++iters;
        if (pr.second.tag == shot_tag::converged_near_K) {
            out.c_star = mid;
            out.c_lo = c_lo;
            out.c_hi = c_hi;
            out.iterations = iters;
            out.prof = std::move(pr.first);
            out.prof_outcome = pr.second;
            out.certified = true;
            check_increasing(out.prof);
            return out;
        }
        (pr.second.tag == shot_tag::decayed_to_zero ? c_lo : c_hi) = mid;
    }
    out.c_lo = c_lo;
    out.c_hi = c_hi;
    out.iterations = iters;

    // keep bisecting to machine width; the saddle passage flattens out only
    // when the bracket is nearly exhausted, so the certificate needs this
    double plo = c_lo, phi_hi = c_hi;
    if (opt.polish) {
        for (int n = 0; n < 200; ++n) {
            if (phi_hi - plo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, plo))
                break;
            const double mid = 0.5 * (plo + phi_hi);
            if (mid <= plo || mid >= phi_hi) break;
            auto pr = cls.run(mid);
            if (pr.second.tag == shot_tag::converged_near_K) {
                out.c_star = mid;
                out.c_lo = plo;
                out.c_hi = phi_hi;
                out.prof = std::move(pr.first);
                out.prof_outcome = pr.second;
                out.certified = true;
                check_increasing(out.prof);
                return out;
            }
            (pr.second.tag == shot_tag::decayed_to_zero ? plo : phi_hi) = mid;
        }
    }
    out.c_star = 0.5 * (plo + phi_hi);

    // diagnostic shot at the midpoint, no abort on Undetermined here: a failed
    // certificate is reported, not fatal
    const wave_params wpc{m, D, r, out.c_star};
    double tdiag = std::max(t_base, 10.0 * std::max(wpc.cr(), 1.0));
    auto dg = shoot(kin, wpc, tdiag, opt.thresholds, opt.shot);
    if (dg.second.tag == shot_tag::undetermined) {
        tdiag *= 2.0;
        dg = shoot(kin, wpc, tdiag, opt.thresholds, opt.shot);
    }
    if (dg.second.tag != shot_tag::undetermined) cls.note(out.c_star, dg.second.tag);

    if (dg.second.tag == shot_tag::converged_near_K) {
        out.prof = std::move(dg.first);
        out.prof_outcome = dg.second;
        out.certified = true;
    } else {
        bool found = false;
        const double t_climb = climb_time(dg.first, opt.polish_level * kin.K, found);
        bool done = false;
        if (found) {
            shoot_thresholds thr2 = opt.thresholds;
            thr2.eps_K_rel = opt.polish_eps_K_rel;
            thr2.eps_flat = opt.polish_eps_flat;
            const double tp = std::max(t_climb, 10.0 * std::max(wpc.cr(), 1.0));
            auto pf = shoot(kin, wpc, tp, thr2, opt.shot);
            if (pf.second.tag == shot_tag::converged_near_K) {
                out.prof = std::move(pf.first);
                out.prof_outcome = pf.second;
                out.certified = true;
                done = true;
            }
        }
        if (!done) {
            out.prof = std::move(dg.first);
            out.prof_outcome = dg.second;
            out.certified = false;
        }
    }
    if (out.certified) check_increasing(out.prof);
    return out;
}

std::vector<sweep_row> delay_sweep(const kinetics_spec& kin, double m, double D,
                                   const std::vector<double>& r_list, double tol, int parallel,
                                   const speed_options& opt) {
    if (r_list.empty()) throw invalid_params("delay_sweep: r_list is empty");
    bool has_zero = false;
    for (double r : r_list) {
        if (r < 0.0) throw invalid_params("delay_sweep: negative delay in r_list");
        if (r == 0.0) has_zero = true;
    }
    if (!has_zero) throw invalid_params("delay_sweep: r_list must include 0");

    std::vector<sweep_row> rows(r_list.size());
    auto work = [&](std::size_t i) {
        auto sr = critical_speed(kin, m, D, r_list[i], tol, opt);
        rows[i] = {r_list[i], sr.c_star, sr.c_lo, sr.c_hi, sr.iterations};
    };
    const std::size_t n = r_list.size();
    if (parallel <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errs(n);
        auto runner = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    work(i);
                } catch (...) {
                    errs[i] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        const std::size_t nth = std::min<std::size_t>(static_cast<std::size_t>(parallel), n);
        pool.reserve(nth);
        for (std::size_t i = 0; i < nth; ++i) pool.emplace_back(runner);
        for (auto& th : pool) th.join();
        for (auto& e : errs)
            if (e) std::rethrow_exception(e);
    }

    double c0 = std::numeric_limits<double>::quiet_NaN();
    for (const auto& row : rows)
        if (row.r == 0.0) c0 = row.c_star;
    for (const auto& row : rows)
        if (row.r > 0.0 && !(row.c_star < c0 - tol))
            throw delay_inequality_violation(
                "delay_sweep: c*(r = " + std::to_string(row.r) + ") = " + std::to_string(row.c_star) +
                " is not below c*(0) = " + std::to_string(c0) + " by more than tol");
    return rows;
}

}  // namespace sharpwave
