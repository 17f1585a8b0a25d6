#include "sharpwave/tasks.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sharpwave/errors.hpp"
#include "sharpwave/kinetics.hpp"
#include "sharpwave/pde_lab.hpp"
#include "sharpwave/phase_plane.hpp"
#include "sharpwave/report.hpp"
#include "sharpwave/scenario.hpp"
#include "sharpwave/shooting.hpp"
#include "sharpwave/speed_finder.hpp"
#include "sharpwave/variational.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace sharpwave {
namespace {

// nlohmann serializes non-finite doubles as null, which is what the JSON
// grammar forces anyway; route every possibly-infinite value through this
// so the intent is visible at the call site.
json num_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

kinetics_spec kinetics_from(const scenario& sc) {
    if (!sc.has_section("kinetics"))
        throw invalid_params(sc.path + ": missing [kinetics] section");
    const std::string fam_name = sc.require_str("kinetics", "family");
    const kinetics_family fam = family_from_name(fam_name);
    if (fam == kinetics_family::custom_polynomial)
        return make_custom_kinetics(sc.get_list("kinetics", "b_coef"),
                                    sc.get_list("kinetics", "d_coef"));
    std::map<std::string, double> params;
    for (const auto& [key, val] : sc.sections.at("kinetics")) {
        (void)val;
        if (key == "family" || key == "b_coef" || key == "d_coef") continue;
        params[key] = sc.require_num("kinetics", key);
    }
    return make_kinetics(fam, params);
}

wave_params wave_from(const scenario& sc, bool need_c) {
    wave_params wp;
    wp.m = sc.get_num("wave", "m", wp.m);
    wp.D = sc.get_num("wave", "D", wp.D);
    wp.r = sc.get_num("wave", "r", wp.r);
    if (need_c)
        wp.c = sc.require_num("wave", "c");
    else
        wp.c = sc.get_num("wave", "c", wp.c);
    return wp;
}

shoot_thresholds thresholds_from(const scenario& sc) {
    shoot_thresholds thr;
    thr.eps_zero = sc.get_num("solver", "eps_zero", thr.eps_zero);
    thr.eps_K_rel = sc.get_num("solver", "eps_K_rel", thr.eps_K_rel);
    thr.eps_flat = sc.get_num("solver", "eps_flat", thr.eps_flat);
    return thr;
}

shoot_options shot_from(const scenario& sc) {
    shoot_options opt;
    opt.t_seed_factor = sc.get_num("solver", "t_seed_factor", opt.t_seed_factor);
    opt.record_step = sc.get_num("solver", "record_step", opt.record_step);
    opt.continue_past_turn = sc.get_bool("solver", "continue_past_turn", opt.continue_past_turn);
    return opt;
}

speed_options speed_opts_from(const scenario& sc) {
    speed_options opt;
    opt.t_max = sc.get_num("solver", "t_max", opt.t_max);
    opt.polish = sc.get_bool("solver", "polish", opt.polish);
    opt.polish_eps_K_rel = sc.get_num("solver", "polish_eps_K_rel", opt.polish_eps_K_rel);
    opt.polish_eps_flat = sc.get_num("solver", "polish_eps_flat", opt.polish_eps_flat);
    opt.polish_level = sc.get_num("solver", "polish_level", opt.polish_level);
    opt.thresholds = thresholds_from(sc);
    opt.shot = shot_from(sc);
    return opt;
}

json kinetics_json(const kinetics_spec& kin) {
    json j;
    j["family"] = family_name(kin.family);
    if (kin.family == kinetics_family::custom_polynomial) {
        j["b_coef"] = kin.b_coef;
        j["d_coef"] = kin.d_coef;
    } else {
        for (const auto& [k, v] : kin.params) j["params"][k] = v;
    }
    j["K"] = kin.K;
    return j;
}

json wave_json(const wave_params& wp, bool with_c) {
    json j;
    j["m"] = wp.m;
    j["D"] = wp.D;
    j["r"] = wp.r;
    if (with_c) j["c"] = wp.c;
    return j;
}

json solver_json(const speed_options& opt, double tol) {
    json j;
    j["tol"] = tol;
    j["t_max"] = opt.t_max;  // 0 means scale-aware automatic
    j["polish"] = opt.polish;
    j["polish_eps_K_rel"] = opt.polish_eps_K_rel;
    j["polish_eps_flat"] = opt.polish_eps_flat;
    j["polish_level"] = opt.polish_level;
    j["eps_zero"] = opt.thresholds.eps_zero;
    j["eps_K_rel"] = opt.thresholds.eps_K_rel;
    j["eps_flat"] = opt.thresholds.eps_flat;
    j["t_seed_factor"] = opt.shot.t_seed_factor;
    j["record_step"] = opt.shot.record_step;
    return j;
}

json base_config(const scenario& sc, const kinetics_spec& kin) {
    json j;
    j["scenario"] = sc.path;
    j["kinetics"] = kinetics_json(kin);
    return j;
}

void write_json(const fs::path& path, const json& j) {
    write_text_file(path.string(), j.dump(2) + "\n");
}

void write_profile_outputs(const fs::path& out, const profile& prof) {
    std::vector<std::vector<double>> rows;
    rows.reserve(prof.t.size());
    for (size_t i = 0; i < prof.t.size(); ++i)
        rows.push_back({prof.t[i], prof.phi[i], prof.psi[i],
                        static_cast<double>(prof.segment[i])});
    write_csv((out / "profile.csv").string(), {"t", "phi", "psi", "segment"}, rows);

    svg_series s_phi{"phi", prof.t, prof.phi};
    svg_series s_psi{"psi", prof.t, prof.psi};
    write_svg_plot((out / "profile.svg").string(), "wave profile", "t", "value",
                   {s_phi, s_psi});
}

json regularity_json(const profile& prof, const shoot_outcome& outcome, double m,
                     double margin) {
    json j;
    try {
        regularity_result reg = classify_regularity(prof, outcome, m, margin);
        j["beta"] = reg.exponent_fit;
        j["amplitude"] = reg.amplitude_fit;
        j["label"] = reg.label();
        j["expected_beta"] = 1.0 / (m - 1.0);
        j["margin"] = margin;
    } catch (const insufficient_edge_samples& e) {
        j["error"] = e.what();
    }
    return j;
}

// ---------------------------------------------------------------- check

int task_check(const scenario& sc, const fs::path& out) {
    const kinetics_spec kin = kinetics_from(sc);
    const int n = sc.get_int("kinetics", "hypothesis_samples", 2001);
    const hypothesis_report rep = verify_hypotheses(kin, n);

    json j;
    j["clauses"]["b_zero_at_zero"] = rep.b_zero_at_zero;
    j["clauses"]["d_zero_at_zero"] = rep.d_zero_at_zero;
    j["clauses"]["growth_dominates_at_zero"] = rep.growth_dominates_at_zero;
    j["clauses"]["decay_dominates_at_K"] = rep.decay_dominates_at_K;
    j["clauses"]["b_nondecreasing"] = rep.b_nondecreasing;
    j["clauses"]["d_nondecreasing"] = rep.d_nondecreasing;
    j["clauses"]["b_above_d"] = rep.b_above_d;
    j["pass"] = rep.pass();
    j["n_samples"] = rep.n_samples;
    j["worst_violation"] = rep.worst_violation;
    j["K"] = kin.K;
    j["config"] = base_config(sc, kin);
    write_json(out / "hypotheses.json", j);

    std::cout << "check: " << (rep.pass() ? "pass" : "FAIL") << " (K = " << fmt_g(kin.K)
              << ", worst violation " << fmt_g(rep.worst_violation) << ")\n";
    return rep.pass() ? 0 : 3;
}

// ---------------------------------------------------------------- shoot

int task_shoot(const scenario& sc, const fs::path& out) {
    const kinetics_spec kin = kinetics_from(sc);
    wave_params wp = wave_from(sc, /*need_c=*/true);
    wp.validate();
    const shoot_thresholds thr = thresholds_from(sc);
    const shoot_options opt = shot_from(sc);
    double t_max = sc.get_num("solver", "t_max", 0.0);
    if (t_max <= 0.0) t_max = default_t_max(kin, wp.m, wp.D, wp.r);
    t_max = std::max(t_max, 10.0 * std::max(wp.cr(), 1.0));

    auto [prof, outcome] = shoot(kin, wp, t_max, thr, opt);
    write_profile_outputs(out, prof);

    json j;
    j["outcome"] = tag_name(outcome.tag);
    j["t_event"] = outcome.t_event;
    j["phi_final"] = outcome.phi_final;
    j["psi_final"] = outcome.psi_final;
    j["t_star"] = num_or_null(prof.t_star);
    j["t_seed"] = prof.t_seed;
    j["t_max"] = t_max;
    j["n_samples"] = prof.t.size();
    j["n_segments"] = prof.segment.empty() ? 0 : prof.segment.back() + 1;
    j["max_residual"] = max_profile_residual(prof, kin);
    if (outcome.tag == shot_tag::converged_near_K)
        j["regularity"] = regularity_json(prof, outcome, wp.m,
                                          sc.get_num("solver", "regularity_margin", 0.02));
    j["config"] = base_config(sc, kin);
    j["config"]["wave"] = wave_json(wp, true);
    write_json(out / "shoot.json", j);

    std::cout << "shoot: c = " << fmt_g(wp.c) << " -> " << tag_name(outcome.tag) << " at t = "
              << fmt_g(outcome.t_event) << " (phi = " << fmt_g(outcome.phi_final) << ")\n";
    return 0;
}

// ---------------------------------------------------------------- find-speed

int task_find_speed(const scenario& sc, const fs::path& out) {
    const kinetics_spec kin = kinetics_from(sc);
    wave_params wp = wave_from(sc, /*need_c=*/false);
    const double tol = sc.get_num("solver", "tol", 1e-8);
    const speed_options opt = speed_opts_from(sc);

    const speed_result sr = critical_speed(kin, wp.m, wp.D, wp.r, tol, opt);
    write_profile_outputs(out, sr.prof);

    const bool bracket_ok = sr.c_lo < sr.c_star && sr.c_star <= sr.c_hi;
    const bool width_ok = (sr.c_hi - sr.c_lo) <= tol * (1.0 + 1e-12);

    json j;
    j["c_star"] = sr.c_star;
    j["c_lo"] = sr.c_lo;
    j["c_hi"] = sr.c_hi;
    j["width"] = sr.c_hi - sr.c_lo;
    j["iterations"] = sr.iterations;
    j["certified"] = sr.certified;
    j["profile_outcome"] = tag_name(sr.prof_outcome.tag);
    j["t_max_used"] = sr.t_max_used;
    j["invariants"]["bracket_ordered"] = bracket_ok;
    j["invariants"]["width_within_tol"] = width_ok;
    j["config"] = base_config(sc, kin);
    j["config"]["wave"] = wave_json(wp, false);
    j["config"]["solver"] = solver_json(opt, tol);
    write_json(out / "speed.json", j);

    std::cout << "find-speed: c* = " << fmt_g(sr.c_star) << " in [" << fmt_g(sr.c_lo) << ", "
              << fmt_g(sr.c_hi) << "], " << sr.iterations << " bisection steps, certified "
              << (sr.certified ? "yes" : "no") << "\n";
    return (bracket_ok && width_ok) ? 0 : 3;
}

// ---------------------------------------------------------------- phase

int task_phase(const scenario& sc, const fs::path& out) {
    const kinetics_spec kin = kinetics_from(sc);
    wave_params wp = wave_from(sc, /*need_c=*/true);
    wp.validate();
    phase_options popt;
    popt.phi_floor_rel = sc.get_num("phase", "phi_floor_rel", popt.phi_floor_rel);
    popt.log_pts_per_decade = sc.get_int("phase", "log_pts_per_decade", popt.log_pts_per_decade);
    popt.uniform_pts = sc.get_int("phase", "uniform_pts", popt.uniform_pts);
    popt.split_rel = sc.get_num("phase", "split_rel", popt.split_rel);
    popt.smooth_seed = sc.get_bool("phase", "smooth_seed", popt.smooth_seed);
    const double phi_max = sc.get_num("phase", "phi_max_rel", 0.995) * kin.K;

    const phase_trajectory traj = integrate_phase_ode(kin, wp, phi_max, popt);

    std::vector<std::vector<double>> rows;
    rows.reserve(traj.phi.size());
    std::vector<double> bar(traj.phi.size());
    for (size_t i = 0; i < traj.phi.size(); ++i) {
        bar[i] = barrier_value(kin, wp, traj.phi[i]);
        rows.push_back({traj.phi[i], traj.psi_tilde[i], traj.phi_delayed[i], bar[i]});
    }
    write_csv((out / "phase.csv").string(), {"phi", "psi_tilde", "phi_delayed", "psi_bar"}, rows);
    write_svg_plot((out / "phase.svg").string(), "phase plane", "phi", "psi",
                   {svg_series{"psi_tilde", traj.phi, traj.psi_tilde},
                    svg_series{"barrier", traj.phi, bar}});

    // result invariants: the trajectory is monotone wherever it sits above
    // the barrier, and the delayed argument never overtakes its own state
    bool above_barrier_monotone = true;
    bool delayed_ordered = true;
    for (size_t i = 0; i + 1 < traj.phi.size(); ++i) {
        if (traj.psi_tilde[i] > bar[i] && traj.psi_tilde[i + 1] > bar[i + 1] &&
            traj.psi_tilde[i + 1] < traj.psi_tilde[i] - 1e-9 * kin.K)
            above_barrier_monotone = false;
        if (traj.phi_delayed[i + 1] < traj.phi_delayed[i] - 1e-12 * kin.K)
            delayed_ordered = false;
    }
    for (size_t i = 0; i < traj.phi.size(); ++i)
        if (traj.phi_delayed[i] > traj.phi[i] * (1.0 + 1e-12)) delayed_ordered = false;

    json j;
    try {
        const edge_fit ef = edge_asymptotics(traj, kin);
        j["edge"]["kind"] = ef.kind == edge_kind::sharp ? "sharp" : "smooth";
        j["edge"]["exponent"] = ef.exponent;
        j["edge"]["coefficient"] = ef.coefficient;
        j["edge"]["reference"] = ef.reference;
    } catch (const ambiguous_exponent& e) {
        j["edge"]["kind"] = "ambiguous";
        j["edge"]["error"] = e.what();
    }
    j["head_exponent"] = traj.head_exponent;
    j["head_coeff"] = traj.head_coeff;
    j["head_divergent"] = traj.head_divergent;
    j["n_samples"] = traj.phi.size();
    j["phi_max"] = phi_max;
    j["invariants"]["above_barrier_monotone"] = above_barrier_monotone;
    j["invariants"]["delayed_argument_ordered"] = delayed_ordered;
    j["config"] = base_config(sc, kin);
    j["config"]["wave"] = wave_json(wp, true);
    write_json(out / "phase.json", j);

    std::cout << "phase: " << traj.phi.size() << " samples to phi = " << fmt_g(phi_max)
              << ", edge " << j["edge"]["kind"].get<std::string>() << "\n";
    return (above_barrier_monotone && delayed_ordered) ? 0 : 3;
}

// ---------------------------------------------------------------- variational

int task_variational(const scenario& sc, const fs::path& out) {
    const kinetics_spec kin = kinetics_from(sc);
    const wave_params wp = wave_from(sc, /*need_c=*/false);
    const std::string fam_name = sc.get_str("variational", "family", "tilted_power");
    search_family fam;
    if (fam_name == "power")
        fam = search_family::power;
    else if (fam_name == "tilted_power")
        fam = search_family::tilted_power;
    else if (fam_name == "spline")
        fam = search_family::spline;
    else
        throw invalid_params("variational family must be power, tilted_power, or spline, got " +
                             fam_name);
    const int budget = sc.get_int("variational", "budget", 400);

    const var_max vm = c_star_no_delay(kin, wp.m, wp.D, fam, budget);

    const int n = 513;
    std::vector<std::vector<double>> rows;
    rows.reserve(n);
    std::vector<double> ss(n), gg(n);
    for (int i = 0; i < n; ++i) {
        const double s = kin.K * i / (n - 1.0);
        ss[i] = s;
        gg[i] = vm.best.g(s);
        rows.push_back({s, gg[i], vm.best.dg(s)});
    }
    write_csv((out / "best_g.csv").string(), {"s", "g", "dg"}, rows);
    write_svg_plot((out / "best_g.svg").string(), "best trial function", "s", "g",
                   {svg_series{"g", ss, gg}});

    json j;
    j["value"] = vm.value;
    j["family"] = fam_name;
    j["budget"] = budget;
    if (vm.best.rep == trial_function::rep_kind::power_family) {
        j["best"]["rep"] = "power_family";
        j["best"]["alpha"] = vm.best.alpha;
        j["best"]["beta"] = vm.best.beta;
        j["best"]["norm"] = vm.best.norm;
    } else {
        j["best"]["rep"] = "knot_spline";
    }
    if (wp.m == 1.0)
        j["linear_rate_bound"] = 2.0 * std::sqrt(wp.D * (kin.db(0.0) - kin.dd(0.0)));

    bool identity_ok = true;
    if (wp.r > 0.0 && sc.get_bool("variational", "with_gap", true)) {
        const double tol = sc.get_num("solver", "tol", 1e-8);
        const speed_options sopt = speed_opts_from(sc);
        const speed_result sr = critical_speed(kin, wp.m, wp.D, wp.r, tol, sopt);
        wave_params wc = wp;
        wc.c = sr.c_star;
        wc.validate();
        // at the bisected speed the trajectory can dip to zero just short of
        // K; step the cap down instead of aborting the identity check
        double phi_max = sc.get_num("phase", "phi_max_rel", 0.99) * kin.K;
        phase_trajectory traj;
        for (int attempt = 0;; ++attempt) {
            try {
                traj = integrate_phase_ode(kin, wc, phi_max);
                break;
            } catch (const trajectory_hit_zero&) {
                if (attempt == 2) throw;
                phi_max *= 0.99;
            }
        }
        const trial_function gh = optimal_g(traj, kin);
        const double J = j_functional(gh, kin, wp.m, wp.D);
        const double gap = delay_gap(traj, gh, kin);
        const double err = std::fabs(sr.c_star - (J - gap));
        const double identity_tol = sc.get_num("variational", "identity_tol", 1e-3);
        identity_ok = err <= identity_tol;
        j["identity"]["c_star"] = sr.c_star;
        j["identity"]["J_optimal_g"] = J;
        j["identity"]["delay_gap"] = gap;
        j["identity"]["error"] = err;
        j["identity"]["tol"] = identity_tol;
        j["identity"]["pass"] = identity_ok;
    }
    j["config"] = base_config(sc, kin);
    j["config"]["wave"] = wave_json(wp, false);
    write_json(out / "variational.json", j);

    std::cout << "variational: sup J over " << fam_name << " family = " << fmt_g(vm.value);
    if (j.contains("identity"))
        std::cout << ", identity error " << fmt_g(j["identity"]["error"].get<double>());
    std::cout << "\n";
    return identity_ok ? 0 : 3;
}

// ---------------------------------------------------------------- simulate

int task_simulate(const scenario& sc, const fs::path& out) {
    const kinetics_spec kin = kinetics_from(sc);
    const wave_params wp = wave_from(sc, /*need_c=*/false);
    sim_config cfg;
    cfg.m = wp.m;
    cfg.D = wp.D;
    cfg.r = wp.r;
    cfg.L = sc.get_num("pde", "L", cfg.L);
    cfg.dx = sc.get_num("pde", "dx", cfg.dx);
    cfg.dt = sc.get_num("pde", "dt", cfg.dt);
    cfg.T = sc.get_num("pde", "T", cfg.T);
    cfg.cfl_safety = sc.get_num("pde", "cfl_safety", cfg.cfl_safety);
    const std::string init = sc.get_str("pde", "init", "bump");
    if (init == "zero")
        cfg.init = init_kind::zero;
    else if (init == "constant")
        cfg.init = init_kind::constant;
    else if (init == "bump")
        cfg.init = init_kind::bump;
    else if (init == "step")
        cfg.init = init_kind::step;
    else
        throw invalid_params("pde init must be zero, constant, bump, or step, got " + init);
    cfg.init_height = sc.get_num("pde", "init_height", cfg.init_height);
    cfg.init_width = sc.get_num("pde", "init_width", cfg.init_width);
    cfg.eps_front = sc.get_num("pde", "eps_front", cfg.eps_front);
    cfg.snapshot_every = sc.get_num("pde", "snapshot_every", cfg.snapshot_every);
    cfg.record_fields = sc.get_bool("pde", "record_fields", cfg.record_fields);

    const sim_record rec = simulate(kin, cfg);

    std::vector<std::vector<double>> rows;
    rows.reserve(rec.t.size());
    for (size_t i = 0; i < rec.t.size(); ++i)
        rows.push_back({rec.t[i], rec.x_f[i], rec.x_support[i]});
    write_csv((out / "front.csv").string(), {"t", "x_f", "x_support"}, rows);
    write_svg_plot((out / "front.svg").string(), "front position", "t", "x_f",
                   {svg_series{"x_f", rec.t, rec.x_f}});
    if (cfg.record_fields && !rec.fields.empty()) {
        std::vector<std::string> header{"t"};
        for (double x : rec.xs) header.push_back("u@" + fmt_g(x));
        std::vector<std::vector<double>> frows;
        frows.reserve(rec.fields.size());
        for (size_t i = 0; i < rec.fields.size(); ++i) {
            std::vector<double> row{rec.t[i]};
            row.insert(row.end(), rec.fields[i].begin(), rec.fields[i].end());
            frows.push_back(std::move(row));
        }
        write_csv((out / "fields.csv").string(), header, frows);
    }

    json j;
    try {
        const front_fit fit = front_speed(rec, sc.get_num("pde", "fit_window", 0.5));
        j["front_speed"] = fit.speed;
        j["front_r_squared"] = fit.r_squared;
    } catch (const front_stalled& e) {
        j["front_speed"] = nullptr;
        j["front_note"] = e.what();
    }
    const bool region_ok =
        rec.u_min >= -1e-12 && rec.u_max <= rec.K * (1.0 + 1e-9) + 1e-12;
    j["u_min"] = rec.u_min;
    j["u_max"] = rec.u_max;
    j["dt_used"] = rec.dt_used;
    j["dx_used"] = rec.dx_used;
    j["n_lag"] = rec.n_lag;
    j["eps_front_used"] = rec.eps_front_used;
    j["x_f_final"] = rec.x_f.empty() ? 0.0 : rec.x_f.back();
    j["invariants"]["region_preserved"] = region_ok;
    j["config"] = base_config(sc, kin);
    j["config"]["wave"] = wave_json(wp, false);
    j["config"]["pde"] = {{"L", cfg.L},
                          {"dx", rec.dx_used},
                          {"dt", rec.dt_used},
                          {"T", cfg.T},
                          {"cfl_safety", cfg.cfl_safety},
                          {"init", init},
                          {"init_height", cfg.init_height},
                          {"init_width", cfg.init_width},
                          {"eps_front", rec.eps_front_used},
                          {"snapshot_every", cfg.snapshot_every},
                          {"record_fields", cfg.record_fields}};
    write_json(out / "sim.json", j);

    std::cout << "simulate: T = " << fmt_g(cfg.T) << ", front at " << fmt_g(j["x_f_final"].get<double>());
    if (j["front_speed"].is_number())
        std::cout << ", speed " << fmt_g(j["front_speed"].get<double>());
    std::cout << ", u in [" << fmt_g(rec.u_min) << ", " << fmt_g(rec.u_max) << "]\n";
    return region_ok ? 0 : 3;
}

// ---------------------------------------------------------------- sweep

struct sweep_cell {
    double r = 0.0, m = 2.0, D = 1.0;
    bool done = false;
    speed_result sr;
    std::string error;
    double reg_beta = std::numeric_limits<double>::quiet_NaN();
    int reg_c1 = -1;
};

int task_sweep(const scenario& sc, const fs::path& out, int parallel) {
    const kinetics_spec kin = kinetics_from(sc);
    const wave_params base = wave_from(sc, /*need_c=*/false);
    if (!sc.has_section("sweep")) throw invalid_params(sc.path + ": missing [sweep] section");

    struct axis {
        std::string name;
        std::vector<double> values;
    };
    std::vector<axis> axes;
    for (const char* name : {"r", "m", "D"}) {
        const std::string key = std::string(name) + "_list";
        if (sc.has("sweep", key)) {
            axis ax{name, sc.get_list("sweep", key)};
            if (ax.values.empty())
                throw invalid_params("sweep: " + key + " is empty");
            axes.push_back(std::move(ax));
        }
    }
    if (axes.empty() || axes.size() > 2)
        throw invalid_params("sweep needs one or two of r_list, m_list, D_list, got " +
                             std::to_string(axes.size()));
    const bool has_r_axis = std::any_of(axes.begin(), axes.end(),
                                        [](const axis& a) { return a.name == "r"; });
    if (has_r_axis) {
        for (const axis& ax : axes)
            if (ax.name == "r") {
                if (std::none_of(ax.values.begin(), ax.values.end(),
                                 [](double v) { return v == 0.0; }))
                    throw invalid_params(
                        "sweep: r_list must contain 0 so the delay inequality has its reference");
                for (double v : ax.values)
                    if (v < 0.0) throw invalid_params("sweep: r values must be >= 0");
            }
    }
    bool has_m_axis_crossing = false;
    for (const axis& ax : axes)
        if (ax.name == "m") {
            const auto [lo, hi] = std::minmax_element(ax.values.begin(), ax.values.end());
            has_m_axis_crossing = *lo < 2.0 && *hi >= 2.0;
        }

    const double tol = sc.get_num("solver", "tol", 1e-8);
    const speed_options opt = speed_opts_from(sc);
    const double margin = sc.get_num("solver", "regularity_margin", 0.02);
    const bool want_regularity = has_m_axis_crossing;

    const axis& a1 = axes[0];
    const std::vector<double> second =
        axes.size() == 2 ? axes[1].values : std::vector<double>{0.0};
    std::vector<sweep_cell> cells;
    for (double v1 : a1.values)
        for (size_t j = 0; j < second.size(); ++j) {
            sweep_cell cell;
            cell.r = base.r;
            cell.m = base.m;
            cell.D = base.D;
            auto assign = [&](const std::string& name, double v) {
                if (name == "r") cell.r = v;
                else if (name == "m") cell.m = v;
                else cell.D = v;
            };
            assign(a1.name, v1);
            if (axes.size() == 2) assign(axes[1].name, second[j]);
            cells.push_back(std::move(cell));
        }

    auto run_cell = [&](sweep_cell& cell) {
        try {
            cell.sr = critical_speed(kin, cell.m, cell.D, cell.r, tol, opt);
            cell.done = true;
            if (want_regularity && cell.sr.certified) {
                try {
                    const regularity_result reg =
                        classify_regularity(cell.sr.prof, cell.sr.prof_outcome, cell.m, margin);
                    cell.reg_beta = reg.exponent_fit;
                    cell.reg_c1 = reg.c1 ? 1 : 0;
                } catch (const std::exception&) {
                }
            }
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
    };

    const int workers = std::max(1, std::min<int>(parallel, static_cast<int>(cells.size())));
    if (workers == 1) {
        for (auto& cell : cells) run_cell(cell);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const size_t i = next.fetch_add(1);
                    if (i >= cells.size()) return;
                    run_cell(cells[i]);
                }
            });
        for (auto& th : pool) th.join();
    }

    // the delay-inequality column compares each r > 0 cell with the r = 0
    // cell of the same (m, D) slice
    auto reference_c0 = [&](const sweep_cell& cell) -> double {
        for (const sweep_cell& ref : cells)
            if (ref.done && ref.r == 0.0 && ref.m == cell.m && ref.D == cell.D)
                return ref.sr.c_star;
        return std::numeric_limits<double>::quiet_NaN();
    };

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> header{"r",  "m",    "D",        "c_star", "c_lo",
                                    "c_hi", "iterations", "certified"};
    if (has_r_axis) header.push_back("delay_ok");
    if (want_regularity) {
        header.push_back("reg_beta");
        header.push_back("reg_c1");
    }
    header.push_back("failed");

    bool any_failed = false;
    bool delay_violated = false;
    std::vector<std::vector<double>> rows;
    json jcells = json::array();
    for (const sweep_cell& cell : cells) {
        std::vector<double> row{cell.r, cell.m, cell.D};
        json jc;
        jc["r"] = cell.r;
        jc["m"] = cell.m;
        jc["D"] = cell.D;
        if (cell.done) {
            row.insert(row.end(), {cell.sr.c_star, cell.sr.c_lo, cell.sr.c_hi,
                                   static_cast<double>(cell.sr.iterations),
                                   cell.sr.certified ? 1.0 : 0.0});
            jc["c_star"] = cell.sr.c_star;
            jc["c_lo"] = cell.sr.c_lo;
            jc["c_hi"] = cell.sr.c_hi;
            jc["iterations"] = cell.sr.iterations;
            jc["certified"] = cell.sr.certified;
        } else {
            any_failed = true;
            row.insert(row.end(), {nan, nan, nan, nan, nan});
            jc["error"] = cell.error;
        }
        if (has_r_axis) {
            double ok = nan;
            if (cell.done) {
                if (cell.r == 0.0) {
                    ok = 1.0;
                } else {
                    const double c0 = reference_c0(cell);
                    if (std::isfinite(c0)) ok = cell.sr.c_star < c0 - tol ? 1.0 : 0.0;
                }
            }
            if (ok == 0.0) delay_violated = true;
            row.push_back(ok);
            jc["delay_ok"] = std::isfinite(ok) ? json(ok == 1.0) : json(nullptr);
        }
        if (want_regularity) {
            row.push_back(cell.reg_beta);
            row.push_back(cell.reg_c1 < 0 ? nan : static_cast<double>(cell.reg_c1));
            jc["reg_beta"] = num_or_null(cell.reg_beta);
            if (cell.reg_c1 >= 0) jc["reg_label"] = cell.reg_c1 ? "C1" : "NonC1";
        }
        row.push_back(cell.done ? 0.0 : 1.0);
        rows.push_back(std::move(row));
        jcells.push_back(std::move(jc));
    }
    write_csv((out / "sweep.csv").string(), header, rows);

    // c* against the first axis, one series per second-axis value
    std::vector<svg_series> series;
    for (size_t j = 0; j < second.size(); ++j) {
        svg_series s;
        s.label = axes.size() == 2 ? axes[1].name + " = " + fmt_g(second[j]) : "c*";
        for (size_t i = 0; i < a1.values.size(); ++i) {
            const sweep_cell& cell = cells[i * second.size() + j];
            s.x.push_back(a1.values[i]);
            s.y.push_back(cell.done ? cell.sr.c_star : nan);
        }
        series.push_back(std::move(s));
    }
    write_svg_plot((out / "sweep.svg").string(), "critical speed sweep", a1.name, "c*", series);

    json j;
    j["axes"] = json::array();
    for (const axis& ax : axes) j["axes"].push_back({{"name", ax.name}, {"values", ax.values}});
    j["cells"] = std::move(jcells);
    j["any_failed"] = any_failed;
    if (has_r_axis) j["delay_inequality_ok"] = !delay_violated;
    j["config"] = base_config(sc, kin);
    j["config"]["wave"] = wave_json(base, false);
    j["config"]["solver"] = solver_json(opt, tol);
    j["config"]["parallel"] = parallel;
    write_json(out / "sweep.json", j);

    std::cout << "sweep: " << cells.size() << " cells over " << a1.name;
    if (axes.size() == 2) std::cout << " x " << axes[1].name;
    std::cout << (any_failed ? ", with failures" : ", all solved");
    if (has_r_axis) std::cout << (delay_violated ? ", delay inequality VIOLATED" : ", delay inequality holds");
    std::cout << "\n";
    return (any_failed || delay_violated) ? 3 : 0;
}

// ---------------------------------------------------------------- regularity

int task_regularity(const scenario& sc, const fs::path& out) {
    const kinetics_spec kin = kinetics_from(sc);
    const wave_params wp = wave_from(sc, /*need_c=*/false);
    const double tol = sc.get_num("solver", "tol", 1e-8);
    const speed_options opt = speed_opts_from(sc);
    const double margin = sc.get_num("solver", "regularity_margin", 0.02);

    const speed_result sr = critical_speed(kin, wp.m, wp.D, wp.r, tol, opt);
    if (!sr.certified)
        throw solver_error("regularity: no converged profile certificate at c*; "
                           "raise t_max or enable polish");
    write_profile_outputs(out, sr.prof);

    const regularity_result reg = classify_regularity(sr.prof, sr.prof_outcome, wp.m, margin);
    const double expected = 1.0 / (wp.m - 1.0);

    json j;
    j["c_star"] = sr.c_star;
    j["beta"] = reg.exponent_fit;
    j["amplitude"] = reg.amplitude_fit;
    j["expected_beta"] = expected;
    j["relative_gap"] = std::fabs(reg.exponent_fit - expected) / expected;
    j["label"] = reg.label();
    j["margin"] = margin;
    j["config"] = base_config(sc, kin);
    j["config"]["wave"] = wave_json(wp, false);
    j["config"]["solver"] = solver_json(opt, tol);
    write_json(out / "regularity.json", j);

    std::cout << "regularity: beta = " << fmt_g(reg.exponent_fit) << " (1/(m-1) = "
              << fmt_g(expected) << "), label " << reg.label() << "\n";
    return 0;
}

}  // namespace

int run_task(const std::string& task, const std::string& scenario_path,
             const std::string& out_dir, int parallel) {
    try {
        if (parallel < 1) throw invalid_params("--parallel must be >= 1");
        const scenario sc = load_scenario(scenario_path);
        const fs::path out(out_dir);
        std::error_code ec;
        fs::create_directories(out, ec);
        if (ec) throw config_error("cannot create output directory " + out_dir + ": " + ec.message());

        if (task == "check") return task_check(sc, out);
        if (task == "shoot") return task_shoot(sc, out);
        if (task == "find-speed") return task_find_speed(sc, out);
        if (task == "phase") return task_phase(sc, out);
        if (task == "variational") return task_variational(sc, out);
        if (task == "simulate") return task_simulate(sc, out);
        if (task == "sweep") return task_sweep(sc, out, parallel);
        if (task == "regularity") return task_regularity(sc, out);
        throw invalid_params("unknown task: " + task);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const solver_error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace sharpwave
