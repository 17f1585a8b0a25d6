#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "sharpwave/interp.hpp"
#include "sharpwave/kinetics.hpp"

namespace sharpwave {

struct wave_params {
    double m = 2.0;  // degeneracy exponent, > 1
    double D = 1.0;  // diffusivity, > 0
    double r = 0.0;  // time delay, >= 0
    double c = 1.0;  // candidate wave speed, > 0

    double cr() const { return c * r; }
    void validate() const;
};

enum class shot_tag { grew_past_K, decayed_to_zero, converged_near_K, undetermined };
std::string tag_name(shot_tag t);

struct shoot_outcome {
    shot_tag tag = shot_tag::undetermined;
    double t_event = 0.0;  // hit time / turn time / t_max
    double phi_final = 0.0;
    double psi_final = 0.0;
};

// Classification bands. The trichotomy defaults are tight; the looser values
// used to certify a polished near-critical profile live in speed_finder.
struct shoot_thresholds {
    double eps_zero = 1e-9;
    double eps_K_rel = 1e-6;  // band half-width as a fraction of K
    double eps_flat = 1e-6;
};

struct shoot_options {
    double t_seed_factor = 1e-6;     // t_seed = factor * max(cr, 1)
    double record_step = 0.05;       // max spacing of recorded samples
    bool continue_past_turn = false; // diagnostic: keep integrating after the profile turns
};

// Sampled wave profile phi(t) on [0, t_end], flux psi = D (phi^m)'.
// phi(0) = psi(0) = 0; samples below t_seed come from the edge expansion,
// the rest from the integrator.
struct profile {
    std::vector<double> t, phi, psi;
    std::vector<int> segment;  // method-of-steps segment index per sample
    std::vector<double> segment_boundaries;
    double t_star = std::numeric_limits<double>::infinity();
    double t_seed = 0.0;
    double K = 0.0;
    wave_params params;
};

// Edge values from the degenerate local expansion
// phi(t) = ((m-1) c t / (D m))^{1/(m-1)}, psi = c phi at leading order.
std::pair<double, double> seed_expansion(const wave_params& params, double t_seed);

struct segment_entry {
    double t, phi, psi;
};

enum class segment_stop { reached_end, grew, turned, dropped, hit_zero };

struct segment_result {
    segment_stop stop = segment_stop::reached_end;
    double t_stop = 0.0;
    std::vector<double> t, phi, psi;  // samples strictly after entry.t
};

// One method-of-steps segment on [k*cr, (k+1)*cr] (capped at t_end). The
// delayed source reads history through a monotone cubic; k = 0 has source
// b(0) = 0 (zero extension), r = 0 runs as a single self-sourced segment.
segment_result integrate_segment(const kinetics_spec& kin, const wave_params& params,
                                 const segment_entry& entry, const profile& history, int k,
                                 double t_end, const shoot_thresholds& thr,
                                 const shoot_options& opt, bool arm_turn = true,
                                 bool arm_drop = false, bool arm_zero = false);

std::pair<profile, shoot_outcome> shoot(const kinetics_spec& kin, const wave_params& params,
                                        double t_max, const shoot_thresholds& thr = {},
                                        const shoot_options& opt = {});

struct regularity_result {
    double exponent_fit = 0.0;
    double amplitude_fit = 0.0;
    bool c1 = false;  // true when the fitted edge exponent exceeds 1 + margin
    std::string label() const { return c1 ? "C1" : "NonC1"; }
};

// Least-squares fit of phi ~ A t^beta over the edge decade of a converged
// profile; the C1/NonC1 split follows the sign of beta - 1.
regularity_result classify_regularity(const profile& prof, const shoot_outcome& outcome, double m,
                                      double margin = 0.02);

// Largest scaled residual of the wave equation on recorded samples, using
// 3-point nonuniform finite differences. Independent of the integrator; used
// by the property tests. Samples near the edge, near segment boundaries
// (where the delayed source is only C^1), and near the end are skipped.
double max_profile_residual(const profile& prof, const kinetics_spec& kin);

pchip profile_interpolant(const profile& prof);

// phi(tq) with zero extension for tq <= 0
double profile_phi_at(const profile& prof, const pchip& interp, double tq);

}  // namespace sharpwave
