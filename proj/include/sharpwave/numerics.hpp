#pragma once

#include <functional>
#include <vector>

namespace sharpwave {

// Bisection on a bracketing interval; f(lo) and f(hi) must have opposite
// signs (or one of them be zero). Returns the midpoint of the final bracket.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double xtol_rel = 1e-15, int max_iter = 200);

// Golden-section maximizer on [lo, hi] for a unimodal f.
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double xtol = 1e-10, int max_iter = 200);

// Derivative-free Nelder-Mead maximizer, deterministic for fixed inputs.
std::vector<double> nelder_mead_max(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> x0, double step, int budget);

// Composite 16-point Gauss-Legendre with panels graded geometrically toward
// both endpoints; absorbs the integrable endpoint singularities of the
// variational integrands.
double integrate_graded(const std::function<double(double)>& f, double a, double b,
                        int levels = 60, int panels_mid = 8);

// Trapezoid on a nonuniform sampled grid.
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

struct line_fit {
    double slope = 0.0, intercept = 0.0, r_squared = 0.0;
};
line_fit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sharpwave
