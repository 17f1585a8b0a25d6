#include "sharpwave/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sharpwave {

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double xtol_rel,
                   int max_iter) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw std::invalid_argument("bisect_root: no sign change on bracket");
    for (int i = 0; i < max_iter && hi - lo > xtol_rel * std::max(1.0, std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double golden_max(const std::function<double(double)>& f, double lo, double hi, double xtol,
                  int max_iter) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < max_iter && b - a > xtol; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

std::vector<double> nelder_mead_max(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> x0, double step, int budget) {
    const std::size_t n = x0.size();
    struct vertex {
        std::vector<double> x;
        double v;
    };
    std::vector<vertex> s(n + 1);
    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };
    s[0] = {x0, eval(x0)};
    for (std::size_t i = 0; i < n; ++i) {
        auto x = x0;
        x[i] += step;
        s[i + 1] = {x, eval(x)};
    }
    auto order = [&] {
        std::sort(s.begin(), s.end(), [](const vertex& a, const vertex& b) { return a.v > b.v; });
    };
    order();
    while (evals < budget) {
        std::vector<double> cen(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) cen[j] += s[i].x[j] / static_cast<double>(n);
        }
        auto blend = [&](double t) {
            std::vector<double> x(n);
            for (std::size_t j = 0; j < n; ++j) x[j] = cen[j] + t * (cen[j] - s[n].x[j]);
            return x;
        };
        auto xr = blend(1.0);
        double vr = eval(xr);
        if (vr > s[0].v) {
            auto xe = blend(2.0);
            double ve = eval(xe);
            if (ve > vr) {
                s[n] = {xe, ve};
            } else {
                s[n] = {xr, vr};
            }
        } else if (vr > s[n - 1].v) {
            s[n] = {xr, vr};
        } else {
            auto xc = blend(0.5);
            double vc = eval(xc);
            if (vc > s[n].v) {
                s[n] = {xc, vc};
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) s[i].x[j] = 0.5 * (s[i].x[j] + s[0].x[j]);
                    s[i].v = eval(s[i].x);
                }
            }
        }
        order();
        double spread = 0.0;
        for (std::size_t j = 0; j < n; ++j) spread = std::max(spread, std::abs(s[0].x[j] - s[n].x[j]));
        if (spread < 1e-12) break;
    }
    return s[0].x;
}

namespace {

// Gauss-Legendre nodes/weights on [-1,1], computed once by Newton on the
// Legendre recurrence; avoids hardcoded tables.
struct gl16 {
    double x[16], w[16];
    gl16() {
        const int n = 16;
        for (int i = 0; i < n / 2; ++i) {
            double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = z;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                pp = n * (z * p1 - p0) / (z * z - 1.0);
                const double dz = p1 / pp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            x[i] = -z;
            x[n - 1 - i] = z;
            w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
        }
    }
};

double gl_panel(const std::function<double(double)>& f, double a, double b) {
    static const gl16 q;
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 16; ++i) s += q.w[i] * f(c + hw * q.x[i]);
    return s * hw;
}

}  // namespace

double integrate_graded(const std::function<double(double)>& f, double a, double b, int levels,
                        int panels_mid) {
    if (!(b > a)) return 0.0;
    const double len = b - a;
    // panel edges: geometric toward both endpoints, uniform across the middle third
    std::vector<double> edges;
    edges.push_back(a);
    for (int k = levels; k >= 0; --k) edges.push_back(a + len / 3.0 * std::pow(0.5, k));
    for (int j = 1; j < panels_mid; ++j)
        edges.push_back(a + len / 3.0 + len / 3.0 * j / panels_mid);
    for (int k = 0; k <= levels; ++k) edges.push_back(b - len / 3.0 * std::pow(0.5, k));
    edges.push_back(b);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        if (edges[i + 1] > edges[i]) total += gl_panel(f, edges[i], edges[i + 1]);
    return total;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) s += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
    return s;
}

line_fit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("fit_line: need >= 2 points");
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    line_fit out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    if (syy > 0.0) {
        double ssr = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = y[i] - (out.intercept + out.slope * x[i]);
            ssr += e * e;
        }
        out.r_squared = 1.0 - ssr / syy;
    } else {
        out.r_squared = 1.0;
    }
    return out;
}

}  // namespace sharpwave
