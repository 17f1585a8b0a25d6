#include "sharpwave/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sharpwave {

pchip::pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("pchip: need >= 2 nodes, equal sizes");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(x_[i] < x_[i + 1])) throw std::invalid_argument("pchip: x must be strictly increasing");

    d_.assign(n, 0.0);
    std::vector<double> h(n - 1), s(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        s[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    if (n == 2) {
        d_[0] = d_[1] = s[0];
        return;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (s[i - 1] * s[i] <= 0.0) {
            d_[i] = 0.0;  // local extremum: flat tangent keeps shape
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
        }
    }
    // one-sided ends, limited so the first/last panel stays monotone
    auto end_slope = [](double h0, double h1, double s0, double s1) {
        double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        if (d * s0 <= 0.0) return 0.0;
        if (s0 * s1 < 0.0 && std::abs(d) > 3.0 * std::abs(s0)) return 3.0 * s0;
        return d;
    };
    d_[0] = end_slope(h[0], h[1], s[0], s[1]);
    d_[n - 1] = end_slope(h[n - 2], h[n - 3], s[n - 2], s[n - 3]);
}

std::size_t pchip::locate(double q) const {
    // rightmost panel start with x_[k] <= q, clamped to valid panels
    auto it = std::upper_bound(x_.begin(), x_.end(), q);
    std::size_t k = static_cast<std::size_t>(it - x_.begin());
    if (k == 0) return 0;
    if (k >= x_.size()) return x_.size() - 2;
    return k - 1;
}

double pchip::operator()(double q) const {
    const std::size_t k = locate(q);
    const double h = x_[k + 1] - x_[k];
    const double t = (q - x_[k]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[k] + h * h10 * d_[k] + h01 * y_[k + 1] + h * h11 * d_[k + 1];
}

double pchip::deriv(double q) const {
    const std::size_t k = locate(q);
    const double h = x_[k + 1] - x_[k];
    const double t = (q - x_[k]) / h;
    const double t2 = t * t;
    const double g00 = (6 * t2 - 6 * t) / h;
    const double g10 = 3 * t2 - 4 * t + 1;
    const double g01 = (-6 * t2 + 6 * t) / h;
    const double g11 = 3 * t2 - 2 * t;
    return g00 * y_[k] + g10 * d_[k] + g01 * y_[k + 1] + g11 * d_[k + 1];
}

double lerp_sorted(const std::vector<double>& x, const std::vector<double>& y, double q) {
    if (x.empty()) throw std::invalid_argument("lerp_sorted: empty grid");
    if (q <= x.front()) return y.front();
    if (q >= x.back()) return y.back();
    auto it = std::upper_bound(x.begin(), x.end(), q);
    std::size_t k = static_cast<std::size_t>(it - x.begin()) - 1;
    const double w = (q - x[k]) / (x[k + 1] - x[k]);
    return y[k] + w * (y[k + 1] - y[k]);
}

}  // namespace sharpwave
