#pragma once

#include <vector>

namespace sharpwave {

// Shape-preserving monotone cubic (Fritsch-Carlson). On monotone data the
// interpolant is monotone, which the delayed-source reader relies on.
class pchip {
  public:
    pchip() = default;
    pchip(std::vector<double> x, std::vector<double> y);

    double operator()(double q) const;
    double deriv(double q) const;

    bool empty() const { return x_.empty(); }
    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

  private:
    std::vector<double> x_, y_, d_;
    std::size_t locate(double q) const;
};

// Piecewise-linear interpolation on a sorted grid, clamped at the ends.
double lerp_sorted(const std::vector<double>& x, const std::vector<double>& y, double q);

}  // namespace sharpwave
