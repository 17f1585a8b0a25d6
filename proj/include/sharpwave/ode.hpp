#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "sharpwave/errors.hpp"

namespace sharpwave {

// Adaptive Dormand-Prince 5(4) with cubic-Hermite dense output and event
// localization. State dimension is a compile-time constant; the solvers here
// only ever need n = 1 or 2.

template <std::size_t N>
using state = std::array<double, N>;

template <std::size_t N>
struct ode_event {
    // continuous event function; fires on a sign change matching direction
    std::function<double(double, const state<N>&)> fn;
    int direction = 0;  // +1 up-crossing, -1 down-crossing, 0 any
    bool terminal = true;
};

template <std::size_t N>
struct ode_options {
    double rtol = 1e-9;
    double atol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    double init_step = 0.0;  // 0 = automatic
    long max_steps = 4000000;
};

// One accepted step with endpoint derivatives; eval() is the cubic Hermite
// interpolant on [t0, t1], O(h^4) locally, within tolerance for the step
// sizes this project caps at.
template <std::size_t N>
struct ode_piece {
    double t0, t1;
    state<N> y0, y1, f0, f1;

    state<N> eval(double t) const {
        const double h = t1 - t0;
        const double s = (t - t0) / h;
        const double s2 = s * s, s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1;
        const double h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2;
        const double h11 = s3 - s2;
        state<N> y;
        for (std::size_t i = 0; i < N; ++i)
            y[i] = h00 * y0[i] + h * h10 * f0[i] + h01 * y1[i] + h * h11 * f1[i];
        return y;
    }
};

template <std::size_t N>
struct ode_result {
    std::vector<ode_piece<N>> pieces;
    double t_end = 0.0;
    state<N> y_end{};
    int event_index = -1;   // -1: reached t1 without a terminal event
    double t_event = 0.0;
};

template <std::size_t N>
ode_result<N> integrate_ode(const std::function<void(double, const state<N>&, state<N>&)>& rhs,
                            double t0, double t1, state<N> y0, const ode_options<N>& opt,
                            const std::vector<ode_event<N>>& events = {}) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

    ode_result<N> res;
    state<N> y = y0, k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
    double t = t0;
    rhs(t, y, k1);

    double h = opt.init_step;
    if (h <= 0.0) {
        double ny = 0.0, nf = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            ny = std::max(ny, std::abs(y[i]));
            nf = std::max(nf, std::abs(k1[i]));
        }
        h = (nf > 0.0) ? 0.01 * (ny + opt.atol) / nf : 1e-6;
        h = std::min(h, (t1 - t0) / 10.0);
    }
    h = std::min(h, opt.max_step);

    std::vector<double> ev_prev(events.size());
    for (std::size_t e = 0; e < events.size(); ++e) ev_prev[e] = events[e].fn(t, y);

    for (long step = 0; step < opt.max_steps; ++step) {
        if (t >= t1) break;
        h = std::min({h, opt.max_step, t1 - t});
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw step_failure("ode step size underflow at t = " + std::to_string(t));

        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, ytmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, ynew, k7);  // FSAL

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double ei =
                h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / N);

        if (!std::isfinite(err)) {
            h *= 0.25;
            continue;
        }
        if (err > 1.0) {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            continue;
        }

        ode_piece<N> piece{t, t + h, y, ynew, k1, k7};

        // events: bisection on the Hermite interpolant; fn is continuous so a
        // sign change over the step brackets the crossing
        int fired = -1;
        double t_fire = 0.0;
        for (std::size_t e = 0; e < events.size(); ++e) {
            const double g0 = ev_prev[e];
            const double g1 = events[e].fn(t + h, ynew);
            const bool crossed = (g0 <= 0.0 && g1 > 0.0 && events[e].direction >= 0) ||
                                 (g0 >= 0.0 && g1 < 0.0 && events[e].direction <= 0) ||
                                 (g0 * g1 < 0.0 && events[e].direction == 0);
            if (!crossed) continue;
            double lo = t, hi = t + h, glo = g0;
            for (int it = 0; it < 80 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                const double gm = events[e].fn(mid, piece.eval(mid));
                if ((glo <= 0.0) == (gm <= 0.0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            const double tc = hi;
            if (fired < 0 || tc < t_fire) {
                fired = static_cast<int>(e);
                t_fire = tc;
            }
        }

        if (fired >= 0 && events[static_cast<std::size_t>(fired)].terminal) {
            // evaluate before truncating: eval reads t1/y1
            const state<N> y_fire = piece.eval(t_fire);
            piece.t1 = t_fire;
            piece.y1 = y_fire;
            rhs(t_fire, piece.y1, piece.f1);
            res.pieces.push_back(piece);
            res.t_end = t_fire;
            res.y_end = piece.y1;
            res.event_index = fired;
            res.t_event = t_fire;
            return res;
        }

        res.pieces.push_back(piece);
        t += h;
        y = ynew;
        k1 = k7;
        for (std::size_t e = 0; e < events.size(); ++e) ev_prev[e] = events[e].fn(t, y);
        h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2)));
    }

    if (t < t1) throw step_failure("ode max step count exceeded");
    res.t_end = t;
    res.y_end = y;
    return res;
}

}  // namespace sharpwave
