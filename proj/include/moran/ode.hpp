#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace moran {

/// Adaptive Dormand-Prince 5(4) integration of y' = f(t, y) from t0 to t1
/// for a small fixed-size state. f has signature
///   std::array<double,Dim> f(double t, const std::array<double,Dim>& y).
template <std::size_t Dim, typename F>
std::array<double, Dim> integrate_ode(F&& f, std::array<double, Dim> y, double t0, double t1,
                                      double rel_tol = 1e-10, double abs_tol = 1e-12) {
    using State = std::array<double, Dim>;
    if (t0 == t1) return y;
    const double dir = (t1 > t0) ? 1.0 : -1.0;

    // Butcher tableau (Dormand-Prince).
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    double t = t0;
    double h = dir * std::min(std::abs(t1 - t0), 0.1);
    State k1 = f(t, y);
    const int max_steps = 1000000;
    for (int step = 0; step < max_steps; ++step) {
        if ((t - t1) * dir >= 0.0) return y;
        if ((t + h - t1) * dir > 0.0) h = t1 - t;

        State y2, y3, y4, y5, y6, y7;
        for (std::size_t i = 0; i < Dim; ++i) y2[i] = y[i] + h * a21 * k1[i];
        State k2 = f(t + c2 * h, y2);
        for (std::size_t i = 0; i < Dim; ++i) y3[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        State k3 = f(t + c3 * h, y3);
        for (std::size_t i = 0; i < Dim; ++i)
            y4[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        State k4 = f(t + c4 * h, y4);
        for (std::size_t i = 0; i < Dim; ++i)
            y5[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        State k5 = f(t + c5 * h, y5);
        for (std::size_t i = 0; i < Dim; ++i)
            y6[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        State k6 = f(t + h, y6);
        for (std::size_t i = 0; i < Dim; ++i)
            y7[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        State k7 = f(t + h, y7);

        double err = 0.0;
        for (std::size_t i = 0; i < Dim; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                  e7 * k7[i]);
            const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y7[i]));
            err = std::max(err, std::abs(e) / sc);
        }
        if (err <= 1.0) {
            t += h;
            y = y7;
            k1 = k7;  // FSAL
        }
        const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
        h *= fac;
        if (std::abs(h) < 1e-300) throw std::runtime_error("integrate_ode: step size underflow");
    }
    throw std::runtime_error("integrate_ode: max step count exceeded");
}

}  // namespace moran
