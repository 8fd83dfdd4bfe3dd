// integrator.hpp — adaptive Dormand-Prince 5(4) for linear complex systems
//
// Error control is mixed absolute/relative per component; the step is
// accepted when max_i |err_i| / (atol + rtol * max(|y_i|, |y_new_i|)) <= 1.

#pragma once

#include "nrpb/errors.hpp"
#include "nrpb/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace nrpb::ode {

struct Tolerances {
    double rtol{1e-9};
    double atol{1e-12};
};

struct Stats {
    std::size_t accepted{0};
    std::size_t rejected{0};
};

// Integrates dy/dt = rhs(y) from t0 to t1 in place. `h` carries the step size
// between calls (pass 0 to pick one from `scale`, an estimate of ||rhs||).
template <typename Rhs>
Stats integrate(Rhs&& rhs, ComplexVector& y, double t0, double t1, double& h, double scale,
                const Tolerances& tol = {}) {
    // Dormand-Prince tableau.
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;
    (void)c2; (void)c3; (void)c4; (void)c5;  // autonomous system

    Stats stats;
    if (t1 <= t0) return stats;
    const double span = t1 - t0;
    if (h <= 0.0) h = std::min(span, 0.05 / std::max(scale, 1e-300));

    ComplexVector k1 = rhs(y);
    ComplexVector k2, k3, k4, k5, k6, k7, y_new, err;
    double t = t0;
    constexpr std::size_t kMaxSteps = 50'000'000;

    while (t < t1) {
        if (stats.accepted + stats.rejected > kMaxSteps) {
            throw StiffnessError("evolve: step budget exhausted; use steady_state or a shorter t_final");
        }
        const bool last = t + h >= t1;
        const double step = last ? t1 - t : h;
        if (step < 1e-14 * std::max(std::abs(t1), span)) {
            throw StiffnessError("evolve: step size underflow; use steady_state or a shorter t_final");
        }

        k2 = rhs(y + step * a21 * k1);
        k3 = rhs(y + step * (a31 * k1 + a32 * k2));
        k4 = rhs(y + step * (a41 * k1 + a42 * k2 + a43 * k3));
        k5 = rhs(y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        k6 = rhs(y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        y_new = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        k7 = rhs(y_new);
        err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err_norm = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double sc = tol.atol + tol.rtol * std::max(std::abs(y(i)), std::abs(y_new(i)));
            err_norm = std::max(err_norm, std::abs(err(i)) / sc);
        }

        if (err_norm <= 1.0) {
            t = last ? t1 : t + step;
            y.swap(y_new);
            k1.swap(k7);
            ++stats.accepted;
            const double grow = err_norm == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err_norm, -0.2));
            // Keep the pre-truncation step when the last step was clipped.
            if (!last) h = step * grow;
        } else {
            ++stats.rejected;
            h = step * std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
        }
    }
    return stats;
}

} // namespace nrpb::ode
