#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "pwlab/errors.hpp"

namespace pwlab {

// Embedded Cash-Karp 4(5) integrator with absolute local-error control, for
// the small systems used here (dim <= 4). rhs(t, y, dy) fills dy; on_sample
// (t, y) fires once per entry of sample_times, which must be strictly
// increasing and contained in [t0, t1]. y holds dim values and ends at t1.
template <class Rhs, class Sample>
void integrate_adaptive(Rhs&& rhs, int dim, double t0, double t1, double tol,
                        std::span<const double> sample_times, double* y, Sample&& on_sample) {
    constexpr int kMaxDim = 4;
    if (dim < 1 || dim > kMaxDim) throw ConfigError("integrator supports 1..4 components");
    if (!(tol > 0.0)) throw ConfigError("integrator tolerance must be positive");
    if (!(t1 >= t0)) throw ConfigError("integration interval is reversed");
    double prev = t0;
    for (double ts : sample_times) {
        if (!(ts >= t0 && ts <= t1)) throw ConfigError("sample time outside the integration interval");
        if (ts < prev || (ts == prev && ts != t0))
            throw ConfigError("sample times must be strictly increasing");
        prev = ts;
    }

    // Cash-Karp tableau.
    constexpr double a2 = 1.0 / 5, a3 = 3.0 / 10, a4 = 3.0 / 5, a5 = 1.0, a6 = 7.0 / 8;
    constexpr double b21 = 1.0 / 5;
    constexpr double b31 = 3.0 / 40, b32 = 9.0 / 40;
    constexpr double b41 = 3.0 / 10, b42 = -9.0 / 10, b43 = 6.0 / 5;
    constexpr double b51 = -11.0 / 54, b52 = 5.0 / 2, b53 = -70.0 / 27, b54 = 35.0 / 27;
    constexpr double b61 = 1631.0 / 55296, b62 = 175.0 / 512, b63 = 575.0 / 13824,
                     b64 = 44275.0 / 110592, b65 = 253.0 / 4096;
    constexpr double c1 = 37.0 / 378, c3 = 250.0 / 621, c4 = 125.0 / 594, c6 = 512.0 / 1771;
    constexpr double e1 = c1 - 2825.0 / 27648, e3 = c3 - 18575.0 / 48384,
                     e4 = c4 - 13525.0 / 55296, e5 = -277.0 / 14336, e6 = c6 - 1.0 / 4;

    const double span_t = t1 - t0;
    const double h_min = 1e-14 * std::max(1.0, span_t);
    double t = t0;
    double h = span_t > 0.0 ? span_t / 64.0 : 0.0;

    double k1[kMaxDim], k2[kMaxDim], k3[kMaxDim], k4[kMaxDim], k5[kMaxDim], k6[kMaxDim];
    double yt[kMaxDim], ynew[kMaxDim];

    auto advance_to = [&](double ts) {
        while (t < ts) {
            double hs = std::min(h, ts - t);
            if (hs < h_min) throw StepUnderflowError("adaptive step collapsed below the resolution limit");
            rhs(t, y, k1);
            for (int i = 0; i < dim; ++i) yt[i] = y[i] + hs * b21 * k1[i];
            rhs(t + a2 * hs, yt, k2);
            for (int i = 0; i < dim; ++i) yt[i] = y[i] + hs * (b31 * k1[i] + b32 * k2[i]);
            rhs(t + a3 * hs, yt, k3);
            for (int i = 0; i < dim; ++i) yt[i] = y[i] + hs * (b41 * k1[i] + b42 * k2[i] + b43 * k3[i]);
            rhs(t + a4 * hs, yt, k4);
            for (int i = 0; i < dim; ++i)
                yt[i] = y[i] + hs * (b51 * k1[i] + b52 * k2[i] + b53 * k3[i] + b54 * k4[i]);
            rhs(t + a5 * hs, yt, k5);
            for (int i = 0; i < dim; ++i)
                yt[i] = y[i] + hs * (b61 * k1[i] + b62 * k2[i] + b63 * k3[i] + b64 * k4[i] + b65 * k5[i]);
            rhs(t + a6 * hs, yt, k6);

            double err = 0.0;
            for (int i = 0; i < dim; ++i) {
                ynew[i] = y[i] + hs * (c1 * k1[i] + c3 * k3[i] + c4 * k4[i] + c6 * k6[i]);
                const double ei = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i]);
                err = std::max(err, std::abs(ei));
            }
            const double factor =
                err > 0.0 ? std::clamp(0.9 * std::pow(tol / err, 0.2), 0.2, 5.0) : 5.0;
            if (err <= tol) {
                t += hs;
                for (int i = 0; i < dim; ++i) y[i] = ynew[i];
                // A step clamped to land on ts has an artificially small
                // error; do not let it shrink the cruising step size.
                h = hs == h ? hs * factor : std::max(h, hs * factor);
            } else {
                h = hs * factor;
            }
        }
    };
    for (double ts : sample_times) {
        advance_to(ts);
        on_sample(ts, y);
    }
    advance_to(t1);
}

} // namespace pwlab
