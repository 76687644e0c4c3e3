#pragma once

// Independent closed forms and quadratures the tests check library results
// against. Everything here comes straight from the textbook formulas and
// calls nothing in the library.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

// First four oscillator eigenfunctions (hbar = m = omega = 1), explicit
// normalized Hermite forms.
inline double u0(double x) { return std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x); }
inline double u1(double x) { return std::sqrt(2.0) * x * u0(x); }
inline double u2(double x) { return (2.0 * x * x - 1.0) / std::sqrt(2.0) * u0(x); }
inline double u3(double x) { return (2.0 * x * x - 3.0) * x / std::sqrt(3.0) * u0(x); }

inline double du0(double x) { return -x * u0(x); }
inline double du1(double x) { return std::sqrt(2.0) * (1.0 - x * x) * u0(x); }

// Ground-state position CDF.
inline double cdf0(double x) { return 0.5 * (1.0 + std::erf(x)); }

// Composite Simpson: n panels, n even.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

} // namespace oracle
