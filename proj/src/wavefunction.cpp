#include "pwlab/wavefunction.hpp"

#include <cmath>

#include "pwlab/errors.hpp"

namespace pwlab {

double WaveFunction1D::norm2() const {
    double s = 0.0;
    for (const cdouble& a : amp) s += std::norm(a);
    return s * grid.spacing();
}

double WaveFunction1D::max_abs() const {
    double m = 0.0;
    for (const cdouble& a : amp) m = std::max(m, std::abs(a));
    return m;
}

bool WaveFunction1D::is_normalized(double tol) const {
    return std::abs(norm2() - 1.0) <= tol;
}

WaveFunction1D& WaveFunction1D::normalize() {
    const double n2 = norm2();
    if (!(n2 > 0.0)) throw NotNormalizedError("cannot normalize the zero wave function");
    const double inv = 1.0 / std::sqrt(n2);
    for (cdouble& a : amp) a *= inv;
    return *this;
}

cdouble inner(const WaveFunction1D& a, const WaveFunction1D& b) {
    if (!a.grid.same_as(b.grid))
        throw ConfigError("inner product requires matching grids");
    cdouble s = 0.0;
    for (int i = 0; i < a.grid.size(); ++i) s += std::conj(a.amp[i]) * b.amp[i];
    return s * a.grid.spacing();
}

} // namespace pwlab
