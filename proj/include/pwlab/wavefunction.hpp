#pragma once

#include <complex>
#include <vector>

#include "pwlab/grid.hpp"

namespace pwlab {

using cdouble = std::complex<double>;

// Complex amplitudes sampled on a grid, stamped with the physical time they
// describe. Normalization convention is discrete: sum |amp[i]|^2 * spacing = 1.
struct WaveFunction1D {
    Grid1D grid;
    std::vector<cdouble> amp;
    double time = 0.0;

    double norm2() const;   // sum |amp[i]|^2 * spacing
    double max_abs() const;
    bool is_normalized(double tol = 1e-10) const;
    WaveFunction1D& normalize();
};

// Discrete inner product sum conj(a)*b*spacing. Grids must match.
cdouble inner(const WaveFunction1D& a, const WaveFunction1D& b);

} // namespace pwlab
