#pragma once

#include <vector>

#include "pwlab/spectral_source.hpp"

namespace pwlab {

namespace detail {

// Stencil arithmetic shared by the grid-level operation and the trajectory
// fast path so that both produce bitwise identical velocities. w spans the 8
// cells j-3 .. j+4 around x; s = (x - point(j)) / spacing in [0, 1).
struct StencilValue {
    cdouble psi, dpsi;
};
StencilValue eval_stencil(const cdouble* w, double s, double spacing);

// Leftmost cell of the 8-cell stencil for x; throws OutOfDomainError when the
// stencil would leave the grid. s receives the fractional offset.
int stencil_base(const Grid1D& grid, double x, double* s);

inline double velocity_of(const StencilValue& v, const OscillatorParams& p) {
    return p.hbar / p.mass * std::imag(v.dpsi / v.psi);
}

} // namespace detail

// Guidance velocity (hbar/m) Im(psi'(x)/psi(x)). psi' comes from 4th-order
// centered differences; psi and psi' are moved off-grid with cubic Lagrange
// interpolation. Throws NearNodeError when the interpolated amplitude falls
// to or below 1e-10 of max|psi|; the floor is never clamped over.
double guidance_velocity(const WaveFunction1D& psi, double x, const OscillatorParams& params);

// Velocity evaluations along a trajectory: identical stencil arithmetic to
// guidance_velocity, with psi(t) synthesized only on the 8 stencil cells.
class VelocityProbe {
public:
    explicit VelocityProbe(const SpectralEvolution& source);
    double operator()(double t, double x);

private:
    const SpectralEvolution* source_;
    std::vector<cdouble> weights_;
    double floor_;
    double cached_t_;
    bool have_t_;
};

} // namespace pwlab
