#include "pwlab/guidance.hpp"

#include <cmath>

#include "pwlab/errors.hpp"

namespace pwlab {

namespace detail {

int stencil_base(const Grid1D& grid, double x, double* s) {
    if (!std::isfinite(x)) throw OutOfDomainError("position is not finite");
    const double h = grid.spacing();
    const int j = static_cast<int>(std::floor((x - grid.min()) / h));
    // Cells j-3 .. j+4 must exist: the derivative stencil reaches two cells
    // beyond each interpolation node.
    if (j < 3 || j + 4 > grid.size() - 1)
        throw OutOfDomainError("position too close to the grid boundary for the velocity stencil");
    *s = (x - grid.point(j)) / h;
    return j - 3;
}

StencilValue eval_stencil(const cdouble* w, double s, double spacing) {
    // Derivatives at the four interpolation nodes (cells j-1 .. j+2, local
    // indices 2..5), 4th-order centered.
    const double inv12h = 1.0 / (12.0 * spacing);
    cdouble d[4];
    for (int m = 2; m <= 5; ++m)
        d[m - 2] = (-w[m + 2] + 8.0 * w[m + 1] - 8.0 * w[m - 1] + w[m - 2]) * inv12h;
    // Cubic Lagrange weights for nodes at offsets -1, 0, 1, 2.
    const double c0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
    const double c1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
    const double c2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
    const double c3 = (s + 1.0) * s * (s - 1.0) / 6.0;
    StencilValue v;
    v.psi = c0 * w[2] + c1 * w[3] + c2 * w[4] + c3 * w[5];
    v.dpsi = c0 * d[0] + c1 * d[1] + c2 * d[2] + c3 * d[3];
    return v;
}

} // namespace detail

double guidance_velocity(const WaveFunction1D& psi, double x, const OscillatorParams& params) {
    params.validate();
    double s;
    const int base = detail::stencil_base(psi.grid, x, &s);
    const detail::StencilValue v = detail::eval_stencil(psi.amp.data() + base, s, psi.grid.spacing());
    if (std::abs(v.psi) <= 1e-10 * psi.max_abs())
        throw NearNodeError("amplitude at the node floor: velocity undefined");
    return detail::velocity_of(v, params);
}

VelocityProbe::VelocityProbe(const SpectralEvolution& source)
    : source_(&source),
      weights_(source.active_modes()),
      floor_(1e-10 * source.amplitude_scale()),
      cached_t_(0.0),
      have_t_(false) {}

double VelocityProbe::operator()(double t, double x) {
    if (!have_t_ || t != cached_t_) {
        source_->mode_weights(t, weights_.data());
        cached_t_ = t;
        have_t_ = true;
    }
    double s;
    const int base = detail::stencil_base(source_->grid(), x, &s);
    cdouble w[8];
    source_->eval_window(weights_.data(), base, 8, w);
    const detail::StencilValue v = detail::eval_stencil(w, s, source_->grid().spacing());
    if (std::abs(v.psi) <= floor_)
        throw NearNodeError("amplitude at the node floor: velocity undefined");
    return detail::velocity_of(v, source_->params());
}

} // namespace pwlab
