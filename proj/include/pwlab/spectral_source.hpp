#pragma once

#include <vector>

#include "pwlab/oscillator.hpp"

namespace pwlab {

// psi(t) reconstructed on demand from eigenbasis coefficients frozen at
// construction. Modes with |coeff| <= 1e-13 of the norm are dropped once,
// here, so the full-grid evaluation and the windowed trajectory path see the
// same truncation and produce bitwise identical amplitudes.
//
// References the basis; the basis must outlive the source.
class SpectralEvolution {
public:
    // Throws TruncationError when the basis captures < 1 - 1e-8 of the norm.
    SpectralEvolution(const HOEigenbasis& basis, const WaveFunction1D& psi0);

    const Grid1D& grid() const { return basis_->grid(); }
    const OscillatorParams& params() const { return basis_->params(); }
    double start_time() const { return t0_; }
    int active_modes() const { return static_cast<int>(active_.size()); }

    // Node-floor reference: max |psi| at the start time. The norm is
    // conserved, so this stays the right magnitude at all times.
    double amplitude_scale() const { return scale_; }

    // Coefficient times evolution phase for every active mode at time t,
    // written into w (active_modes() entries).
    void mode_weights(double t, cdouble* w) const;

    // Amplitudes on cells [i0, i0+count) for the given mode weights.
    void eval_window(const cdouble* w, int i0, int count, cdouble* out) const;

    // Full wave function at time t; built through the same windowed path.
    WaveFunction1D eval(double t) const;

private:
    const HOEigenbasis* basis_;
    std::vector<int> active_;
    std::vector<double> energy_;
    std::vector<cdouble> coeff_;
    double t0_;
    double scale_;
};

} // namespace pwlab
