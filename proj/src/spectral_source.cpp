#include "pwlab/spectral_source.hpp"

#include <cmath>
#include <string>

#include "pwlab/errors.hpp"

namespace pwlab {

SpectralEvolution::SpectralEvolution(const HOEigenbasis& basis, const WaveFunction1D& psi0)
    : basis_(&basis), t0_(psi0.time) {
    const HOEigenbasis::Expansion e = basis.expand(psi0);
    if (e.captured < 1.0 - 1e-8)
        throw TruncationError("eigenbasis captures only " + std::to_string(e.captured) +
                              " of the state norm; raise nmax or use a complete basis");
    const double floor = 1e-13 * std::sqrt(psi0.norm2());
    for (int k = 0; k < basis.nstates(); ++k) {
        if (std::abs(e.coeff[k]) > floor) {
            active_.push_back(k);
            energy_.push_back(basis.energy(k));
            coeff_.push_back(e.coeff[k]);
        }
    }
    scale_ = psi0.max_abs();
}

void SpectralEvolution::mode_weights(double t, cdouble* w) const {
    const double dt = t - t0_;
    const double ih = 1.0 / params().hbar;
    for (std::size_t a = 0; a < active_.size(); ++a)
        w[a] = coeff_[a] * std::polar(1.0, -energy_[a] * dt * ih);
}

void SpectralEvolution::eval_window(const cdouble* w, int i0, int count, cdouble* out) const {
    for (int c = 0; c < count; ++c) {
        const int i = i0 + c;
        cdouble acc = 0.0;
        for (std::size_t a = 0; a < active_.size(); ++a)
            acc += w[a] * basis_->state(active_[a])[i];
        out[c] = acc;
    }
}

WaveFunction1D SpectralEvolution::eval(double t) const {
    WaveFunction1D psi{grid(), std::vector<cdouble>(grid().size()), t};
    std::vector<cdouble> w(active_.size());
    mode_weights(t, w.data());
    eval_window(w.data(), 0, grid().size(), psi.amp.data());
    return psi;
}

} // namespace pwlab
