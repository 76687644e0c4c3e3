#pragma once

#include <cstddef>
#include <numbers>
#include <vector>

#include "pwlab/threads.hpp"
#include "pwlab/wavefunction.hpp"

namespace pwlab {

// Oscillator constants. Natural units (all 1) are the default; the fields stay
// explicit so dimensional runs remain possible.
struct OscillatorParams {
    double mass = 1.0;
    double omega = 1.0;
    double hbar = 1.0;

    double period() const { return 2.0 * std::numbers::pi / omega; }
    double energy(int n) const { return hbar * omega * (n + 0.5); }
    // Classical turning point of state n, sqrt((2n+1) hbar / (m omega)).
    double turning_point(int n) const;
    void validate() const;
};

// Eigenstate n sampled on the grid, discretely renormalized. Throws
// DomainTooSmallError when the state has not decayed below 1e-12 of its own
// peak at the grid boundary.
WaveFunction1D ho_eigenstate(int n, const OscillatorParams& params, const Grid1D& grid);

// Ground state displaced by `shift`, a coherent state at rest. Convenience
// preparation for tests and scenarios; renormalized discretely.
WaveFunction1D displaced_ground_state(double shift, const OscillatorParams& params, const Grid1D& grid);

// Oscillator eigenbasis sampled on a grid: the spectral representation of the
// evolution operator. Two constructions:
//  - truncated(): recurrence states 0..nmax, each discretely renormalized.
//    Faithful eigenstates while the grid covers their turning points.
//  - complete(): all grid.size() recurrence states, orthonormalized within
//    parity classes so the set is exactly unitary on the grid and position
//    kets expand with no deficit. Energies stay hbar*omega*(k+1/2); the high
//    modes are grid completion modes rather than physical eigenstates.
class HOEigenbasis {
public:
    static HOEigenbasis truncated(const OscillatorParams& params, const Grid1D& grid, int nmax);
    static HOEigenbasis complete(const OscillatorParams& params, const Grid1D& grid);

    const OscillatorParams& params() const { return params_; }
    const Grid1D& grid() const { return grid_; }
    int nstates() const { return nstates_; }
    double energy(int k) const { return params_.energy(k); }

    // State k as a contiguous row of grid().size() real samples.
    const double* state(int k) const {
        return rows_.data() + static_cast<std::size_t>(k) * grid_.size();
    }
    WaveFunction1D state_wavefunction(int k) const;

    struct Expansion {
        std::vector<cdouble> coeff;
        double captured;  // fraction of the squared norm recovered
    };
    Expansion expand(const WaveFunction1D& psi) const;

    // Captured norm fraction of the discrete position ket at cell i,
    // h * sum_k state_k(x_i)^2. Equals 1 for complete().
    double ket_captured(int i) const;

private:
    HOEigenbasis(const OscillatorParams& params, const Grid1D& grid, int nstates);

    OscillatorParams params_;
    Grid1D grid_;
    int nstates_;
    std::vector<double> rows_;
};

// Spectral propagation of psi by tau (any sign). Throws TruncationError when
// the basis captures less than 1 - 1e-8 of the squared norm.
WaveFunction1D propagate_ho(const WaveFunction1D& psi, double tau, const HOEigenbasis& basis);

// <x_j | U(tau) | x_i> for the discrete position kets (cell indicators scaled
// by 1/sqrt(spacing)), row-major [j*n + i]. Exactly unitary when the basis is
// complete(). Parallel kernel; serial is the reference implementation.
std::vector<cdouble> propagator_matrix(const HOEigenbasis& basis, double tau,
                                       Exec exec = Exec::parallel);

// Position operator in the basis representation, row-major nstates^2.
std::vector<double> position_matrix(const HOEigenbasis& basis);

} // namespace pwlab
