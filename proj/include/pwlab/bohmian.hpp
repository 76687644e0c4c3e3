#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pwlab/guidance.hpp"

namespace pwlab {

struct Trajectory {
    std::vector<double> times;
    std::vector<double> positions;
};

// dx/dt = guidance velocity of psi(t), integrated adaptively; positions are
// reported at sample_times (strictly increasing, inside [t_start, t_end]).
Trajectory integrate_trajectory(double x0, const SpectralEvolution& source, double t_start,
                                double t_end, double tol, std::span<const double> sample_times);

// Positions drawn from |psi|^2 along with the seed that produced them.
struct Ensemble {
    std::uint64_t seed;
    std::vector<double> initial_positions;
};

// Piecewise-linear CDF of a discrete density: cell i carries mass
// |psi_i|^2 * spacing spread uniformly over [x_i - h/2, x_i + h/2].
class PiecewiseCdf {
public:
    explicit PiecewiseCdf(const WaveFunction1D& psi);
    double value(double x) const;    // P(X <= x)
    double invert(double u) const;   // u in [0, 1)
private:
    std::vector<double> edges_;  // n+1 cell edges
    std::vector<double> cum_;    // n+1 cumulative masses, cum_[0] = 0, cum_[n] = 1
};

// count positions drawn from |psi|^2 by inverse-CDF sampling. psi must be
// normalized within 1e-8. Same seed, same ensemble, on every platform.
Ensemble sample_ensemble(const WaveFunction1D& psi, int count, std::uint64_t seed);

// Kolmogorov-Smirnov distance between the sample set and a target CDF.
double ks_distance(std::vector<double> samples, const PiecewiseCdf& target);

// Integrates every ensemble member from the source start time to t_end and
// returns the final positions. Parallel kernel: members are independent and
// the result is invariant to the worker count.
std::vector<double> transport_ensemble(const Ensemble& ensemble, const SpectralEvolution& source,
                                       double t_end, double tol = 1e-9,
                                       Exec exec = Exec::parallel);

// Samples |psi(0)|^2, transports the ensemble to t_end, and returns the KS
// distance between the transported points and |psi(t_end)|^2. Equivariance
// says this stays at the O(n^{-1/2}) sampling noise level.
double equivariance_check(const WaveFunction1D& psi0, double t_end, int count,
                          std::uint64_t seed, const HOEigenbasis& basis,
                          Exec exec = Exec::parallel);

struct BohmianCorrelation {
    double value;       // ensemble average of x(t1+tau) * x(t1)
    double quadrature;  // deterministic second moment when trajectories are constant, else NaN
    bool constant_trajectories;
};

// Two-time position correlation along guidance trajectories. For a
// stationary state (an energy eigenstate: detected exactly through the basis
// when one is given, else by a Hamiltonian-residual test) the velocity field
// vanishes, trajectories are constant and the deterministic answer is the
// second moment, filled into `quadrature`. The general case integrates
// trajectories and needs the basis to evolve psi.
BohmianCorrelation bohmian_two_time_expectation(const WaveFunction1D& psi0, double t1, double tau,
                                                const OscillatorParams& params, int count,
                                                std::uint64_t seed,
                                                const HOEigenbasis* basis_for_moving = nullptr);

} // namespace pwlab
