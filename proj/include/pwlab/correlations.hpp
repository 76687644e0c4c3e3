#pragma once

#include <vector>

#include "pwlab/oscillator.hpp"

namespace pwlab {

// Density operator as a continuum kernel rho(x_i, x_j), row-major n x n.
// Normalization convention: trace * spacing = 1.
struct DensityOperator {
    Grid1D grid;
    std::vector<cdouble> kernel;

    static DensityOperator pure(const WaveFunction1D& psi);
    double trace_times_spacing() const;
};

// Joint probability of finding the system in cell i at t1 and cell j at
// t1 + tau under sequential position measurements, row-major p[i*n + j].
struct TwoTimeJointDistribution {
    Grid1D grid;
    double t1, tau;
    std::vector<double> p;
    double ket_deficit_max;  // worst position-ket expansion deficit seen

    double total() const;
};

// Builds the joint distribution by collapsing onto position cells at t1 and
// propagating the kets by tau through the basis:
// p(i, j) = |<x_j|U(tau)|x_i>|^2 * <x_i|U(t1) rho U(t1)^dag|x_i>.
// Throws TruncationError when a position ket expands with less than 0.95 of
// its norm (use a complete basis). Parallel kernel.
TwoTimeJointDistribution joint_two_time_distribution(const DensityOperator& rho, double t1,
                                                     double tau, const HOEigenbasis& basis,
                                                     Exec exec = Exec::parallel);

// sum_{ij} x_i x_j p(i, j).
double correlation_from_distribution(const TwoTimeJointDistribution& dist);

// <psi0| X(t1 + tau) X(t1) |psi0> in the basis representation. The measured
// two-time correlation is the real part; the imaginary part is the
// commutator's contribution.
cdouble heisenberg_two_time_product(const WaveFunction1D& psi0, double t1, double tau,
                                    const HOEigenbasis& basis);
double heisenberg_two_time_expectation(const WaveFunction1D& psi0, double t1, double tau,
                                       const HOEigenbasis& basis);

} // namespace pwlab
