#pragma once

#include <vector>

#include "pwlab/oscillator.hpp"

namespace pwlab {

// Stage machine for the two-measurement chain. Operations only apply at the
// stage they expect; anything else is a WrongStageError.
enum class ChainStage { prepared, after_first, evolved, after_second };

// Pointer label: the cell index recorded by a measurement, or kReadyLabel
// while the pointer has not fired yet.
inline constexpr int kReadyLabel = -1;

// One branch amplitude of the system | first pointer | second pointer state.
// Only nonzero branches are stored: every absent (cell, a, b) combination has
// amplitude exactly zero.
struct ChainAmplitude {
    int cell;  // system position cell
    int a;     // first pointer label
    int b;     // second pointer label
    cdouble amp;
};

struct GlobalState {
    Grid1D grid;
    ChainStage stage;
    std::vector<ChainAmplitude> amps;
    double branch_deficit_max;  // worst per-branch norm deficit from evolution

    double total_probability() const;
};

// Entangles the system with two ready pointers: amplitudes psi_i * sqrt(h) on
// (cell i, ready, ready). psi0 must be normalized within 1e-8.
GlobalState prepare_global(const WaveFunction1D& psi0);

// First pointer fires: each cell branch gets its cell recorded in label a.
// An ideal position measurement in the cell basis, so it is an isometry.
GlobalState apply_first_measurement(const GlobalState& state);

// Propagates each branch's system ket by tau through the basis while the
// pointer labels ride along unchanged. A branch whose ket loses more than
// 0.05 of its norm in the basis is a TruncationError. Parallel kernel.
GlobalState evolve_between_measurements(const GlobalState& state, double tau,
                                        const HOEigenbasis& basis, Exec exec = Exec::parallel);

// Second pointer fires: label b records the system cell.
GlobalState apply_second_measurement(const GlobalState& state);

// Joint distribution of the two pointer readings, row-major p[a*n + b].
struct PointerJointDistribution {
    int n;
    std::vector<double> p;
    double total() const;
};

PointerJointDistribution joint_pointer_distribution(const GlobalState& state);

} // namespace pwlab
