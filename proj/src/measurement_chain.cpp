#include "pwlab/measurement_chain.hpp"

#include <cmath>
#include <exception>
#include <string>

#include "pwlab/errors.hpp"

namespace pwlab {

double GlobalState::total_probability() const {
    double s = 0.0;
    for (const ChainAmplitude& e : amps) s += std::norm(e.amp);
    return s;
}

double PointerJointDistribution::total() const {
    double s = 0.0;
    for (double v : p) s += v;
    return s;
}

namespace {

void require_stage(const GlobalState& state, ChainStage expected, const char* op) {
    if (state.stage != expected)
        throw WrongStageError(std::string(op) + " applied at the wrong chain stage");
}

} // namespace

GlobalState prepare_global(const WaveFunction1D& psi0) {
    if (!psi0.is_normalized(1e-8))
        throw NotNormalizedError("chain preparation needs a normalized state");
    const int n = psi0.grid.size();
    const double sqrth = std::sqrt(psi0.grid.spacing());
    GlobalState s{psi0.grid, ChainStage::prepared, {}, 0.0};
    s.amps.reserve(n);
    for (int i = 0; i < n; ++i)
        s.amps.push_back({i, kReadyLabel, kReadyLabel, psi0.amp[i] * sqrth});
    return s;
}

GlobalState apply_first_measurement(const GlobalState& state) {
    require_stage(state, ChainStage::prepared, "first measurement");
    GlobalState out{state.grid, ChainStage::after_first, state.amps, state.branch_deficit_max};
    for (ChainAmplitude& e : out.amps) e.a = e.cell;
    return out;
}

GlobalState evolve_between_measurements(const GlobalState& state, double tau,
                                        const HOEigenbasis& basis, Exec exec) {
    require_stage(state, ChainStage::after_first, "evolution");
    if (!state.grid.same_as(basis.grid()))
        throw ConfigError("chain state and basis grids differ");
    const int n = state.grid.size();
    const int m = basis.nstates();
    const double h = state.grid.spacing();
    const double sqrth = std::sqrt(h);
    const double ih = 1.0 / basis.params().hbar;
    const int branches = static_cast<int>(state.amps.size());

    std::vector<cdouble> phase(m);
    for (int k = 0; k < m; ++k) phase[k] = std::polar(1.0, -basis.energy(k) * tau * ih);

    // Transposed copy of the basis keeps the k-contraction contiguous.
    std::vector<double> phit(static_cast<std::size_t>(n) * m);
    for (int k = 0; k < m; ++k)
        for (int j = 0; j < n; ++j)
            phit[static_cast<std::size_t>(j) * m + k] = basis.state(k)[j];

    GlobalState out{state.grid, ChainStage::evolved,
                    std::vector<ChainAmplitude>(static_cast<std::size_t>(branches) * n), 0.0};
    std::vector<double> deficits(branches, 0.0);
    std::exception_ptr first_error = nullptr;
    const bool parallel = exec == Exec::parallel;
#ifndef _OPENMP
    (void)parallel;
#else
#pragma omp parallel for schedule(static) num_threads(worker_count()) if (parallel)
#endif
    for (int bi = 0; bi < branches; ++bi) {
        try {
            const ChainAmplitude& e = state.amps[bi];
            // Position-ket expansion: kappa_k = phi_k(x_c) * sqrt(h).
            std::vector<cdouble> kz(m);
            double captured = 0.0;
            for (int k = 0; k < m; ++k) {
                const double kap = basis.state(k)[e.cell] * sqrth;
                captured += kap * kap;
                kz[k] = kap * phase[k];
            }
            deficits[bi] = 1.0 - captured;
            if (deficits[bi] > 0.05)
                throw TruncationError("branch at cell " + std::to_string(e.cell) + " loses " +
                                      std::to_string(deficits[bi]) +
                                      " of its norm; use a complete basis");
            ChainAmplitude* slot = out.amps.data() + static_cast<std::size_t>(bi) * n;
            for (int j = 0; j < n; ++j) {
                const double* pj = phit.data() + static_cast<std::size_t>(j) * m;
                cdouble acc = 0.0;
                for (int k = 0; k < m; ++k) acc += kz[k] * pj[k];
                slot[j] = {j, e.a, e.b, e.amp * (acc * sqrth)};
            }
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            {
                if (!first_error) first_error = std::current_exception();
            }
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    for (double d : deficits) out.branch_deficit_max = std::max(out.branch_deficit_max, d);
    return out;
}

GlobalState apply_second_measurement(const GlobalState& state) {
    require_stage(state, ChainStage::evolved, "second measurement");
    GlobalState out{state.grid, ChainStage::after_second, state.amps, state.branch_deficit_max};
    for (ChainAmplitude& e : out.amps) e.b = e.cell;
    return out;
}

PointerJointDistribution joint_pointer_distribution(const GlobalState& state) {
    require_stage(state, ChainStage::after_second, "pointer distribution");
    const int n = state.grid.size();
    PointerJointDistribution dist{n, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0)};
    for (const ChainAmplitude& e : state.amps)
        dist.p[static_cast<std::size_t>(e.a) * n + e.b] += std::norm(e.amp);
    if (std::abs(dist.total() - 1.0) > 1e-8)
        throw TruncationError("pointer distribution does not sum to 1; the evolution basis "
                              "lost branch norm");
    return dist;
}

} // namespace pwlab
