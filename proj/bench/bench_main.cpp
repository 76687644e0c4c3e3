// Times each parallel kernel against its serial reference and verifies the
// results agree bitwise. Worker count comes from OpenMP, capped by
// PWLAB_THREADS.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <vector>

#include "pwlab/bohmian.hpp"
#include "pwlab/correlations.hpp"
#include "pwlab/measurement_chain.hpp"
#include "pwlab/oscillator.hpp"
#include "pwlab/two_slit.hpp"

namespace {

double time_of(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int failures = 0;

void report(const char* name, double serial_s, double parallel_s, bool identical) {
    std::printf("%-28s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  %s\n", name, serial_s,
                parallel_s, serial_s / parallel_s, identical ? "bitwise-equal" : "MISMATCH");
    if (!identical) ++failures;
}

template <class T>
bool same_bits(const std::vector<T>& a, const std::vector<T>& b) {
    return a.size() == b.size() &&
           (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0);
}

} // namespace

int main() {
    using namespace pwlab;
    std::printf("workers: %d\n\n", worker_count());

    const OscillatorParams params;
    const Grid1D grid(-8.0, 8.0, 384);
    const HOEigenbasis basis = HOEigenbasis::complete(params, grid);
    const double T = params.period();

    {
        std::vector<cdouble> us, up;
        const double ts = time_of([&] { us = propagator_matrix(basis, 0.5 * T, Exec::serial); });
        const double tp = time_of([&] { up = propagator_matrix(basis, 0.5 * T, Exec::parallel); });
        report("propagator_matrix", ts, tp, same_bits(us, up));
    }

    {
        const DensityOperator rho = DensityOperator::pure(ho_eigenstate(0, params, grid));
        TwoTimeJointDistribution ds{grid, 0, 0, {}, 0}, dp{grid, 0, 0, {}, 0};
        const double ts =
            time_of([&] { ds = joint_two_time_distribution(rho, 0.0, 0.5 * T, basis, Exec::serial); });
        const double tp =
            time_of([&] { dp = joint_two_time_distribution(rho, 0.0, 0.5 * T, basis, Exec::parallel); });
        report("joint_two_time_distribution", ts, tp, same_bits(ds.p, dp.p));
    }

    {
        const Grid1D cgrid(-8.0, 8.0, 128);
        const HOEigenbasis cbasis = HOEigenbasis::complete(params, cgrid);
        const WaveFunction1D psi0 = ho_eigenstate(0, params, cgrid);
        auto chain_to_evolved = [&](Exec exec) {
            GlobalState s = apply_first_measurement(prepare_global(psi0));
            return evolve_between_measurements(s, 0.5 * T, cbasis, exec);
        };
        GlobalState ss = prepare_global(psi0), sp = prepare_global(psi0);
        const double ts = time_of([&] { ss = chain_to_evolved(Exec::serial); });
        const double tp = time_of([&] { sp = chain_to_evolved(Exec::parallel); });
        bool same = ss.amps.size() == sp.amps.size();
        for (std::size_t i = 0; same && i < ss.amps.size(); ++i)
            same = std::memcmp(&ss.amps[i].amp, &sp.amps[i].amp, sizeof(cdouble)) == 0 &&
                   ss.amps[i].cell == sp.amps[i].cell && ss.amps[i].a == sp.amps[i].a &&
                   ss.amps[i].b == sp.amps[i].b;
        report("evolve_between_measurements", ts, tp, same);
    }

    {
        const Grid1D tgrid(-8.0, 8.0, 512);
        const HOEigenbasis tbasis = HOEigenbasis::truncated(params, tgrid, 40);
        const WaveFunction1D g0 = ho_eigenstate(0, params, tgrid);
        const WaveFunction1D g1 = ho_eigenstate(1, params, tgrid);
        WaveFunction1D psi{tgrid, std::vector<cdouble>(tgrid.size()), 0.0};
        for (int i = 0; i < tgrid.size(); ++i) psi.amp[i] = g0.amp[i] + g1.amp[i];
        psi.normalize();
        const SpectralEvolution source(tbasis, psi);
        const Ensemble ens = sample_ensemble(psi, 2000, 7);
        std::vector<double> xs, xp;
        const double ts =
            time_of([&] { xs = transport_ensemble(ens, source, 0.5 * T, 1e-9, Exec::serial); });
        const double tp =
            time_of([&] { xp = transport_ensemble(ens, source, 0.5 * T, 1e-9, Exec::parallel); });
        report("transport_ensemble", ts, tp, same_bits(xs, xp));
    }

    {
        const SlitParams slit;
        GhoseCheckReport rs, rp;
        const double ts = time_of([&] { rs = ghose_claim_check(slit, 20000, 11, Exec::serial); });
        const double tp = time_of([&] { rp = ghose_claim_check(slit, 20000, 11, Exec::parallel); });
        bool same = rs.samples.size() == rp.samples.size() &&
                    rs.fd_max_abs_dev == rp.fd_max_abs_dev &&
                    rs.fd_median_abs_dev == rp.fd_median_abs_dev &&
                    rs.analytic_max_abs_dev == rp.analytic_max_abs_dev;
        for (std::size_t i = 0; same && i < rs.samples.size(); ++i)
            same = std::memcmp(&rs.samples[i], &rp.samples[i], sizeof(GhoseSample)) == 0;
        report("ghose_claim_check", ts, tp, same);
    }

    return failures;
}
