#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "pwlab/correlations.hpp"
#include "pwlab/errors.hpp"

using namespace pwlab;

namespace {

const OscillatorParams params;

double second_moment(const WaveFunction1D& psi) {
    double q = 0.0;
    for (int i = 0; i < psi.grid.size(); ++i)
        q += psi.grid.point(i) * psi.grid.point(i) * std::norm(psi.amp[i]);
    return q * psi.grid.spacing();
}

} // namespace

TEST_CASE("pure density operator") {
    const Grid1D g(-8.0, 8.0, 128);
    const WaveFunction1D g0 = ho_eigenstate(0, params, g);
    const DensityOperator rho = DensityOperator::pure(g0);
    CHECK(rho.trace_times_spacing() == doctest::Approx(1.0).epsilon(1e-12));
    double herm = 0.0;
    for (int i = 0; i < g.size(); ++i)
        for (int j = 0; j < g.size(); ++j)
            herm = std::max(herm,
                            std::abs(rho.kernel[static_cast<std::size_t>(i) * g.size() + j] -
                                     std::conj(rho.kernel[static_cast<std::size_t>(j) * g.size() + i])));
    CHECK(herm == 0.0);
}

TEST_CASE("zero delay reduces to the diagonal") {
    const Grid1D g(-8.0, 8.0, 128);
    const HOEigenbasis full = HOEigenbasis::complete(params, g);
    const WaveFunction1D g0 = ho_eigenstate(0, params, g);
    const DensityOperator rho = DensityOperator::pure(g0);
    const TwoTimeJointDistribution dist = joint_two_time_distribution(rho, 0.0, 0.0, full);
    CHECK(dist.total() == doctest::Approx(1.0).epsilon(1e-10));

    const double h = g.spacing();
    double dev = 0.0;
    for (int i = 0; i < g.size(); ++i)
        for (int j = 0; j < g.size(); ++j) {
            const double want = i == j ? std::norm(g0.amp[i]) * h : 0.0;
            dev = std::max(dev, std::abs(dist.p[static_cast<std::size_t>(i) * g.size() + j] - want));
        }
    CHECK(dev < 1e-12);
    CHECK(correlation_from_distribution(dist) ==
          doctest::Approx(second_moment(g0)).epsilon(1e-10));
}

TEST_CASE("half and full period correlations carry the sign flip") {
    const Grid1D g(-8.0, 8.0, 128);
    const HOEigenbasis full = HOEigenbasis::complete(params, g);
    const WaveFunction1D g0 = ho_eigenstate(0, params, g);
    const DensityOperator rho = DensityOperator::pure(g0);
    const double T = params.period();
    const double x2 = second_moment(g0);

    const TwoTimeJointDistribution half = joint_two_time_distribution(rho, 0.0, 0.5 * T, full);
    CHECK(half.total() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(half.ket_deficit_max < 1e-12);
    CHECK(correlation_from_distribution(half) == doctest::Approx(-x2).epsilon(1e-10));

    const TwoTimeJointDistribution fullT = joint_two_time_distribution(rho, 0.0, T, full);
    CHECK(correlation_from_distribution(fullT) == doctest::Approx(x2).epsilon(1e-10));

    // Nonzero first time: collapsing at t1 > 0 changes nothing for a
    // stationary state.
    const TwoTimeJointDistribution shifted =
        joint_two_time_distribution(rho, 0.3 * T, 0.5 * T, full);
    double dev = 0.0;
    for (std::size_t idx = 0; idx < shifted.p.size(); ++idx)
        dev = std::max(dev, std::abs(shifted.p[idx] - half.p[idx]));
    CHECK(dev < 1e-10);
}

TEST_CASE("truncated bases cannot expand position kets") {
    const Grid1D g(-8.0, 8.0, 128);
    const HOEigenbasis tr = HOEigenbasis::truncated(params, g, 40);
    const DensityOperator rho = DensityOperator::pure(ho_eigenstate(0, params, g));
    CHECK_THROWS_AS(joint_two_time_distribution(rho, 0.0, 1.0, tr), TruncationError);
}

TEST_CASE("Heisenberg route: real and imaginary parts") {
    const Grid1D g(-8.0, 8.0, 512);
    const HOEigenbasis tr = HOEigenbasis::truncated(params, g, 40);
    const WaveFunction1D g0 = ho_eigenstate(0, params, g);
    const double T = params.period();

    CHECK(heisenberg_two_time_expectation(g0, 0.0, 0.5 * T, tr) ==
          doctest::Approx(-0.5).epsilon(1e-6));
    CHECK(heisenberg_two_time_expectation(g0, 0.0, 0.0, tr) ==
          doctest::Approx(0.5).epsilon(1e-6));
    CHECK(heisenberg_two_time_expectation(g0, 0.0, T, tr) ==
          doctest::Approx(0.5).epsilon(1e-6));

    // <X(tau) X> = <x^2> (cos wt - i sin wt) for the ground state; the
    // quarter period isolates the commutator part.
    const cdouble quarter = heisenberg_two_time_product(g0, 0.0, 0.25 * T, tr);
    CHECK(std::abs(quarter.real()) < 1e-6);
    CHECK(quarter.imag() == doctest::Approx(-0.5).epsilon(1e-6));

    // t1 only shifts the state's global phase, which cancels.
    CHECK(heisenberg_two_time_expectation(g0, 0.4 * T, 0.5 * T, tr) ==
          doctest::Approx(-0.5).epsilon(1e-6));
}

TEST_CASE("sequential and Heisenberg routes agree at the half period") {
    const Grid1D g(-8.0, 8.0, 128);
    const HOEigenbasis full = HOEigenbasis::complete(params, g);
    const HOEigenbasis tr = HOEigenbasis::truncated(params, g, 40);
    const WaveFunction1D g0 = ho_eigenstate(0, params, g);
    const double T = params.period();
    const double seq = correlation_from_distribution(
        joint_two_time_distribution(DensityOperator::pure(g0), 0.0, 0.5 * T, full));
    const double heis = heisenberg_two_time_expectation(g0, 0.0, 0.5 * T, tr);
    CHECK(seq == doctest::Approx(heis).epsilon(1e-8));
}
