#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "oracles.hpp"
#include "pwlab/bohmian.hpp"
#include "pwlab/errors.hpp"
#include "pwlab/integrator.hpp"

using namespace pwlab;

namespace {

const OscillatorParams params;

WaveFunction1D superposition01(const Grid1D& g) {
    const WaveFunction1D g0 = ho_eigenstate(0, params, g);
    const WaveFunction1D g1 = ho_eigenstate(1, params, g);
    WaveFunction1D psi{g, std::vector<cdouble>(g.size()), 0.0};
    for (int i = 0; i < g.size(); ++i) psi.amp[i] = g0.amp[i] + g1.amp[i];
    return psi.normalize();
}

// Closed-form guidance velocity of (u0 + e^{-it} u1)/sqrt(2); the global
// ground-state phase cancels in Im(psi'/psi).
double super_velocity(double x, double t) {
    const cdouble rot = std::polar(1.0, -t);
    const cdouble psi = oracle::u0(x) + rot * oracle::u1(x);
    const cdouble dpsi = oracle::du0(x) + rot * oracle::du1(x);
    return std::imag(dpsi / psi);
}

} // namespace

TEST_CASE("adaptive integrator against closed forms") {
    const std::vector<double> samples = {0.25, 0.5, 0.75, 1.0};
    double y[1] = {1.0};
    std::vector<double> seen_t, seen_y;
    integrate_adaptive([](double, const double* y, double* dy) { dy[0] = y[0]; }, 1, 0.0, 1.0,
                       1e-10, samples, y,
                       [&](double t, const double* y) {
                           seen_t.push_back(t);
                           seen_y.push_back(y[0]);
                       });
    REQUIRE(seen_t.size() == 4);
    for (std::size_t i = 0; i < seen_t.size(); ++i) {
        CHECK(seen_t[i] == samples[i]);
        CHECK(seen_y[i] == doctest::Approx(std::exp(samples[i])).epsilon(1e-9));
    }
    CHECK(y[0] == doctest::Approx(std::numbers::e).epsilon(1e-9));

    double z[2] = {1.0, 0.0};
    const std::vector<double> none;
    integrate_adaptive(
        [](double, const double* y, double* dy) {
            dy[0] = y[1];
            dy[1] = -y[0];
        },
        2, 0.0, 2.0 * std::numbers::pi, 1e-10, none, z, [](double, const double*) {});
    CHECK(z[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(z[1]) < 1e-8);
}

TEST_CASE("integrator collapses on a finite-time blowup") {
    double y[1] = {1.0};
    const std::vector<double> none;
    CHECK_THROWS_AS(
        integrate_adaptive([](double, const double* y, double* dy) { dy[0] = y[0] * y[0]; }, 1,
                           0.0, 2.0, 1e-10, none, y, [](double, const double*) {}),
        StepUnderflowError);
}

TEST_CASE("piecewise CDF against the erf oracle") {
    const Grid1D g(-8.0, 8.0, 512);
    const WaveFunction1D g0 = ho_eigenstate(0, params, g);
    const PiecewiseCdf cdf(g0);
    double dev = 0.0;
    for (double x = -3.0; x <= 3.0; x += 0.01)
        dev = std::max(dev, std::abs(cdf.value(x) - oracle::cdf0(x)));
    CHECK(dev < 1e-3);
    for (double u : {0.01, 0.2, 0.5, 0.8, 0.99})
        CHECK(cdf.value(cdf.invert(u)) == doctest::Approx(u).epsilon(1e-12));
    CHECK(cdf.value(-100.0) == 0.0);
    CHECK(cdf.value(100.0) == 1.0);
    CHECK_THROWS_AS(cdf.invert(1.0), ConfigError);
    CHECK_THROWS_AS(cdf.invert(-0.1), ConfigError);

    WaveFunction1D bad = g0;
    for (cdouble& a : bad.amp) a *= 2.0;
    CHECK_THROWS_AS(PiecewiseCdf{bad}, NotNormalizedError);
}

TEST_CASE("sampling is deterministic and converges") {
    const Grid1D g(-8.0, 8.0, 512);
    const WaveFunction1D g0 = ho_eigenstate(0, params, g);
    const Ensemble a = sample_ensemble(g0, 10000, 42);
    const Ensemble b = sample_ensemble(g0, 10000, 42);
    const Ensemble c = sample_ensemble(g0, 10000, 43);
    CHECK(a.initial_positions == b.initial_positions);
    CHECK(a.initial_positions != c.initial_positions);

    const PiecewiseCdf cdf(g0);
    CHECK(ks_distance(a.initial_positions, cdf) < 0.02);
    CHECK(ks_distance(c.initial_positions, cdf) < 0.02);
}

TEST_CASE("KS distance on a hand-checked case") {
    // Uniform density: CDF is the identity up to the half-cell edge shift.
    const Grid1D g(0.0, 1.0, 101);
    WaveFunction1D flat{g, std::vector<cdouble>(g.size(), 1.0), 0.0};
    flat.normalize();
    const PiecewiseCdf cdf(flat);
    CHECK(ks_distance({0.25}, cdf) == doctest::Approx(0.75).epsilon(0.02));
    CHECK(ks_distance({0.1, 0.5, 0.9}, cdf) == doctest::Approx(1.0 / 3.0 - 0.1).epsilon(0.1));
}

TEST_CASE("guidance velocity oracles") {
    const Grid1D g(-8.0, 8.0, 512);
    const WaveFunction1D g0 = ho_eigenstate(0, params, g);
    for (double x : {-1.3, 0.02, 2.4})
        CHECK(std::abs(guidance_velocity(g0, x, params)) < 1e-12);

    // Plane-wave phase on the ground envelope moves at exactly k. The finite
    // differences carry an h^4 bias that grows with the envelope's higher
    // derivatives, so this check gets a fine grid.
    const Grid1D gf(-8.0, 8.0, 2048);
    WaveFunction1D moving{gf, std::vector<cdouble>(gf.size()), 0.0};
    for (int i = 0; i < gf.size(); ++i)
        moving.amp[i] = std::polar(oracle::u0(gf.point(i)), gf.point(i));
    for (double x : {-0.7, 0.4, 1.9})
        CHECK(guidance_velocity(moving, x, params) == doctest::Approx(1.0).epsilon(1e-6));

    const WaveFunction1D g1 = ho_eigenstate(1, params, g);
    CHECK_THROWS_AS(guidance_velocity(g1, 0.0, params), NearNodeError);
    CHECK_THROWS_AS(guidance_velocity(g0, g.max() - 0.5 * g.spacing(), params),
                    OutOfDomainError);
    CHECK_THROWS_AS(guidance_velocity(g0, 100.0, params), OutOfDomainError);
}

TEST_CASE("probe and grid operation agree bitwise") {
    const Grid1D g(-8.0, 8.0, 512);
    const HOEigenbasis basis = HOEigenbasis::truncated(params, g, 24);
    const WaveFunction1D psi = superposition01(g);
    const SpectralEvolution source(basis, psi);
    VelocityProbe probe(source);
    for (double t : {0.0, 0.9, 2.7})
        for (double x : {-2.1, -0.33, 0.5, 1.75}) {
            const double via_grid = guidance_velocity(source.eval(t), x, params);
            CHECK(probe(t, x) == via_grid);
        }
}

TEST_CASE("trajectory in the superposition against a closed-form field") {
    const Grid1D g(-8.0, 8.0, 512);
    const HOEigenbasis basis = HOEigenbasis::truncated(params, g, 24);
    const SpectralEvolution source(basis, superposition01(g));
    const double t_end = 0.5 * params.period();
    const double sample[1] = {t_end};

    for (double x0 : {-0.8, 0.3, 1.1}) {
        const Trajectory tr =
            integrate_trajectory(x0, source, 0.0, t_end, 1e-10, std::span(sample, 1));
        // Reference: classic RK4 at a fixed small step on the closed-form
        // velocity. Entirely independent of the spectral-grid route.
        double x = x0;
        const int steps = 40000;
        const double h = t_end / steps;
        for (int s = 0; s < steps; ++s) {
            const double t = s * h;
            const double k1 = super_velocity(x, t);
            const double k2 = super_velocity(x + 0.5 * h * k1, t + 0.5 * h);
            const double k3 = super_velocity(x + 0.5 * h * k2, t + 0.5 * h);
            const double k4 = super_velocity(x + h * k3, t + h);
            x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        CHECK(tr.positions.back() == doctest::Approx(x).epsilon(1e-5));
    }
}

TEST_CASE("transport matches member-by-member integration") {
    const Grid1D g(-8.0, 8.0, 512);
    const HOEigenbasis basis = HOEigenbasis::truncated(params, g, 24);
    const WaveFunction1D psi = superposition01(g);
    const SpectralEvolution source(basis, psi);
    const Ensemble ens = sample_ensemble(psi, 64, 5);
    const double t_end = 1.3;
    const std::vector<double> finals = transport_ensemble(ens, source, t_end, 1e-9, Exec::serial);
    const double sample[1] = {t_end};
    for (int m = 0; m < 64; ++m) {
        const Trajectory tr = integrate_trajectory(ens.initial_positions[m], source, 0.0, t_end,
                                                   1e-9, std::span(sample, 1));
        CHECK(finals[m] == tr.positions.back());
    }
}

TEST_CASE("equivariance holds at sampling accuracy") {
    const Grid1D g(-8.0, 8.0, 512);
    const HOEigenbasis basis = HOEigenbasis::truncated(params, g, 40);
    const double T = params.period();
    CHECK(equivariance_check(ho_eigenstate(0, params, g), T, 4000, 11, basis) < 0.03);
    CHECK(equivariance_check(superposition01(g), 0.5 * T, 4000, 12, basis) < 0.03);
}

TEST_CASE("two-time expectation: stationary states") {
    const Grid1D g(-8.0, 8.0, 512);
    const HOEigenbasis basis = HOEigenbasis::truncated(params, g, 40);
    const WaveFunction1D g0 = ho_eigenstate(0, params, g);
    const double half = 0.5 * params.period();

    const BohmianCorrelation with_basis =
        bohmian_two_time_expectation(g0, 0.0, half, params, 20000, 7, &basis);
    CHECK(with_basis.constant_trajectories);
    CHECK(with_basis.quadrature == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(with_basis.value == doctest::Approx(0.5).epsilon(0.04));

    // The Hamiltonian-residual fallback must reach the same conclusion.
    const BohmianCorrelation no_basis =
        bohmian_two_time_expectation(g0, 0.0, half, params, 20000, 7, nullptr);
    CHECK(no_basis.constant_trajectories);
    CHECK(no_basis.quadrature == with_basis.quadrature);
    CHECK(no_basis.value == with_basis.value);

    // An excited eigenstate is stationary too; it needs the wider domain.
    const Grid1D gw(-10.0, 10.0, 640);
    const HOEigenbasis basis_w = HOEigenbasis::truncated(params, gw, 40);
    const WaveFunction1D g2 = ho_eigenstate(2, params, gw);
    const BohmianCorrelation excited =
        bohmian_two_time_expectation(g2, 0.0, half, params, 20000, 7, &basis_w);
    CHECK(excited.constant_trajectories);
    CHECK(excited.quadrature == doctest::Approx(2.5).epsilon(1e-9));
}

TEST_CASE("two-time expectation: a real superposition is not stationary") {
    const Grid1D g(-8.0, 8.0, 512);
    const HOEigenbasis basis = HOEigenbasis::truncated(params, g, 40);
    const WaveFunction1D psi = superposition01(g);
    const double half = 0.5 * params.period();

    const BohmianCorrelation moving =
        bohmian_two_time_expectation(psi, 0.0, half, params, 500, 9, &basis);
    CHECK_FALSE(moving.constant_trajectories);
    CHECK(std::isnan(moving.quadrature));
    CHECK(std::isfinite(moving.value));
    CHECK(std::abs(moving.value) < 4.0);

    CHECK_THROWS_AS(bohmian_two_time_expectation(psi, 0.0, half, params, 100, 9, nullptr),
                    ConfigError);
    CHECK_THROWS_AS(bohmian_two_time_expectation(psi, -1.0, half, params, 100, 9, &basis),
                    ConfigError);
    WaveFunction1D bad = psi;
    for (cdouble& a : bad.amp) a *= 1.5;
    CHECK_THROWS_AS(bohmian_two_time_expectation(bad, 0.0, half, params, 100, 9, &basis),
                    NotNormalizedError);
}
