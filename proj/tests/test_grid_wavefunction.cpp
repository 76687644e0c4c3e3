#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pwlab/errors.hpp"
#include "pwlab/wavefunction.hpp"

using namespace pwlab;

namespace {

WaveFunction1D ground_manual(const Grid1D& g) {
    WaveFunction1D psi{g, std::vector<cdouble>(g.size()), 0.0};
    for (int i = 0; i < g.size(); ++i) psi.amp[i] = oracle::u0(g.point(i));
    return psi;
}

} // namespace

TEST_CASE("grid basics") {
    const Grid1D g(-8.0, 8.0, 512);
    CHECK(g.size() == 512);
    CHECK(g.spacing() == doctest::Approx(16.0 / 511).epsilon(1e-15));
    CHECK(g.point(0) == doctest::Approx(-8.0).epsilon(1e-14));
    CHECK(g.point(511) == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(g.symmetric());
    CHECK(g.same_as(Grid1D(-8.0, 8.0, 512)));
    CHECK_FALSE(g.same_as(Grid1D(-8.0, 8.0, 256)));
    CHECK_FALSE(Grid1D(0.0, 8.0, 32).symmetric());
}

TEST_CASE("symmetric grids negate exactly") {
    for (int n : {16, 17, 512, 513}) {
        const Grid1D g(-5.0, 5.0, n);
        for (int i = 0; i < n; ++i) CHECK(g.point(i) == -g.point(n - 1 - i));
        if (n % 2 == 1) CHECK(g.point(n / 2) == 0.0);
    }
}

TEST_CASE("grid rejects bad construction") {
    CHECK_THROWS_AS(Grid1D(-1.0, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(Grid1D(1.0, 1.0, 8), ConfigError);
    CHECK_THROWS_AS(Grid1D(2.0, -2.0, 8), ConfigError);
    CHECK_THROWS_AS(Grid1D(std::nan(""), 1.0, 8), ConfigError);
}

TEST_CASE("norm and normalization") {
    const Grid1D g(-8.0, 8.0, 512);
    WaveFunction1D psi = ground_manual(g);
    CHECK(psi.norm2() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(psi.is_normalized());
    // 512 points straddle x = 0, so the sampled peak sits half a cell off it.
    CHECK(psi.max_abs() == doctest::Approx(oracle::u0(g.point(256))).epsilon(1e-12));

    for (cdouble& a : psi.amp) a *= 3.0;
    CHECK_FALSE(psi.is_normalized());
    psi.normalize();
    CHECK(psi.norm2() == doctest::Approx(1.0).epsilon(1e-14));

    WaveFunction1D zero{g, std::vector<cdouble>(g.size(), 0.0), 0.0};
    CHECK_THROWS_AS(zero.normalize(), NotNormalizedError);
}

TEST_CASE("inner product") {
    const Grid1D g(-8.0, 8.0, 512);
    WaveFunction1D a = ground_manual(g);
    WaveFunction1D b{g, std::vector<cdouble>(g.size()), 0.0};
    for (int i = 0; i < g.size(); ++i) b.amp[i] = cdouble(oracle::u1(g.point(i)), 0.3);

    CHECK(std::abs(inner(a, a) - 1.0) < 1e-12);
    // u1 is odd against the even u0, so only the constant imaginary offset
    // survives the sum.
    CHECK(std::abs(inner(a, b).real()) < 1e-12);
    CHECK(std::abs(inner(a, b) - std::conj(inner(b, a))) < 1e-14);

    WaveFunction1D c{Grid1D(-8.0, 8.0, 256), std::vector<cdouble>(256, 0.0), 0.0};
    CHECK_THROWS_AS(inner(a, c), ConfigError);
}
