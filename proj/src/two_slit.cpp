#include "pwlab/two_slit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>

#include "pwlab/errors.hpp"
#include "pwlab/integrator.hpp"
#include "pwlab/rng.hpp"

namespace pwlab {

void SlitParams::validate() const {
    if (!(k > 0.0) || !(a > 0.0) || !(L > 0.0) || !(mass > 0.0) || !(hbar > 0.0))
        throw ConfigError("slit parameters must be positive");
    if (!(L >= 20.0 * a))
        throw ConfigError("paraxial geometry requires L >= 20 a");
    if (!(k * a >= 1.0))
        throw ConfigError("interference fringes unresolvable: need k a >= 1");
}

namespace {

void check_window(const PairConfiguration& cfg, const SlitParams& p) {
    if (!(std::abs(cfg.x1) <= p.window() && std::abs(cfg.x2) <= p.window()))
        throw ParaxialError("configuration outside the paraxial window |x| <= L/10");
}

// Quadratic path phase k u^2 / (2L). The two bracket arguments are built as
// sums of these; addition is commutative in floating point, so exchanging the
// particles reproduces the arguments bit for bit.
inline double qphase(double u, double c) { return c * u * u; }

// Spherical spreading factor of a source at distance y from its plane,
// normalized to the screen distance; equals 1 in the screen plane y = L
// where everything here is evaluated.
inline double spreading(double y, double L) { return 1.0 / (1.0 + (y - L) / L); }

} // namespace

cdouble two_slit_bracket(const PairConfiguration& cfg, const SlitParams& p) {
    p.validate();
    check_window(cfg, p);
    const double c = p.k / (2.0 * p.L);
    const double arg1 = qphase(cfg.x1 - p.a, c) + qphase(cfg.x2 + p.a, c);
    const double arg2 = qphase(cfg.x1 + p.a, c) + qphase(cfg.x2 - p.a, c);
    return std::polar(1.0, arg1) + std::polar(1.0, arg2);
}

cdouble two_slit_amplitude(const PairConfiguration& cfg, const SlitParams& p) {
    p.validate();
    check_window(cfg, p);
    const double pref = spreading(p.L, p.L) * spreading(p.L, p.L) / (p.L * p.L);
    const cdouble common = pref * std::polar(1.0, p.k * (p.L + p.L));
    return common * two_slit_bracket(cfg, p);
}

PairVelocity pair_velocity_field(const PairConfiguration& cfg, const SlitParams& p) {
    p.validate();
    check_window(cfg, p);
    const double c = p.k / (2.0 * p.L);
    const cdouble t1 = std::polar(1.0, qphase(cfg.x1 - p.a, c) + qphase(cfg.x2 + p.a, c));
    const cdouble t2 = std::polar(1.0, qphase(cfg.x1 + p.a, c) + qphase(cfg.x2 - p.a, c));
    const cdouble den = t1 + t2;
    if (std::abs(den) <= 1e-10 * 2.0)
        throw NearNodeError("interference node: pair velocity undefined");
    const cdouble ikl(0.0, p.k / p.L);
    const cdouble n1 = ikl * ((cfg.x1 - p.a) * t1 + (cfg.x1 + p.a) * t2);
    const cdouble n2 = ikl * ((cfg.x2 + p.a) * t1 + (cfg.x2 - p.a) * t2);
    const double hm = p.hbar / p.mass;
    return {hm * std::imag(n1 / den), hm * std::imag(n2 / den)};
}

namespace {

using cldouble = std::complex<long double>;

// Bracket in extended precision for the finite-difference route. No window
// check: FD probe points may poke marginally past the window edge.
cldouble bracket_ld(long double x1, long double x2, const SlitParams& p) {
    const long double c = static_cast<long double>(p.k) / (2.0L * static_cast<long double>(p.L));
    const long double a = p.a;
    const long double arg1 = c * (x1 - a) * (x1 - a) + c * (x2 + a) * (x2 + a);
    const long double arg2 = c * (x1 + a) * (x1 + a) + c * (x2 - a) * (x2 - a);
    return std::exp(cldouble(0.0L, arg1)) + std::exp(cldouble(0.0L, arg2));
}

} // namespace

PairVelocity pair_velocity_fd(const PairConfiguration& cfg, const SlitParams& p) {
    p.validate();
    check_window(cfg, p);
    // Step tuned for the 4th-order stencil in 80-bit arithmetic: phase slope
    // is at most k (window + a) / L, and truncation ~ (slope * d)^4 balances
    // rounding ~ eps_80 / (slope * d) near 3e-4 radians per step.
    const long double d = 3e-4L * static_cast<long double>(p.L / (p.k * (p.window() + p.a)));
    const long double x1 = cfg.x1, x2 = cfg.x2;
    const cldouble at = bracket_ld(x1, x2, p);
    if (std::abs(at) <= 1e-10L * 2.0L)
        throw NearNodeError("interference node: pair velocity undefined");
    const cldouble d1 = (-bracket_ld(x1 + 2.0L * d, x2, p) + 8.0L * bracket_ld(x1 + d, x2, p) -
                         8.0L * bracket_ld(x1 - d, x2, p) + bracket_ld(x1 - 2.0L * d, x2, p)) /
                        (12.0L * d);
    const cldouble d2 = (-bracket_ld(x1, x2 + 2.0L * d, p) + 8.0L * bracket_ld(x1, x2 + d, p) -
                         8.0L * bracket_ld(x1, x2 - d, p) + bracket_ld(x1, x2 - 2.0L * d, p)) /
                        (12.0L * d);
    const long double hm = static_cast<long double>(p.hbar) / p.mass;
    return {static_cast<double>(hm * std::imag(d1 / at)),
            static_cast<double>(hm * std::imag(d2 / at))};
}

PairTrajectory integrate_pair_trajectories(const PairConfiguration& start, const SlitParams& p,
                                           double t_end, double tol,
                                           std::span<const double> sample_times) {
    p.validate();
    check_window(start, p);
    PairTrajectory out;
    out.times.reserve(sample_times.size());
    out.x1.reserve(sample_times.size());
    out.x2.reserve(sample_times.size());
    double y[2] = {start.x1, start.x2};
    auto rhs = [&p](double t, const double* y, double* dy) {
        if (!(std::abs(y[0]) <= p.window() && std::abs(y[1]) <= p.window()))
            throw WindowExitError("pair trajectory left the paraxial window", t);
        const PairVelocity v = pair_velocity_field({y[0], y[1]}, p);
        dy[0] = v.v1;
        dy[1] = v.v2;
    };
    integrate_adaptive(rhs, 2, 0.0, t_end, tol, sample_times, y,
                       [&out](double t, const double* y) {
                           out.times.push_back(t);
                           out.x1.push_back(y[0]);
                           out.x2.push_back(y[1]);
                       });
    return out;
}

GhoseCheckReport ghose_claim_check(const SlitParams& p, int n_samples, std::uint64_t seed,
                                   Exec exec) {
    p.validate();
    if (n_samples < 100) throw ConfigError("sum-law scan needs at least 100 samples");
    const double w = p.window();
    SeededRng rng(seed);
    std::vector<PairConfiguration> cfgs(n_samples);
    for (PairConfiguration& c : cfgs) {
        c.x1 = rng.uniform(-w, w);
        c.x2 = rng.uniform(-w, w);
    }

    const double skip_floor = 0.02 * 2.0;
    std::vector<char> skipped(n_samples, 0);
    std::vector<char> vanish_class(n_samples, 0);  // 0 skipped/degenerate, 1 nonvanishing, 2 vanishing
    std::vector<double> a_dev(n_samples, 0.0), f_dev(n_samples, 0.0);
    std::vector<GhoseSample> rows(n_samples);
    const double rate = p.sum_rate();

    std::exception_ptr first_error = nullptr;
    const bool parallel = exec == Exec::parallel;
#ifndef _OPENMP
    (void)parallel;
#else
#pragma omp parallel for schedule(static) num_threads(worker_count()) if (parallel)
#endif
    for (int s = 0; s < n_samples; ++s) {
        try {
            const PairConfiguration& c = cfgs[s];
            if (std::abs(two_slit_bracket(c, p)) < skip_floor) {
                skipped[s] = 1;
                continue;
            }
            const PairVelocity av = pair_velocity_field(c, p);
            const PairVelocity fv = pair_velocity_fd(c, p);
            const double predicted = rate * (c.x1 + c.x2);
            a_dev[s] = std::abs(av.v1 + av.v2 - predicted);
            f_dev[s] = std::abs(fv.v1 + fv.v2 - predicted);
            rows[s] = {c.x1, c.x2, av.v1, av.v2, av.v1 + av.v2, predicted};
            if (std::abs(c.x1 + c.x2) > 1e-6)
                vanish_class[s] =
                    std::abs(av.v1 + av.v2) > 0.5 * rate * std::abs(c.x1 + c.x2) ? 1 : 2;
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

    GhoseCheckReport rep;
    rep.requested = n_samples;
    rep.skipped = 0;
    rep.analytic_max_abs_dev = 0.0;
    rep.fd_max_abs_dev = 0.0;
    std::vector<double> fd_all;
    int nonvanishing = 0, classified = 0;
    for (int s = 0; s < n_samples; ++s) {
        if (skipped[s]) {
            ++rep.skipped;
            continue;
        }
        rep.analytic_max_abs_dev = std::max(rep.analytic_max_abs_dev, a_dev[s]);
        rep.fd_max_abs_dev = std::max(rep.fd_max_abs_dev, f_dev[s]);
        fd_all.push_back(f_dev[s]);
        rep.samples.push_back(rows[s]);
        if (vanish_class[s] != 0) {
            ++classified;
            if (vanish_class[s] == 1) ++nonvanishing;
        }
    }
    rep.evaluated = n_samples - rep.skipped;
    rep.skipped_fraction = static_cast<double>(rep.skipped) / n_samples;
    rep.nonvanishing_fraction =
        classified > 0 ? static_cast<double>(nonvanishing) / classified : 0.0;
    std::sort(fd_all.begin(), fd_all.end());
    rep.fd_median_abs_dev = fd_all.empty() ? 0.0 : fd_all[fd_all.size() / 2];
    return rep;
}

} // namespace pwlab
