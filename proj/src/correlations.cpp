#include "pwlab/correlations.hpp"

#include <cmath>
#include <string>

#include "pwlab/errors.hpp"

namespace pwlab {

DensityOperator DensityOperator::pure(const WaveFunction1D& psi) {
    if (!psi.is_normalized(1e-8))
        throw NotNormalizedError("pure density operator needs a normalized state");
    const int n = psi.grid.size();
    DensityOperator rho{psi.grid, std::vector<cdouble>(static_cast<std::size_t>(n) * n)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            rho.kernel[static_cast<std::size_t>(i) * n + j] = psi.amp[i] * std::conj(psi.amp[j]);
    return rho;
}

double DensityOperator::trace_times_spacing() const {
    const int n = grid.size();
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += kernel[static_cast<std::size_t>(i) * n + i].real();
    return tr * grid.spacing();
}

double TwoTimeJointDistribution::total() const {
    double s = 0.0;
    for (double v : p) s += v;
    return s;
}

TwoTimeJointDistribution joint_two_time_distribution(const DensityOperator& rho, double t1,
                                                     double tau, const HOEigenbasis& basis,
                                                     Exec exec) {
    if (!rho.grid.same_as(basis.grid()))
        throw ConfigError("density operator and basis grids differ");
    if (t1 < 0.0 || tau < 0.0) throw ConfigError("measurement times must be nonnegative");
    if (std::abs(rho.trace_times_spacing() - 1.0) > 1e-8)
        throw NotNormalizedError("density operator trace is off unity");

    const int n = rho.grid.size();
    const double h = rho.grid.spacing();

    double deficit = 0.0;
    for (int i = 0; i < n; ++i) deficit = std::max(deficit, 1.0 - basis.ket_captured(i));
    if (deficit > 0.05)
        throw TruncationError("position kets lose " + std::to_string(deficit) +
                              " of their norm in this basis; use a complete basis");

    // Diagonal of U(t1) rho U(t1)^dag in the ket convention (factor h turns
    // the kernel into cell amplitudes).
    std::vector<double> diag(n);
    if (t1 == 0.0) {
        for (int i = 0; i < n; ++i)
            diag[i] = rho.kernel[static_cast<std::size_t>(i) * n + i].real() * h;
    } else {
        const std::vector<cdouble> u1 = propagator_matrix(basis, t1, exec);
        std::vector<cdouble> tmp(n);
        for (int i = 0; i < n; ++i) {
            const cdouble* urow = u1.data() + static_cast<std::size_t>(i) * n;
            for (int a = 0; a < n; ++a) {
                cdouble acc = 0.0;
                const cdouble* krow = rho.kernel.data() + static_cast<std::size_t>(a) * n;
                for (int b = 0; b < n; ++b) acc += krow[b] * std::conj(urow[b]);
                tmp[a] = acc * h;
            }
            cdouble d = 0.0;
            for (int a = 0; a < n; ++a) d += urow[a] * tmp[a];
            diag[i] = d.real();
        }
    }
    for (int i = 0; i < n; ++i) {
        if (diag[i] < -1e-12)
            throw NotNormalizedError("propagated density has a negative diagonal entry");
        if (diag[i] < 0.0) diag[i] = 0.0;
    }

    const std::vector<cdouble> u = propagator_matrix(basis, tau, exec);
    TwoTimeJointDistribution dist{rho.grid, t1, tau,
                                  std::vector<double>(static_cast<std::size_t>(n) * n), deficit};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double v = std::norm(u[static_cast<std::size_t>(j) * n + i]) * diag[i];
            dist.p[static_cast<std::size_t>(i) * n + j] = v;
        }
    }
    return dist;
}

double correlation_from_distribution(const TwoTimeJointDistribution& dist) {
    const int n = dist.grid.size();
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        const double* pr = dist.p.data() + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) row += dist.grid.point(j) * pr[j];
        acc += dist.grid.point(i) * row;
    }
    return acc;
}

namespace {

std::vector<cdouble> expand_checked(const WaveFunction1D& psi, const HOEigenbasis& basis) {
    const HOEigenbasis::Expansion e = basis.expand(psi);
    if (e.captured < 1.0 - 1e-8)
        throw TruncationError("eigenbasis captures only " + std::to_string(e.captured) +
                              " of the state norm");
    return e.coeff;
}

} // namespace

cdouble heisenberg_two_time_product(const WaveFunction1D& psi0, double t1, double tau,
                                    const HOEigenbasis& basis) {
    if (!psi0.is_normalized(1e-8))
        throw NotNormalizedError("two-time product needs a normalized state");
    if (t1 < 0.0 || tau < 0.0) throw ConfigError("measurement times must be nonnegative");
    const std::vector<cdouble> c = expand_checked(psi0, basis);
    const std::vector<double> x = position_matrix(basis);
    const int m = basis.nstates();
    const double ih = 1.0 / basis.params().hbar;

    // <psi0| U^dag(t1+tau) X U(tau) X U(t1) |psi0>, evaluated right to left.
    std::vector<cdouble> a(m), b(m);
    for (int k = 0; k < m; ++k) a[k] = c[k] * std::polar(1.0, -basis.energy(k) * t1 * ih);
    for (int k = 0; k < m; ++k) {
        cdouble acc = 0.0;
        const double* xr = x.data() + static_cast<std::size_t>(k) * m;
        for (int l = 0; l < m; ++l) acc += xr[l] * a[l];
        b[k] = acc;
    }
    for (int k = 0; k < m; ++k) b[k] *= std::polar(1.0, -basis.energy(k) * tau * ih);
    for (int k = 0; k < m; ++k) {
        cdouble acc = 0.0;
        const double* xr = x.data() + static_cast<std::size_t>(k) * m;
        for (int l = 0; l < m; ++l) acc += xr[l] * b[l];
        a[k] = acc;
    }
    cdouble out = 0.0;
    for (int k = 0; k < m; ++k) {
        const cdouble bra = c[k] * std::polar(1.0, -basis.energy(k) * (t1 + tau) * ih);
        out += std::conj(bra) * a[k];
    }
    return out;
}

double heisenberg_two_time_expectation(const WaveFunction1D& psi0, double t1, double tau,
                                       const HOEigenbasis& basis) {
    return heisenberg_two_time_product(psi0, t1, tau, basis).real();
}

} // namespace pwlab
