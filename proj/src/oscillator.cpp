#include "pwlab/oscillator.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "pwlab/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pwlab {

void OscillatorParams::validate() const {
    if (!(mass > 0.0) || !(omega > 0.0) || !(hbar > 0.0))
        throw ConfigError("oscillator parameters must be positive");
}

double OscillatorParams::turning_point(int n) const {
    return std::sqrt((2.0 * n + 1.0) * hbar / (mass * omega));
}

namespace {

// Rows 0..count-1 of continuum-normalized eigenfunctions sampled on the grid,
// built with the recurrence on normalized Hermite functions (stable for all n,
// unlike raw Hermite polynomials). Mirrored grid points produce exactly
// mirrored values: every operation here is sign-symmetric.
std::vector<double> hermite_rows(const OscillatorParams& p, const Grid1D& g, int count) {
    const int n = g.size();
    const double s = std::sqrt(p.mass * p.omega / p.hbar);
    const double c0 = std::sqrt(s) / std::pow(std::numbers::pi, 0.25);
    std::vector<double> rows(static_cast<std::size_t>(count) * n);
    for (int i = 0; i < n; ++i) {
        const double xi = s * g.point(i);
        rows[i] = c0 * std::exp(-0.5 * xi * xi);
        if (count > 1) rows[static_cast<std::size_t>(n) + i] = std::sqrt(2.0) * xi * rows[i];
        for (int k = 1; k + 1 < count; ++k) {
            rows[static_cast<std::size_t>(k + 1) * n + i] =
                std::sqrt(2.0 / (k + 1.0)) * xi * rows[static_cast<std::size_t>(k) * n + i] -
                std::sqrt(k / (k + 1.0)) * rows[static_cast<std::size_t>(k - 1) * n + i];
        }
    }
    return rows;
}

double discrete_norm(const double* row, const Grid1D& g) {
    double s = 0.0;
    for (int i = 0; i < g.size(); ++i) s += row[i] * row[i];
    return std::sqrt(s * g.spacing());
}

// Modified Gram-Schmidt with a reorthogonalization pass, restricted to the row
// indices in `members`. parity = +1/-1 tags the class on a symmetric grid and
// shapes the replacement vectors when a row is linearly dependent (the top
// sampled recurrence rows can alias on coarse grids); parity = 0 means no
// class structure.
void orthonormalize(std::vector<double>& rows, const Grid1D& g,
                    const std::vector<int>& members, int parity) {
    const int n = g.size();
    const double h = g.spacing();
    auto project_out = [&](double* v, std::size_t upto) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t q = 0; q < upto; ++q) {
                const double* u = rows.data() + static_cast<std::size_t>(members[q]) * n;
                double d = 0.0;
                for (int i = 0; i < n; ++i) d += u[i] * v[i];
                d *= h;
                for (int i = 0; i < n; ++i) v[i] -= d * u[i];
            }
        }
    };
    for (std::size_t m = 0; m < members.size(); ++m) {
        double* v = rows.data() + static_cast<std::size_t>(members[m]) * n;
        project_out(v, m);
        double nv = discrete_norm(v, g);
        if (nv <= 1e-10) {
            // Row is numerically dependent on its predecessors; replace it
            // with the first parity-pure indicator pair that survives.
            bool replaced = false;
            for (int c = 0; c < n && !replaced; ++c) {
                const int mc = n - 1 - c;
                for (int i = 0; i < n; ++i) v[i] = 0.0;
                v[c] += 1.0;
                if (parity != 0 && mc != c) v[mc] += parity;
                project_out(v, m);
                nv = discrete_norm(v, g);
                replaced = nv > 1e-6;
            }
            if (!replaced)
                throw TruncationError("grid basis cannot be completed: class exhausted");
        }
        const double inv = 1.0 / nv;
        for (int i = 0; i < n; ++i) v[i] *= inv;
    }
}

} // namespace

WaveFunction1D ho_eigenstate(int n, const OscillatorParams& params, const Grid1D& grid) {
    params.validate();
    if (n < 0) throw ConfigError("eigenstate index must be nonnegative");
    if (n >= grid.size()) throw ConfigError("eigenstate index exceeds grid resolution");
    const std::vector<double> rows = hermite_rows(params, grid, n + 1);
    const double* row = rows.data() + static_cast<std::size_t>(n) * grid.size();
    double peak = 0.0;
    for (int i = 0; i < grid.size(); ++i) peak = std::max(peak, std::abs(row[i]));
    const double tail = std::max(std::abs(row[0]), std::abs(row[grid.size() - 1]));
    if (tail > 1e-12 * peak)
        throw DomainTooSmallError("eigenstate " + std::to_string(n) +
                                  " has not decayed at the grid boundary; widen the domain");
    WaveFunction1D psi{grid, std::vector<cdouble>(grid.size()), 0.0};
    const double inv = 1.0 / discrete_norm(row, grid);
    for (int i = 0; i < grid.size(); ++i) psi.amp[i] = row[i] * inv;
    return psi;
}

WaveFunction1D displaced_ground_state(double shift, const OscillatorParams& params, const Grid1D& grid) {
    params.validate();
    const double s = std::sqrt(params.mass * params.omega / params.hbar);
    WaveFunction1D psi{grid, std::vector<cdouble>(grid.size()), 0.0};
    for (int i = 0; i < grid.size(); ++i) {
        const double xi = s * (grid.point(i) - shift);
        psi.amp[i] = std::exp(-0.5 * xi * xi);
    }
    return psi.normalize(), psi;
}

HOEigenbasis::HOEigenbasis(const OscillatorParams& params, const Grid1D& grid, int nstates)
    : params_(params), grid_(grid), nstates_(nstates) {}

HOEigenbasis HOEigenbasis::truncated(const OscillatorParams& params, const Grid1D& grid, int nmax) {
    params.validate();
    if (nmax < 0 || nmax >= grid.size())
        throw ConfigError("nmax must lie in [0, grid points - 1]");
    HOEigenbasis b(params, grid, nmax + 1);
    b.rows_ = hermite_rows(params, grid, nmax + 1);
    for (int k = 0; k <= nmax; ++k) {
        double* row = b.rows_.data() + static_cast<std::size_t>(k) * grid.size();
        const double inv = 1.0 / discrete_norm(row, grid);
        for (int i = 0; i < grid.size(); ++i) row[i] *= inv;
    }
    return b;
}

HOEigenbasis HOEigenbasis::complete(const OscillatorParams& params, const Grid1D& grid) {
    params.validate();
    HOEigenbasis b(params, grid, grid.size());
    b.rows_ = hermite_rows(params, grid, grid.size());
    if (grid.symmetric()) {
        std::vector<int> even, odd;
        for (int k = 0; k < grid.size(); ++k) (k % 2 == 0 ? even : odd).push_back(k);
        orthonormalize(b.rows_, grid, even, +1);
        orthonormalize(b.rows_, grid, odd, -1);
    } else {
        std::vector<int> all(grid.size());
        std::iota(all.begin(), all.end(), 0);
        orthonormalize(b.rows_, grid, all, 0);
    }
    return b;
}

WaveFunction1D HOEigenbasis::state_wavefunction(int k) const {
    WaveFunction1D psi{grid_, std::vector<cdouble>(grid_.size()), 0.0};
    const double* row = state(k);
    for (int i = 0; i < grid_.size(); ++i) psi.amp[i] = row[i];
    return psi;
}

HOEigenbasis::Expansion HOEigenbasis::expand(const WaveFunction1D& psi) const {
    if (!psi.grid.same_as(grid_))
        throw ConfigError("wave function and eigenbasis grids differ");
    const double h = grid_.spacing();
    Expansion e;
    e.coeff.resize(nstates_);
    double cap = 0.0;
    for (int k = 0; k < nstates_; ++k) {
        const double* row = state(k);
        cdouble c = 0.0;
        for (int i = 0; i < grid_.size(); ++i) c += row[i] * psi.amp[i];
        c *= h;
        e.coeff[k] = c;
        cap += std::norm(c);
    }
    const double n2 = psi.norm2();
    if (!(n2 > 0.0)) throw NotNormalizedError("cannot expand the zero wave function");
    e.captured = cap / n2;
    return e;
}

double HOEigenbasis::ket_captured(int i) const {
    double s = 0.0;
    for (int k = 0; k < nstates_; ++k) {
        const double v = state(k)[i];
        s += v * v;
    }
    return s * grid_.spacing();
}

WaveFunction1D propagate_ho(const WaveFunction1D& psi, double tau, const HOEigenbasis& basis) {
    const HOEigenbasis::Expansion e = basis.expand(psi);
    if (e.captured < 1.0 - 1e-8)
        throw TruncationError("eigenbasis captures only " + std::to_string(e.captured) +
                              " of the state norm; raise nmax or use a complete basis");
    WaveFunction1D out{psi.grid, std::vector<cdouble>(psi.amp.size(), 0.0), psi.time + tau};
    const double ih = 1.0 / basis.params().hbar;
    for (int k = 0; k < basis.nstates(); ++k) {
        const cdouble ck = e.coeff[k] * std::polar(1.0, -basis.energy(k) * tau * ih);
        if (ck == 0.0) continue;
        const double* row = basis.state(k);
        for (int i = 0; i < psi.grid.size(); ++i) out.amp[i] += ck * row[i];
    }
    return out;
}

namespace {

// Reference implementation: direct triple loop over the definition
// U[j][i] = h * sum_k phi_k(x_j) e^{-i E_k tau / hbar} phi_k(x_i).
std::vector<cdouble> propagator_matrix_serial(const HOEigenbasis& basis, double tau) {
    const int n = basis.grid().size();
    const int m = basis.nstates();
    const double h = basis.grid().spacing();
    const double ih = 1.0 / basis.params().hbar;
    std::vector<cdouble> phase(m);
    for (int k = 0; k < m; ++k) phase[k] = std::polar(1.0, -basis.energy(k) * tau * ih);
    std::vector<cdouble> u(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            cdouble acc = 0.0;
            for (int k = 0; k < m; ++k) acc += basis.state(k)[j] * (phase[k] * basis.state(k)[i]);
            u[static_cast<std::size_t>(j) * n + i] = h * acc;
        }
    }
    return u;
}

} // namespace

std::vector<cdouble> propagator_matrix(const HOEigenbasis& basis, double tau, Exec exec) {
    if (exec == Exec::serial) return propagator_matrix_serial(basis, tau);

    const int n = basis.grid().size();
    const int m = basis.nstates();
    const double h = basis.grid().spacing();
    const double ih = 1.0 / basis.params().hbar;
    // Transposed buffers make the k-contraction contiguous in both factors.
    // The k-sum runs in the same order as the serial reference, so the result
    // is bitwise identical.
    std::vector<double> phit(static_cast<std::size_t>(n) * m);
    std::vector<cdouble> zt(static_cast<std::size_t>(n) * m);
    for (int k = 0; k < m; ++k) {
        const double* row = basis.state(k);
        const cdouble z = std::polar(1.0, -basis.energy(k) * tau * ih);
        for (int i = 0; i < n; ++i) {
            phit[static_cast<std::size_t>(i) * m + k] = row[i];
            zt[static_cast<std::size_t>(i) * m + k] = z * row[i];
        }
    }
    std::vector<cdouble> u(static_cast<std::size_t>(n) * n);
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (int j = 0; j < n; ++j) {
        const double* pr = phit.data() + static_cast<std::size_t>(j) * m;
        for (int i = 0; i < n; ++i) {
            const cdouble* zr = zt.data() + static_cast<std::size_t>(i) * m;
            cdouble acc = 0.0;
            for (int k = 0; k < m; ++k) acc += pr[k] * zr[k];
            u[static_cast<std::size_t>(j) * n + i] = h * acc;
        }
    }
    return u;
}

std::vector<double> position_matrix(const HOEigenbasis& basis) {
    const int n = basis.grid().size();
    const int m = basis.nstates();
    const double h = basis.grid().spacing();
    std::vector<double> x(static_cast<std::size_t>(m) * m);
    for (int k = 0; k < m; ++k) {
        const double* rk = basis.state(k);
        for (int l = k; l < m; ++l) {
            const double* rl = basis.state(l);
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += rk[i] * basis.grid().point(i) * rl[i];
            acc *= h;
            x[static_cast<std::size_t>(k) * m + l] = acc;
            x[static_cast<std::size_t>(l) * m + k] = acc;
        }
    }
    return x;
}

} // namespace pwlab
