#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "sideband/errors.hpp"

namespace sideband {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

/// Dense square complex matrix, row-major storage.
struct ComplexMatrix {
    int dim = 0;
    std::vector<cplx> a;

    ComplexMatrix() = default;
    explicit ComplexMatrix(int n) : dim(n), a(static_cast<std::size_t>(n) * n) {}

    cplx& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * dim + c]; }
    const cplx& operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * dim + c]; }

    static ComplexMatrix identity(int n) {
        ComplexMatrix m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline ComplexMatrix operator+(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (x.dim != y.dim) throw DimensionMismatchError("matrix add: dimension mismatch");
    ComplexMatrix r(x.dim);
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
}

inline ComplexMatrix operator-(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (x.dim != y.dim) throw DimensionMismatchError("matrix sub: dimension mismatch");
    ComplexMatrix r(x.dim);
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
}

inline ComplexMatrix operator*(cplx s, const ComplexMatrix& x) {
    ComplexMatrix r(x.dim);
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = s * x.a[i];
    return r;
}

inline ComplexMatrix operator*(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (x.dim != y.dim) throw DimensionMismatchError("matmul: dimension mismatch");
    const int n = x.dim;
    ComplexMatrix r(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const cplx xik = x(i, k);
            if (xik == cplx{0.0, 0.0}) continue;
            for (int j = 0; j < n; ++j) r(i, j) += xik * y(k, j);
        }
    }
    return r;
}

inline cvec operator*(const ComplexMatrix& m, const cvec& v) {
    if (static_cast<std::size_t>(m.dim) != v.size())
        throw DimensionMismatchError("matvec: dimension mismatch");
    cvec r(v.size());
    for (int i = 0; i < m.dim; ++i) {
        cplx acc = 0.0;
        for (int j = 0; j < m.dim; ++j) acc += m(i, j) * v[j];
        r[i] = acc;
    }
    return r;
}

inline ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix r(m.dim);
    for (int i = 0; i < m.dim; ++i)
        for (int j = 0; j < m.dim; ++j) r(j, i) = std::conj(m(i, j));
    return r;
}

inline cplx trace(const ComplexMatrix& m) {
    cplx t = 0.0;
    for (int i = 0; i < m.dim; ++i) t += m(i, i);
    return t;
}

inline double frobenius_norm(const ComplexMatrix& m) {
    double s = 0.0;
    for (const cplx& z : m.a) s += std::norm(z);
    return std::sqrt(s);
}

inline double max_abs(const ComplexMatrix& m) {
    double s = 0.0;
    for (const cplx& z : m.a) s = std::max(s, std::abs(z));
    return s;
}

/// Largest entry of |M - M^dagger|.
inline double hermiticity_defect(const ComplexMatrix& m) {
    double d = 0.0;
    for (int i = 0; i < m.dim; ++i)
        for (int j = i; j < m.dim; ++j)
            d = std::max(d, std::abs(m(i, j) - std::conj(m(j, i))));
    return d;
}

inline ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y) {
    ComplexMatrix r(x.dim * y.dim);
    for (int i = 0; i < x.dim; ++i)
        for (int j = 0; j < x.dim; ++j) {
            const cplx xij = x(i, j);
            if (xij == cplx{0.0, 0.0}) continue;
            for (int k = 0; k < y.dim; ++k)
                for (int l = 0; l < y.dim; ++l)
                    r(i * y.dim + k, j * y.dim + l) = xij * y(k, l);
        }
    return r;
}

inline double norm2(const cvec& v) {
    double s = 0.0;
    for (const cplx& z : v) s += std::norm(z);
    return std::sqrt(s);
}

inline cplx inner(const cvec& x, const cvec& y) {
    if (x.size() != y.size()) throw DimensionMismatchError("inner: size mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

/// |<x|y>|^2 for normalized vectors.
inline double fidelity(const cvec& x, const cvec& y) {
    return std::norm(inner(x, y));
}

struct HermitianEigenResult {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // columns, unitary
};

namespace detail {

constexpr double kHermTol = 1e-10;     // max |M - M^dagger| entry accepted
constexpr double kJacobiOffTol = 1e-12;  // off-diagonal Frobenius target
constexpr int kJacobiMaxSweeps = 100;

inline double offdiag_norm(const ComplexMatrix& m) {
    double s = 0.0;
    for (int i = 0; i < m.dim; ++i)
        for (int j = 0; j < m.dim; ++j)
            if (i != j) s += std::norm(m(i, j));
    return std::sqrt(s);
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Eigenvalues ascending; eigenvector columns unitary.
/// The input is scaled to unit max entry before sweeping so the fixed
/// off-diagonal threshold acts as a relative criterion.
inline HermitianEigenResult hermitian_eigen(const ComplexMatrix& m_in) {
    if (m_in.dim < 1) throw DimensionMismatchError("hermitian_eigen: empty matrix");
    if (hermiticity_defect(m_in) > detail::kHermTol)
        throw NotHermitianError("hermitian_eigen: matrix is not Hermitian within 1e-10");

    const int n = m_in.dim;
    const double scale = max_abs(m_in);
    HermitianEigenResult res;
    res.eigenvalues.assign(n, 0.0);
    res.eigenvectors = ComplexMatrix::identity(n);
    if (scale == 0.0) return res;

    // Symmetrized, scaled working copy.
    ComplexMatrix A(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            A(i, j) = 0.5 * (m_in(i, j) + std::conj(m_in(j, i))) / scale;
    ComplexMatrix& V = res.eigenvectors;

    bool converged = false;
    for (int sweep = 0; sweep < detail::kJacobiMaxSweeps; ++sweep) {
        if (detail::offdiag_norm(A) < detail::kJacobiOffTol) {
            converged = true;
            break;
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx apq = A(p, q);
                const double absapq = std::abs(apq);
                if (absapq == 0.0) continue;
                const double app = A(p, p).real();
                const double aqq = A(q, q).real();
                const cplx u = apq / absapq;
                const double tau = (app - aqq) / (2.0 * absapq);
                double t;
                if (tau == 0.0) {
                    t = 1.0;
                } else {
                    t = (tau > 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx su = s * u;
                const cplx suc = s * std::conj(u);
                // Column update: A <- A * J
                for (int k = 0; k < n; ++k) {
                    const cplx akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp + suc * akq;
                    A(k, q) = -su * akp + c * akq;
                }
                // Row update: A <- J^dagger * A
                for (int k = 0; k < n; ++k) {
                    const cplx apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk + su * aqk;
                    A(q, k) = -suc * apk + c * aqk;
                }
                // Accumulate eigenvectors: V <- V * J
                for (int k = 0; k < n; ++k) {
                    const cplx vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp + suc * vkq;
                    V(k, q) = -su * vkp + c * vkq;
                }
            }
        }
    }
    if (!converged && detail::offdiag_norm(A) >= detail::kJacobiOffTol)
        throw NoConvergenceError("hermitian_eigen: Jacobi sweep budget exhausted");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = A(i, i).real() * scale;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return diag[x] < diag[y]; });

    ComplexMatrix Vs(n);
    for (int j = 0; j < n; ++j) {
        res.eigenvalues[j] = diag[order[j]];
        for (int i = 0; i < n; ++i) Vs(i, j) = V(i, order[j]);
    }
    res.eigenvectors = std::move(Vs);
    return res;
}

/// Sum of |eigenvalues| of a Hermitian matrix.
inline double trace_norm_hermitian(const ComplexMatrix& m) {
    const HermitianEigenResult e = hermitian_eigen(m);
    double s = 0.0;
    for (double v : e.eigenvalues) s += std::abs(v);
    return s;
}

/// Hermitian PSD square root. Eigenvalues down to -1e-9 are accepted;
/// negatives are clipped to zero before the root.
inline ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m) {
    const HermitianEigenResult e = hermitian_eigen(m);
    if (!e.eigenvalues.empty() && e.eigenvalues.front() < -1e-9)
        throw NotPsdError("matrix_sqrt_psd: eigenvalue below -1e-9");
    const int n = m.dim;
    const ComplexMatrix& V = e.eigenvectors;
    ComplexMatrix r(n);
    for (int k = 0; k < n; ++k) {
        const double lam = std::sqrt(std::max(0.0, e.eigenvalues[k]));
        if (lam == 0.0) continue;
        for (int i = 0; i < n; ++i) {
            const cplx vik = V(i, k) * lam;
            if (vik == cplx{0.0, 0.0}) continue;
            for (int j = 0; j < n; ++j) r(i, j) += vik * std::conj(V(j, k));
        }
    }
    return r;
}

}  // namespace sideband
