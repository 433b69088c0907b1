#pragma once

// Shared oracles for the test suites. Everything here is deliberately
// independent of the implementation paths it checks: characteristic
// polynomials come from trace powers, roots from derivative-chain
// bisection, integrals from trapezoid quadrature.

#include <cmath>
#include <functional>
#include <vector>

#include "sideband/linalg.hpp"

namespace oracle {

using sideband::ComplexMatrix;
using sideband::cplx;

// Characteristic polynomial coefficients (leading 1) via Faddeev-LeVerrier.
inline std::vector<double> char_poly(const ComplexMatrix& m) {
    const int n = m.dim;
    std::vector<double> c(n + 1, 0.0);
    c[0] = 1.0;
    ComplexMatrix mk = m;
    for (int k = 1; k <= n; ++k) {
        const double ck = -sideband::trace(mk).real() / k;
        c[k] = ck;
        if (k == n) break;
        ComplexMatrix shifted = mk;
        for (int i = 0; i < n; ++i) shifted(i, i) += ck;
        mk = m * shifted;
    }
    return c;
}

inline double poly_eval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (double ci : c) v = v * x + ci;
    return v;
}

inline std::vector<double> poly_derivative(const std::vector<double>& c) {
    const int n = static_cast<int>(c.size()) - 1;
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = c[i] * (n - i);
    return d;
}

inline double bisect_root(const std::vector<double>& c, double lo, double hi) {
    double flo = poly_eval(c, lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = poly_eval(c, mid);
        if ((flo <= 0.0) == (fm <= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// All real roots of a real-rooted polynomial, ascending, by recursing on
// the derivative chain and bisecting between critical points.
inline std::vector<double> poly_real_roots(const std::vector<double>& c) {
    const int n = static_cast<int>(c.size()) - 1;
    if (n == 1) return {-c[1] / c[0]};
    const std::vector<double> crit = poly_real_roots(poly_derivative(c));
    double bound = 0.0;
    for (int i = 1; i <= n; ++i) bound = std::max(bound, std::abs(c[i] / c[0]));
    bound += 1.0;
    std::vector<double> edges{-bound};
    edges.insert(edges.end(), crit.begin(), crit.end());
    edges.push_back(bound);
    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = edges[i], b = edges[i + 1];
        if (!(b > a)) continue;
        const double fa = poly_eval(c, a), fb = poly_eval(c, b);
        if ((fa <= 0.0) != (fb <= 0.0)) roots.push_back(bisect_root(c, a, b));
    }
    return roots;
}

inline double trapezoid(const std::function<double(double)>& f, double a, double b, int n) {
    double s = 0.5 * (f(a) + f(b));
    const double h = (b - a) / n;
    for (int i = 1; i < n; ++i) s += f(a + i * h);
    return s * h;
}

}  // namespace oracle
