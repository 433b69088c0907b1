#pragma once

#include <cstddef>

#include "sideband/linalg.hpp"

namespace sideband {

struct Rk4Scratch {
    cvec k1, k2, k3, k4, yt;
    void resize(std::size_t n) {
        k1.resize(n);
        k2.resize(n);
        k3.resize(n);
        k4.resize(n);
        yt.resize(n);
    }
};

/// Classical fourth-order Runge-Kutta update of y' = f(t, y), in place.
/// `f` has signature void(double t, const cvec& y, cvec& dy).
template <class DerivInto>
inline void rk4_step_into(DerivInto&& f, cvec& y, double t, double h, Rk4Scratch& ws) {
    const std::size_t n = y.size();
    ws.resize(n);
    f(t, y, ws.k1);
    for (std::size_t i = 0; i < n; ++i) ws.yt[i] = y[i] + 0.5 * h * ws.k1[i];
    f(t + 0.5 * h, ws.yt, ws.k2);
    for (std::size_t i = 0; i < n; ++i) ws.yt[i] = y[i] + 0.5 * h * ws.k2[i];
    f(t + 0.5 * h, ws.yt, ws.k3);
    for (std::size_t i = 0; i < n; ++i) ws.yt[i] = y[i] + h * ws.k3[i];
    f(t + h, ws.yt, ws.k4);
    const double w = h / 6.0;
    for (std::size_t i = 0; i < n; ++i)
        y[i] += w * (ws.k1[i] + 2.0 * ws.k2[i] + 2.0 * ws.k3[i] + ws.k4[i]);
}

/// One RK4 step of psi' = deriv(t, psi); `deriv` returns the derivative vector.
template <class Deriv>
inline cvec rk4_step(Deriv&& deriv, const cvec& psi, double t, double h) {
    cvec y = psi;
    Rk4Scratch ws;
    rk4_step_into([&](double tt, const cvec& yy, cvec& out) { out = deriv(tt, yy); }, y, t, h,
                  ws);
    return y;
}

}  // namespace sideband
