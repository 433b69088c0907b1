#pragma once

#include <cmath>
#include <optional>

#include "sideband/dynamics.hpp"
#include "sideband/hilbert.hpp"
#include "sideband/linalg.hpp"

namespace sideband {

namespace detail {

constexpr double kXStateTol = 1e-8;       // forbidden-entry tolerance
constexpr double kManifoldWeightMin = 1e-12;
constexpr double kSupportCut = 1e-15;     // marginal population kept in log_negativity

inline void require_two_qubit(const DensityMatrix& rho, const char* who) {
    if (rho.layout.dims != std::vector<int>{2, 2})
        throw DimensionMismatchError(std::string(who) + ": expected a 2x2 qubit pair");
}

}  // namespace detail

/// Largest off-X entry of a two-qubit state (basis order gg, ge, eg, ee).
inline double x_state_defect(const DensityMatrix& rho) {
    detail::require_two_qubit(rho, "x_state_defect");
    double d = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (i == j || i + j == 3) continue;
            d = std::max(d, std::abs(rho.mat(i, j)));
        }
    return d;
}

/// Single-excitation X-state coherence margin 2(|rho_eg,ge| - sqrt(rho_gg rho_ee)),
/// unclamped. The concurrence is its positive part.
inline double x_concurrence_margin(const DensityMatrix& rho) {
    detail::require_two_qubit(rho, "x_concurrence_margin");
    const double pgg = std::max(0.0, rho.mat(0, 0).real());
    const double pee = std::max(0.0, rho.mat(3, 3).real());
    return 2.0 * (std::abs(rho.mat(2, 1)) - std::sqrt(pgg * pee));
}

/// Concurrence of an X-shaped two-qubit state via the closed form on the
/// single-excitation coherence block.
inline double concurrence_x_state(const DensityMatrix& rho12) {
    if (x_state_defect(rho12) >= detail::kXStateTol)
        throw NotXStateError("concurrence_x_state: matrix is not X-shaped");
    return std::max(0.0, x_concurrence_margin(rho12));
}

/// Wootters concurrence of an arbitrary two-qubit state via the Hermitian
/// route sqrt(rho) rho~ sqrt(rho), rho~ = (sy x sy) rho* (sy x sy).
inline double concurrence_wootters(const DensityMatrix& rho) {
    detail::require_two_qubit(rho, "concurrence_wootters");
    ComplexMatrix yy(4);  // sigma_y x sigma_y is real
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    ComplexMatrix conj_rho(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) conj_rho(i, j) = std::conj(rho.mat(i, j));
    const ComplexMatrix tilde = yy * conj_rho * yy;
    const ComplexMatrix root = matrix_sqrt_psd(rho.mat);
    ComplexMatrix m = root * tilde * root;
    // absorb rounding-level asymmetry before the Hermitian solve
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m(i, j) = v;
            m(j, i) = std::conj(v);
        }
    const auto eig = hermitian_eigen(m);
    double lam[4];
    for (int k = 0; k < 4; ++k)
        lam[k] = std::sqrt(std::max(0.0, eig.eigenvalues[3 - k]));  // descending
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

/// X-state concurrence when the state is X-shaped, Wootters otherwise.
inline double concurrence_auto(const DensityMatrix& rho12, bool* used_wootters = nullptr) {
    if (x_state_defect(rho12) < detail::kXStateTol) {
        if (used_wootters) *used_wootters = false;
        return std::max(0.0, x_concurrence_margin(rho12));
    }
    if (used_wootters) *used_wootters = true;
    return concurrence_wootters(rho12);
}

/// Resonant closed-form TLS concurrence max{0, c^4 - 2 s^2 c^2} at area g_t.
inline double closed_form_C12(double g_t) {
    const double c = std::cos(g_t), s = std::sin(g_t);
    return std::max(0.0, c * c * c * c - 2.0 * s * s * c * c);
}

/// Closed-form heralding probability sin^2 cos^2 at area g_t.
inline double closed_form_Pgg(double g_t) {
    const double c = std::cos(g_t), s = std::sin(g_t);
    return s * s * c * c;
}

/// log2 of the trace norm of the partial transpose across the bipartition.
/// Tensor factors with marginal population below 1e-15 are dropped first;
/// they cannot move the trace norm at the tolerances used here.
inline double log_negativity(const DensityMatrix& rho, Slot cut_slot) {
    if (rho.layout.labels.size() != 2)
        throw DimensionMismatchError("log_negativity: bipartite layout required");
    rho.layout.slot_position(cut_slot);
    const int dA = rho.layout.dims[0];
    const int dB = rho.layout.dims[1];
    std::vector<double> mA(dA, 0.0), mB(dB, 0.0);
    for (int a = 0; a < dA; ++a)
        for (int b = 0; b < dB; ++b) {
            const double d = rho.mat(a * dB + b, a * dB + b).real();
            mA[a] += d;
            mB[b] += d;
        }
    std::vector<int> sa, sb;
    for (int a = 0; a < dA; ++a)
        if (mA[a] > detail::kSupportCut) sa.push_back(a);
    for (int b = 0; b < dB; ++b)
        if (mB[b] > detail::kSupportCut) sb.push_back(b);
    if (sa.empty() || sb.empty()) return 0.0;

    DensityMatrix r{SubsystemLayout{{static_cast<int>(sa.size()), static_cast<int>(sb.size())},
                                    rho.layout.labels},
                    ComplexMatrix(static_cast<int>(sa.size() * sb.size()))};
    const int nb = static_cast<int>(sb.size());
    for (std::size_t ia = 0; ia < sa.size(); ++ia)
        for (int ib = 0; ib < nb; ++ib)
            for (std::size_t ja = 0; ja < sa.size(); ++ja)
                for (int jb = 0; jb < nb; ++jb)
                    r.mat(static_cast<int>(ia) * nb + ib, static_cast<int>(ja) * nb + jb) =
                        rho.mat(sa[ia] * dB + sb[ib], sa[ja] * dB + sb[jb]);
    const double tn = trace_norm_hermitian(partial_transpose(r, cut_slot));
    return std::log2(std::max(1.0, tn));
}

enum class TlsOutcome { gg, ge, eg, ee };

inline const char* to_string(TlsOutcome o) {
    switch (o) {
        case TlsOutcome::gg: return "gg";
        case TlsOutcome::ge: return "ge";
        case TlsOutcome::eg: return "eg";
        case TlsOutcome::ee: return "ee";
    }
    return "?";
}

/// Projective TLS measurement record: outcome probability and the
/// renormalized conditional electron-pair state. `empty` flags a
/// zero-probability branch (no conditional state).
struct HeraldOutcome {
    TlsOutcome outcome = TlsOutcome::gg;
    double probability = 0.0;
    bool empty = true;
    SubsystemLayout electron_layout;
    cvec electron_amp;
};

/// Project a four-partite pure state onto a TLS computational outcome.
inline HeraldOutcome herald(const JointPureState& psi, TlsOutcome outcome) {
    const int de = psi.layout.dims[0];
    const int s1 = (outcome == TlsOutcome::eg || outcome == TlsOutcome::ee) ? 1 : 0;
    const int s2 = (outcome == TlsOutcome::ge || outcome == TlsOutcome::ee) ? 1 : 0;
    HeraldOutcome h;
    h.outcome = outcome;
    h.electron_layout = SubsystemLayout{{de, de}, {Slot::ElectronA, Slot::ElectronB}};
    cvec amp(static_cast<std::size_t>(de) * de);
    double p = 0.0;
    for (int a = 0; a < de; ++a)
        for (int b = 0; b < de; ++b) {
            const cplx v = psi.amp[((a * de + b) * 2 + s1) * 2 + s2];
            amp[a * de + b] = v;
            p += std::norm(v);
        }
    if (p < 1e-30) {
        h.probability = 0.0;
        h.empty = true;
        return h;
    }
    h.probability = p;
    h.empty = false;
    const double inv = 1.0 / std::sqrt(p);
    for (cplx& v : amp) v *= inv;
    h.electron_amp = std::move(amp);
    return h;
}

enum class ManifoldSign { plus, minus };

inline const char* to_string(ManifoldSign s) { return s == ManifoldSign::plus ? "plus" : "minus"; }

/// Electron Bell state (|s 0> + |0 s>)/sqrt(2) with s = n0 +/- 1, as a
/// vector on [ElectronA x ElectronB].
inline cvec electron_bell_state(const SidebandWindow& w, ManifoldSign sign) {
    const int de = w.dim();
    const int i0 = w.index_of(w.n0);
    const int is = w.index_of(sign == ManifoldSign::plus ? w.n0 + 1 : w.n0 - 1);
    cvec v(static_cast<std::size_t>(de) * de);
    v[is * de + i0] = 1.0 / std::numbers::sqrt2;
    v[i0 * de + is] = 1.0 / std::numbers::sqrt2;
    return v;
}

/// Fidelity of a heralded electron state with the target Bell state.
inline double herald_fidelity_bell(const HeraldOutcome& h, const SidebandWindow& w,
                                   ManifoldSign sign) {
    if (h.empty) return 0.0;
    return fidelity(electron_bell_state(w, sign), h.electron_amp);
}

/// Target-manifold diagnostics: weight w2, the normalized restricted 2x2
/// state in ordered basis {|s0>, |0s>}, and its log-negativity under the
/// two-qubit identification |s0> -> |1>_A|0>_B, |0s> -> |0>_A|1>_B.
struct ManifoldReport {
    ManifoldSign sign = ManifoldSign::plus;
    double weight = 0.0;
    ComplexMatrix restricted;  // 2x2
    double log_negativity = 0.0;
};

/// Weight of the target manifold span{|s0>, |0s>} in rhoAB (no renormalization).
inline double manifold_weight(const DensityMatrix& rhoAB, ManifoldSign sign,
                              const SidebandWindow& w) {
    const int de = w.dim();
    if (rhoAB.layout.dims != std::vector<int>{de, de})
        throw DimensionMismatchError("manifold_weight: layout/window mismatch");
    const int i0 = w.index_of(w.n0);
    const int is = w.index_of(sign == ManifoldSign::plus ? w.n0 + 1 : w.n0 - 1);
    const int v1 = is * de + i0;
    const int v2 = i0 * de + is;
    return rhoAB.mat(v1, v1).real() + rhoAB.mat(v2, v2).real();
}

inline ManifoldReport manifold_report(const DensityMatrix& rhoAB, ManifoldSign sign,
                                      const SidebandWindow& w) {
    const int de = w.dim();
    const int i0 = w.index_of(w.n0);
    const int is = w.index_of(sign == ManifoldSign::plus ? w.n0 + 1 : w.n0 - 1);
    const int v1 = is * de + i0;
    const int v2 = i0 * de + is;
    ManifoldReport rep;
    rep.sign = sign;
    rep.weight = manifold_weight(rhoAB, sign, w);
    if (rep.weight < detail::kManifoldWeightMin)
        throw WeightTooSmallError("manifold_report: weight below 1e-12");
    rep.restricted = ComplexMatrix(2);
    rep.restricted(0, 0) = rhoAB.mat(v1, v1) / rep.weight;
    rep.restricted(0, 1) = rhoAB.mat(v1, v2) / rep.weight;
    rep.restricted(1, 0) = rhoAB.mat(v2, v1) / rep.weight;
    rep.restricted(1, 1) = rhoAB.mat(v2, v2) / rep.weight;

    DensityMatrix qubit{SubsystemLayout{{2, 2}, {Slot::ElectronA, Slot::ElectronB}},
                        ComplexMatrix(4)};
    qubit.mat(2, 2) = rep.restricted(0, 0);  // |10><10|
    qubit.mat(2, 1) = rep.restricted(0, 1);  // |10><01|
    qubit.mat(1, 2) = rep.restricted(1, 0);
    qubit.mat(1, 1) = rep.restricted(1, 1);
    rep.log_negativity = log_negativity(qubit, Slot::ElectronB);
    return rep;
}

/// Closed-form transfer law log2(1 + 2 alpha sqrt(1 - alpha^2)); equals
/// log2(1 + C12(0)) and is independent of the resource phase.
inline double transfer_law(double alpha) {
    if (alpha < 0.0 || alpha > 1.0) throw ValidationError("transfer_law: alpha outside [0, 1]");
    return std::log2(1.0 + 2.0 * alpha * std::sqrt(std::max(0.0, 1.0 - alpha * alpha)));
}

/// Closed-form X-state of the TLS pair for the resonant Bell-resource run.
inline DensityMatrix tls_xstate_benchmark(double g_t) {
    const double c2 = std::cos(g_t) * std::cos(g_t);
    const double s2 = std::sin(g_t) * std::sin(g_t);
    DensityMatrix rho{SubsystemLayout{{2, 2}, {Slot::Tls1, Slot::Tls2}}, ComplexMatrix(4)};
    rho.mat(0, 0) = s2 * c2;
    rho.mat(3, 3) = s2 * c2;
    rho.mat(1, 1) = 0.5 * (c2 * c2 + s2 * s2);
    rho.mat(2, 2) = 0.5 * (c2 * c2 + s2 * s2);
    rho.mat(1, 2) = 0.5 * c2 * c2;
    rho.mat(2, 1) = 0.5 * c2 * c2;
    return rho;
}

/// Time at which the TLS concurrence first reaches zero for a square pulse
/// of area g over duration T, if that happens within the pulse.
inline std::optional<double> sudden_death_time(double g, double T) {
    if (!(g > 0.0) || !(T > 0.0)) throw ValidationError("sudden_death_time: need g, T > 0");
    const double t = std::asin(1.0 / std::sqrt(3.0)) * T / g;
    if (t <= T) return t;
    return std::nullopt;
}

}  // namespace sideband
