#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sideband/hilbert.hpp"
#include "sideband/linalg.hpp"

namespace sideband {

enum class PulseShape { Square, RaisedCosine, Gaussian };

inline const char* to_string(PulseShape s) {
    switch (s) {
        case PulseShape::Square: return "square";
        case PulseShape::RaisedCosine: return "raised_cosine";
        case PulseShape::Gaussian: return "gaussian";
    }
    return "?";
}

/// Coupling envelope G(t) with fixed integrated area g over [0, T].
/// The Gaussian is centered at T/2, truncated to [0, T] and rescaled so
/// the truncated integral equals the requested area exactly.
struct PulseEnvelope {
    PulseShape shape = PulseShape::Square;
    double area = std::numbers::pi / 4.0;  // g, radians
    double duration = 10.0;                // T, units of 1/omega
    double sigma_fraction = 0.15;          // Gaussian: sigma = sigma_fraction * T

    void validate() const {
        if (!(duration > 0.0)) throw ValidationError("envelope: duration must be > 0");
        if (!(area >= 0.0)) throw ValidationError("envelope: area must be >= 0");
        if (!(sigma_fraction > 0.0))
            throw ValidationError("envelope: sigma_fraction must be > 0");
    }

    double gauss_sigma() const { return sigma_fraction * duration; }

    // integral of exp(-(t-T/2)^2/(2 sigma^2)) over [0, T]
    double gauss_truncated_integral() const {
        const double s = gauss_sigma();
        return s * std::sqrt(2.0 * std::numbers::pi) *
               std::erf(duration / (2.0 * std::numbers::sqrt2 * s));
    }

    double value(double t) const {
        if (t < 0.0 || t > duration) return 0.0;
        switch (shape) {
            case PulseShape::Square:
                return area / duration;
            case PulseShape::RaisedCosine:
                return (area / duration) *
                       (1.0 - std::cos(2.0 * std::numbers::pi * t / duration));
            case PulseShape::Gaussian: {
                const double s = gauss_sigma();
                const double x = t - 0.5 * duration;
                return area / gauss_truncated_integral() * std::exp(-x * x / (2.0 * s * s));
            }
        }
        return 0.0;
    }

    /// Accumulated area g(t) = integral of G over [0, t]; g(T) = g.
    double integral(double t) const {
        const double tc = std::clamp(t, 0.0, duration);
        switch (shape) {
            case PulseShape::Square:
                return area * tc / duration;
            case PulseShape::RaisedCosine:
                return (area / duration) *
                       (tc - duration / (2.0 * std::numbers::pi) *
                                 std::sin(2.0 * std::numbers::pi * tc / duration));
            case PulseShape::Gaussian: {
                const double s = gauss_sigma();
                const double a = duration / (2.0 * std::numbers::sqrt2 * s);
                const double x = (tc - 0.5 * duration) / (std::numbers::sqrt2 * s);
                return area / gauss_truncated_integral() * s *
                       std::sqrt(0.5 * std::numbers::pi) * (std::erf(x) + std::erf(a));
            }
        }
        return 0.0;
    }

    double peak() const {
        switch (shape) {
            case PulseShape::Square: return area / duration;
            case PulseShape::RaisedCosine: return 2.0 * area / duration;
            case PulseShape::Gaussian: return area / gauss_truncated_integral();
        }
        return 0.0;
    }

    bool operator==(const PulseEnvelope&) const = default;
};

inline double envelope_value(const PulseEnvelope& env, double t) { return env.value(t); }
inline double pulse_area(const PulseEnvelope& env, double t) { return env.integral(t); }

struct IntegratorSettings {
    double step_fraction = 0.02;
    bool operator==(const IntegratorSettings&) const = default;
};

/// Physical and numerical parameters of a protocol run. beta is real
/// nonnegative by convention; the relative phase sits entirely in phi.
struct ProtocolParams {
    double omega = 1.0;
    double omega0 = 1.0;
    PulseEnvelope envelope_a;
    PulseEnvelope envelope_b;
    double alpha = std::numbers::sqrt2 / 2.0;
    double phi = 0.0;
    SidebandWindow window = SidebandWindow{-10, 10, 0};
    IntegratorSettings integrator;

    double beta() const { return std::sqrt(std::max(0.0, 1.0 - alpha * alpha)); }
    double detuning() const { return omega - omega0; }
    double omega_plus() const { return omega + omega0; }
    double duration() const { return envelope_a.duration; }

    void validate() const {
        if (!(omega > 0.0)) throw ValidationError("omega must be > 0");
        if (!(omega0 > 0.0)) throw ValidationError("omega0 must be > 0");
        if (alpha < 0.0 || alpha > 1.0) throw ValidationError("alpha must lie in [0, 1]");
        envelope_a.validate();
        envelope_b.validate();
        if (envelope_a.duration != envelope_b.duration)
            throw ValidationError("arm envelopes must share one pulse duration");
        window.validate();
        if (!(integrator.step_fraction > 0.0))
            throw ValidationError("integrator.step_fraction must be > 0");
    }

    bool operator==(const ProtocolParams&) const = default;
};

/// Single-arm interaction-picture Hamiltonian on [electron x TLS]
/// (electron index slower): G(t) (b e^{-iwt} + b+ e^{iwt})(s+ e^{iw0t} + s- e^{-iw0t}).
inline ComplexMatrix arm_hamiltonian_full(const SidebandWindow& w, const PulseEnvelope& env,
                                          double omega, double omega0, double t) {
    const double G = env.value(t);
    const ComplexMatrix B = ladder_b(w);
    const PauliOps P = pauli_ops();
    const cplx iw = cplx{0.0, 1.0} * omega * t;
    const cplx iw0 = cplx{0.0, 1.0} * omega0 * t;
    const ComplexMatrix E = std::exp(-iw) * B + std::exp(iw) * adjoint(B);
    const ComplexMatrix S = std::exp(iw0) * P.plus + std::exp(-iw0) * P.minus;
    return cplx{G, 0.0} * kron(E, S);
}

/// Single-arm rotating-wave Hamiltonian: G(t) (b s+ e^{-i Delta t} + h.c.).
inline ComplexMatrix arm_hamiltonian_rwa(const SidebandWindow& w, const PulseEnvelope& env,
                                         double delta, double t) {
    const double G = env.value(t);
    const ComplexMatrix B = ladder_b(w);
    const PauliOps P = pauli_ops();
    const cplx ph = std::exp(cplx{0.0, -delta * t});
    const ComplexMatrix ex = kron(B, P.plus);
    return cplx{G, 0.0} * (ph * ex + std::conj(ph) * adjoint(ex));
}

/// Full bilinear interaction-picture Hamiltonian on the four-partite space.
inline ComplexMatrix hamiltonian_full_interaction_picture(const ProtocolParams& p, double t) {
    const SubsystemLayout layout = SubsystemLayout::four_partite(p.window);
    const ComplexMatrix hA = arm_hamiltonian_full(p.window, p.envelope_a, p.omega, p.omega0, t);
    const ComplexMatrix hB = arm_hamiltonian_full(p.window, p.envelope_b, p.omega, p.omega0, t);
    return embed_pair(hA, Slot::ElectronA, Slot::Tls1, layout) +
           embed_pair(hB, Slot::ElectronB, Slot::Tls2, layout);
}

/// Rotating-wave interaction-picture Hamiltonian; at Delta = 0 the time
/// dependence enters only through the envelopes.
inline ComplexMatrix hamiltonian_rwa_interaction_picture(const ProtocolParams& p, double t) {
    const SubsystemLayout layout = SubsystemLayout::four_partite(p.window);
    const double d = p.detuning();
    const ComplexMatrix hA = arm_hamiltonian_rwa(p.window, p.envelope_a, d, t);
    const ComplexMatrix hB = arm_hamiltonian_rwa(p.window, p.envelope_b, d, t);
    return embed_pair(hA, Slot::ElectronA, Slot::Tls1, layout) +
           embed_pair(hB, Slot::ElectronB, Slot::Tls2, layout);
}

/// Joint excitation number n_A + n_B + (s1z + s2z)/2 on the four-partite space.
inline ComplexMatrix excitation_number_operator(const ProtocolParams& p) {
    const SubsystemLayout layout = SubsystemLayout::four_partite(p.window);
    const ComplexMatrix nOp = sideband_number(p.window);
    const PauliOps pl = pauli_ops();
    const ComplexMatrix halfZ = cplx{0.5, 0.0} * pl.z;
    return embed(nOp, Slot::ElectronA, layout) + embed(nOp, Slot::ElectronB, layout) +
           embed(halfZ, Slot::Tls1, layout) + embed(halfZ, Slot::Tls2, layout);
}

}  // namespace sideband
