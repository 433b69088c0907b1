#pragma once

#include <cmath>
#include <vector>

#include "sideband/model.hpp"
#include "sideband/rk4.hpp"

namespace sideband {

enum class Generator { Rwa, Full };

inline const char* to_string(Generator g) {
    return g == Generator::Rwa ? "rwa" : "full";
}

/// Initial product state |n0>_A |n0>_B (alpha |eg> + beta e^{i phi} |ge>).
inline JointPureState initial_state(const ProtocolParams& p) {
    const SubsystemLayout layout = SubsystemLayout::four_partite(p.window);
    JointPureState psi{layout, cvec(layout.flat_dim())};
    const int i0 = p.window.index_of(p.window.n0);
    psi.amp[flat_index(layout, {i0, i0, 1, 0})] = p.alpha;
    psi.amp[flat_index(layout, {i0, i0, 0, 1})] =
        p.beta() * std::exp(cplx{0.0, p.phi});
    return psi;
}

/// Population on the boundary sidebands n_min / n_max of either electron.
inline double edge_population(const JointPureState& psi) {
    const int de = psi.layout.dims[0];
    double s = 0.0;
    for (int a = 0; a < de; ++a)
        for (int b = 0; b < de; ++b) {
            if (a != 0 && a != de - 1 && b != 0 && b != de - 1) continue;
            const int base = ((a * de + b) * 2) * 2;
            for (int k = 0; k < 4; ++k) s += std::norm(psi.amp[base + k]);
        }
    return s;
}

namespace detail {

// One bilinear term G * (ladder shift) x (sigma raise/lower) on one arm,
// applied matrix-free: out += coeff * (term |in>).
inline void apply_arm_term(const cvec& in, cvec& out, int de, bool arm_a, int e_shift,
                           bool sigma_raise, cplx coeff) {
    const int lo = e_shift < 0 ? 1 : 0;
    const int hi = e_shift > 0 ? de - 1 : de;
    const int s_in = sigma_raise ? 0 : 1;
    const int s_out = sigma_raise ? 1 : 0;
    if (arm_a) {
        // electron index a (stride de*4), TLS1 index s1 (stride 2)
        for (int a = lo; a < hi; ++a)
            for (int b = 0; b < de; ++b) {
                const int in_base = (a * de + b) * 4 + s_in * 2;
                const int out_base = ((a + e_shift) * de + b) * 4 + s_out * 2;
                out[out_base] += coeff * in[in_base];
                out[out_base + 1] += coeff * in[in_base + 1];
            }
    } else {
        // electron index b (stride 4), TLS2 index s2 (stride 1)
        for (int a = 0; a < de; ++a)
            for (int b = lo; b < hi; ++b) {
                const int in_base = (a * de + b) * 4 + s_in;
                const int out_base = (a * de + b + e_shift) * 4 + s_out;
                out[out_base] += coeff * in[in_base];
                out[out_base + 2] += coeff * in[in_base + 2];
            }
    }
}

}  // namespace detail

/// Matrix-free derivative psi' = -i H_I(t) psi for either generator.
/// Agrees with the dense Hamiltonian builders entry for entry.
struct JointDeriv {
    ProtocolParams params;
    Generator gen = Generator::Rwa;

    void operator()(double t, const cvec& in, cvec& out) const {
        std::fill(out.begin(), out.end(), cplx{0.0, 0.0});
        const int de = params.window.dim();
        const double delta = params.detuning();
        const double wplus = params.omega_plus();
        const cplx mi{0.0, -1.0};
        for (int arm = 0; arm < 2; ++arm) {
            const bool arm_a = arm == 0;
            const PulseEnvelope& env = arm_a ? params.envelope_a : params.envelope_b;
            const double G = env.value(t);
            if (G == 0.0) continue;
            detail::apply_arm_term(in, out, de, arm_a, -1, true,
                                   mi * G * std::exp(cplx{0.0, -delta * t}));
            detail::apply_arm_term(in, out, de, arm_a, +1, false,
                                   mi * G * std::exp(cplx{0.0, delta * t}));
            if (gen == Generator::Full) {
                detail::apply_arm_term(in, out, de, arm_a, -1, false,
                                       mi * G * std::exp(cplx{0.0, -wplus * t}));
                detail::apply_arm_term(in, out, de, arm_a, +1, true,
                                       mi * G * std::exp(cplx{0.0, wplus * t}));
            }
        }
    }
};

/// Time grid, sampled states and diagnostics of one propagation.
struct Trajectory {
    std::vector<double> times;
    std::vector<JointPureState> states;
    std::vector<double> edge_leakage;
    std::vector<double> norm_drift;  // per sample |norm - 1|

    double max_norm_drift() const {
        double m = 0.0;
        for (double d : norm_drift) m = std::max(m, d);
        return m;
    }
    double max_edge_leakage() const {
        double m = 0.0;
        for (double d : edge_leakage) m = std::max(m, d);
        return m;
    }
    bool edge_alarm() const { return max_edge_leakage() > 1e-6; }
};

/// RK4 step size from the fastest scale in play.
inline double step_size_target(const ProtocolParams& p) {
    const double T = p.duration();
    double fastest = std::max(
        {p.omega_plus(), p.envelope_a.peak(), p.envelope_b.peak(), std::abs(p.detuning()),
         1.0 / T});
    return p.integrator.step_fraction / fastest;
}

/// Fixed-step RK4 propagation of the interaction-picture Schroedinger
/// equation, sampled uniformly over [0, T]. No renormalization is applied;
/// norm drift is a diagnostic and beyond 1e-5 it is an error.
inline Trajectory evolve(const ProtocolParams& p, Generator gen, int samples) {
    p.validate();
    if (samples < 2) throw ValidationError("evolve: samples must be >= 2");
    const double T = p.duration();
    const double h_target = step_size_target(p);
    const double dt_sample = T / (samples - 1);
    const int n_sub = std::max(1, static_cast<int>(std::ceil(dt_sample / h_target)));
    const double h = dt_sample / n_sub;

    const JointDeriv deriv{p, gen};
    JointPureState psi = initial_state(p);
    Rk4Scratch ws;

    Trajectory traj;
    traj.times.reserve(samples);
    traj.states.reserve(samples);
    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.states.push_back(psi);
        traj.edge_leakage.push_back(edge_population(psi));
        const double drift = std::abs(psi.norm() - 1.0);
        traj.norm_drift.push_back(drift);
        if (drift > 1e-5) throw NormDriftError("evolve: norm drift exceeded 1e-5");
    };
    record(0.0);
    for (int i = 1; i < samples; ++i) {
        const double t0 = (i - 1) * dt_sample;
        for (int k = 0; k < n_sub; ++k)
            rk4_step_into(deriv, psi.amp, t0 + k * h, h, ws);
        record(i * dt_sample);
    }
    return traj;
}

/// Single-arm state on [electron x TLS], TLS index fastest.
struct ArmState {
    SidebandWindow window;
    cvec amp;  // length window.dim()*2
};

inline ArmState arm_basis_state(const SidebandWindow& w, int n, int tls) {
    ArmState s{w, cvec(static_cast<std::size_t>(w.dim()) * 2)};
    s.amp[w.index_of(n) * 2 + tls] = 1.0;
    return s;
}

/// Exact resonant rotating-wave map at accumulated area g_t:
/// |n,g> -> cos g |n,g> - i sin g |n-1,e>,
/// |n,e> -> cos g |n,e> - i sin g |n+1,g>.
inline ArmState closed_form_rwa_apply(const SidebandWindow& w, double g_t,
                                      const ArmState& psi) {
    const int de = w.dim();
    if (psi.amp.size() != static_cast<std::size_t>(de) * 2)
        throw DimensionMismatchError("closed_form_rwa_apply: state/window mismatch");
    const double edge_pop = std::norm(psi.amp[0]) + std::norm(psi.amp[1]) +
                            std::norm(psi.amp[(de - 1) * 2]) +
                            std::norm(psi.amp[(de - 1) * 2 + 1]);
    if (edge_pop > 1e-24)
        throw EdgeSupportError("closed_form_rwa_apply: population on boundary sidebands");
    const double c = std::cos(g_t);
    const cplx mis = cplx{0.0, -std::sin(g_t)};
    ArmState out{w, cvec(psi.amp.size())};
    for (int e = 0; e < de; ++e) {
        const cplx ag = psi.amp[e * 2];
        const cplx ae = psi.amp[e * 2 + 1];
        if (ag != cplx{0.0, 0.0}) {
            out.amp[e * 2] += c * ag;
            out.amp[(e - 1) * 2 + 1] += mis * ag;  // e >= 1 by the edge precondition
        }
        if (ae != cplx{0.0, 0.0}) {
            out.amp[e * 2 + 1] += c * ae;
            out.amp[(e + 1) * 2] += mis * ae;
        }
    }
    return out;
}

/// Resonant closed-form four-partite state: per-arm exact maps applied
/// branchwise to (alpha |eg> + beta e^{i phi} |ge>) |n0, n0>.
inline JointPureState closed_form_four_partite(const ProtocolParams& p, double t) {
    p.validate();
    if (std::abs(p.detuning()) > 1e-12)
        throw OffResonanceError("closed_form_four_partite requires Delta = 0");
    const SidebandWindow& w = p.window;
    const double ga = pulse_area(p.envelope_a, t);
    const double gb = pulse_area(p.envelope_b, t);
    const ArmState uae = closed_form_rwa_apply(w, ga, arm_basis_state(w, w.n0, 1));
    const ArmState uag = closed_form_rwa_apply(w, ga, arm_basis_state(w, w.n0, 0));
    const ArmState ube = closed_form_rwa_apply(w, gb, arm_basis_state(w, w.n0, 1));
    const ArmState ubg = closed_form_rwa_apply(w, gb, arm_basis_state(w, w.n0, 0));

    const SubsystemLayout layout = SubsystemLayout::four_partite(w);
    JointPureState psi{layout, cvec(layout.flat_dim())};
    const cplx wa = p.alpha;
    const cplx wb = p.beta() * std::exp(cplx{0.0, p.phi});
    const int de = w.dim();
    for (int a = 0; a < de; ++a)
        for (int s1 = 0; s1 < 2; ++s1) {
            const cplx ae = uae.amp[a * 2 + s1];
            const cplx ag = uag.amp[a * 2 + s1];
            if (ae == cplx{0.0, 0.0} && ag == cplx{0.0, 0.0}) continue;
            for (int b = 0; b < de; ++b)
                for (int s2 = 0; s2 < 2; ++s2) {
                    const cplx amp =
                        wa * ae * ubg.amp[b * 2 + s2] + wb * ag * ube.amp[b * 2 + s2];
                    if (amp == cplx{0.0, 0.0}) continue;
                    psi.amp[((a * de + b) * 2 + s1) * 2 + s2] += amp;
                }
        }
    return psi;
}

namespace detail {

// Matrix-free derivative for a single-arm propagator U' = -i H_arm(t) U.
// U is row-major on the arm space (electron slower, TLS faster).
struct ArmPropDeriv {
    const ProtocolParams* params;
    Generator gen;
    bool arm_a;

    void operator()(double t, const cvec& in, cvec& out) const {
        const int de = params->window.dim();
        const int dim = de * 2;
        std::fill(out.begin(), out.end(), cplx{0.0, 0.0});
        const PulseEnvelope& env = arm_a ? params->envelope_a : params->envelope_b;
        const double G = env.value(t);
        if (G == 0.0) return;
        const cplx mi{0.0, -1.0};
        const double delta = params->detuning();
        const double wplus = params->omega_plus();
        auto add_term = [&](int e_shift, bool raise, cplx coeff) {
            const int lo = e_shift < 0 ? 1 : 0;
            const int hi = e_shift > 0 ? de - 1 : de;
            const int s_in = raise ? 0 : 1;
            const int s_out = raise ? 1 : 0;
            for (int e = lo; e < hi; ++e) {
                const int rin = e * 2 + s_in;
                const int rout = (e + e_shift) * 2 + s_out;
                for (int col = 0; col < dim; ++col)
                    out[rout * dim + col] += coeff * in[rin * dim + col];
            }
        };
        const cplx co = mi * G * std::exp(cplx{0.0, -delta * t});
        add_term(-1, true, co);
        add_term(+1, false, mi * G * std::exp(cplx{0.0, delta * t}));
        if (gen == Generator::Full) {
            add_term(-1, false, mi * G * std::exp(cplx{0.0, -wplus * t}));
            add_term(+1, true, mi * G * std::exp(cplx{0.0, wplus * t}));
        }
    }
};

}  // namespace detail

/// Apply a single-arm operator (row-major on electron x TLS) to the joint state.
inline JointPureState apply_arm_operator(const ComplexMatrix& u, bool arm_a,
                                         const JointPureState& psi) {
    const int de = psi.layout.dims[0];
    const int dim = de * 2;
    if (u.dim != dim) throw DimensionMismatchError("apply_arm_operator: dimension mismatch");
    JointPureState out{psi.layout, cvec(psi.amp.size())};
    cvec v(dim), wv(dim);
    const int env_count = dim;  // other electron x other TLS
    for (int env = 0; env < env_count; ++env) {
        const int b = env / 2, s2 = env % 2;
        for (int e = 0; e < de; ++e)
            for (int s = 0; s < 2; ++s) {
                const int flat = arm_a ? ((e * de + b) * 2 + s) * 2 + s2
                                       : ((b * de + e) * 2 + s2) * 2 + s;
                v[e * 2 + s] = psi.amp[flat];
            }
        for (int r = 0; r < dim; ++r) {
            cplx acc = 0.0;
            for (int cidx = 0; cidx < dim; ++cidx) acc += u(r, cidx) * v[cidx];
            wv[r] = acc;
        }
        for (int e = 0; e < de; ++e)
            for (int s = 0; s < 2; ++s) {
                const int flat = arm_a ? ((e * de + b) * 2 + s) * 2 + s2
                                       : ((b * de + e) * 2 + s2) * 2 + s;
                out.amp[flat] = wv[e * 2 + s];
            }
    }
    return out;
}

/// Per-arm RK4 propagator on the arm space (columns = evolved basis states).
inline ComplexMatrix arm_propagator(const ProtocolParams& p, Generator gen, bool arm_a,
                                    double t) {
    const int dim = p.window.dim() * 2;
    ComplexMatrix u = ComplexMatrix::identity(dim);
    if (t <= 0.0) return u;
    const double h_target = step_size_target(p);
    const int n = std::max(1, static_cast<int>(std::ceil(t / h_target)));
    const double h = t / n;
    detail::ArmPropDeriv deriv{&p, gen, arm_a};
    Rk4Scratch ws;
    for (int k = 0; k < n; ++k) rk4_step_into(deriv, u.a, k * h, h, ws);
    return u;
}

/// Propagate by the exact tensor factorization U_A1 x U_B2: each arm is
/// integrated on its own D_e*2 space and the factors applied to the
/// initial state.
inline JointPureState factorized_propagate(const ProtocolParams& p, Generator gen, double t) {
    p.validate();
    const ComplexMatrix uA = arm_propagator(p, gen, true, t);
    const ComplexMatrix uB = arm_propagator(p, gen, false, t);
    JointPureState psi = initial_state(p);
    psi = apply_arm_operator(uA, true, psi);
    psi = apply_arm_operator(uB, false, psi);
    return psi;
}

}  // namespace sideband
