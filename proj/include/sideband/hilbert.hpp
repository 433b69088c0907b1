#pragma once

#include <string>
#include <vector>

#include "sideband/errors.hpp"
#include "sideband/linalg.hpp"

namespace sideband {

enum class Slot { ElectronA, ElectronB, Tls1, Tls2 };

inline const char* to_string(Slot s) {
    switch (s) {
        case Slot::ElectronA: return "ElectronA";
        case Slot::ElectronB: return "ElectronB";
        case Slot::Tls1: return "Tls1";
        case Slot::Tls2: return "Tls2";
    }
    return "?";
}

/// Truncated electron sideband ladder [n_min, n_max] with reference
/// sideband n0. The window must leave at least two sidebands on each
/// side of n0.
struct SidebandWindow {
    int n_min = -10;
    int n_max = 10;
    int n0 = 0;

    int dim() const { return n_max - n_min + 1; }

    int index_of(int n) const {
        if (n < n_min || n > n_max) throw IndexOutOfRangeError("sideband outside window");
        return n - n_min;
    }
    int sideband_at(int idx) const { return n_min + idx; }

    void validate() const {
        if (n_min > n0 - 2 || n_max < n0 + 2 || dim() < 5)
            throw ValidationError(
                "window: need n_min <= n0-2, n_max >= n0+2, dimension >= 5");
    }

    static SidebandWindow centered(int n0, int halfwidth) {
        SidebandWindow w{n0 - halfwidth, n0 + halfwidth, n0};
        w.validate();
        return w;
    }

    bool operator==(const SidebandWindow&) const = default;
};

/// Ordered tensor factorization. The canonical four-partite order is
/// [ElectronA, ElectronB, Tls1, Tls2] with the last label fastest.
struct SubsystemLayout {
    std::vector<int> dims;
    std::vector<Slot> labels;

    int flat_dim() const {
        int d = 1;
        for (int x : dims) d *= x;
        return d;
    }

    int slot_position(Slot s) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == s) return static_cast<int>(i);
        throw UnknownSlotError(std::string("layout has no slot ") + to_string(s));
    }

    int stride(int pos) const {
        int st = 1;
        for (std::size_t i = pos + 1; i < dims.size(); ++i) st *= dims[i];
        return st;
    }

    static SubsystemLayout four_partite(const SidebandWindow& w) {
        w.validate();
        return SubsystemLayout{{w.dim(), w.dim(), 2, 2},
                               {Slot::ElectronA, Slot::ElectronB, Slot::Tls1, Slot::Tls2}};
    }

    bool operator==(const SubsystemLayout&) const = default;
};

/// Mixed-radix flat index, last label fastest.
inline int flat_index(const SubsystemLayout& layout, const std::vector<int>& multi) {
    if (multi.size() != layout.dims.size())
        throw DimensionMismatchError("flat_index: wrong component count");
    int idx = 0;
    for (std::size_t k = 0; k < multi.size(); ++k) {
        if (multi[k] < 0 || multi[k] >= layout.dims[k])
            throw IndexOutOfRangeError("flat_index: component out of range");
        idx = idx * layout.dims[k] + multi[k];
    }
    return idx;
}

inline std::vector<int> multi_index(const SubsystemLayout& layout, int flat) {
    if (flat < 0 || flat >= layout.flat_dim())
        throw IndexOutOfRangeError("multi_index: flat index out of range");
    std::vector<int> multi(layout.dims.size());
    for (int k = static_cast<int>(layout.dims.size()) - 1; k >= 0; --k) {
        multi[k] = flat % layout.dims[k];
        flat /= layout.dims[k];
    }
    return multi;
}

/// Normalized pure state over the layout's tensor product.
struct JointPureState {
    SubsystemLayout layout;
    cvec amp;

    double norm() const { return norm2(amp); }
};

/// Hermitian, unit-trace, PSD operator over the kept subsystems.
struct DensityMatrix {
    SubsystemLayout layout;
    ComplexMatrix mat;
};

/// Ladder operator b with open boundary: b|n> = |n-1>, b|n_min> = 0.
inline ComplexMatrix ladder_b(const SidebandWindow& w) {
    w.validate();
    ComplexMatrix m(w.dim());
    for (int n = w.n_min + 1; n <= w.n_max; ++n) m(n - 1 - w.n_min, n - w.n_min) = 1.0;
    return m;
}

/// Diagonal sideband-number operator, entries are the integer n values.
inline ComplexMatrix sideband_number(const SidebandWindow& w) {
    w.validate();
    ComplexMatrix m(w.dim());
    for (int i = 0; i < w.dim(); ++i) m(i, i) = static_cast<double>(w.sideband_at(i));
    return m;
}

/// Pauli operators in TLS basis order [g, e]:
/// sigma_+ = |e><g|, sigma_- = |g><e|, sigma_z = |e><e| - |g><g|.
struct PauliOps {
    ComplexMatrix plus, minus, z;
};

inline PauliOps pauli_ops() {
    PauliOps p{ComplexMatrix(2), ComplexMatrix(2), ComplexMatrix(2)};
    p.plus(1, 0) = 1.0;
    p.minus(0, 1) = 1.0;
    p.z(0, 0) = -1.0;
    p.z(1, 1) = 1.0;
    return p;
}

/// op on `slot` tensored with identity everywhere else.
inline ComplexMatrix embed(const ComplexMatrix& op, Slot slot, const SubsystemLayout& layout) {
    const int pos = layout.slot_position(slot);
    const int ds = layout.dims[pos];
    if (op.dim != ds) throw DimensionMismatchError("embed: operator/slot dimension mismatch");
    const int D = layout.flat_dim();
    const int st = layout.stride(pos);
    ComplexMatrix out(D);
    for (int flat = 0; flat < D; ++flat) {
        if ((flat / st) % ds != 0) continue;  // enumerate slot-component-zero bases
        for (int i = 0; i < ds; ++i)
            for (int j = 0; j < ds; ++j) out(flat + i * st, flat + j * st) = op(i, j);
    }
    return out;
}

/// Lift an operator on (slotX tensor slotY), row index = x*dimY + y,
/// into the full layout (identity on the other slots).
inline ComplexMatrix embed_pair(const ComplexMatrix& op, Slot slotX, Slot slotY,
                                const SubsystemLayout& layout) {
    const int px = layout.slot_position(slotX);
    const int py = layout.slot_position(slotY);
    if (px == py) throw UnknownSlotError("embed_pair: slots must differ");
    const int dx = layout.dims[px], dy = layout.dims[py];
    if (op.dim != dx * dy) throw DimensionMismatchError("embed_pair: dimension mismatch");
    const int sx = layout.stride(px), sy = layout.stride(py);
    const int D = layout.flat_dim();
    ComplexMatrix out(D);
    for (int flat = 0; flat < D; ++flat) {
        if ((flat / sx) % dx != 0 || (flat / sy) % dy != 0) continue;
        for (int ix = 0; ix < dx; ++ix)
            for (int iy = 0; iy < dy; ++iy)
                for (int jx = 0; jx < dx; ++jx)
                    for (int jy = 0; jy < dy; ++jy)
                        out(flat + ix * sx + iy * sy, flat + jx * sx + jy * sy) =
                            op(ix * dy + iy, jx * dy + jy);
    }
    return out;
}

namespace detail {

struct TraceIndexing {
    std::vector<int> keep_pos;
    std::vector<int> keep_offsets;   // flat contribution of each kept multi-index
    std::vector<int> trace_offsets;  // flat contribution of each traced multi-index
    SubsystemLayout kept_layout;
};

inline std::vector<int> enumerate_offsets(const SubsystemLayout& layout,
                                          const std::vector<int>& positions) {
    std::vector<int> offsets{0};
    for (int pos : positions) {
        const int d = layout.dims[pos];
        const int st = layout.stride(pos);
        std::vector<int> next;
        next.reserve(offsets.size() * d);
        for (int base : offsets)
            for (int i = 0; i < d; ++i) next.push_back(base + i * st);
        offsets = std::move(next);
    }
    return offsets;
}

inline TraceIndexing trace_indexing(const SubsystemLayout& layout,
                                    const std::vector<Slot>& keep) {
    if (keep.empty()) throw EmptyKeepSetError("partial_trace: empty keep set");
    TraceIndexing ti;
    for (std::size_t pos = 0; pos < layout.labels.size(); ++pos) {
        bool kept = false;
        for (Slot s : keep)
            if (layout.labels[pos] == s) kept = true;
        if (kept) ti.keep_pos.push_back(static_cast<int>(pos));
    }
    // every requested slot must exist
    for (Slot s : keep) layout.slot_position(s);
    std::vector<int> trace_pos;
    for (std::size_t pos = 0; pos < layout.labels.size(); ++pos) {
        bool kept = false;
        for (int kp : ti.keep_pos)
            if (kp == static_cast<int>(pos)) kept = true;
        if (!kept) trace_pos.push_back(static_cast<int>(pos));
    }
    ti.keep_offsets = enumerate_offsets(layout, ti.keep_pos);
    ti.trace_offsets = enumerate_offsets(layout, trace_pos);
    for (int pos : ti.keep_pos) {
        ti.kept_layout.dims.push_back(layout.dims[pos]);
        ti.kept_layout.labels.push_back(layout.labels[pos]);
    }
    return ti;
}

}  // namespace detail

/// Reduced state of a pure state over the kept slots (layout order).
inline DensityMatrix partial_trace(const JointPureState& psi, const std::vector<Slot>& keep) {
    const auto ti = detail::trace_indexing(psi.layout, keep);
    const int K = static_cast<int>(ti.keep_offsets.size());
    DensityMatrix rho{ti.kept_layout, ComplexMatrix(K)};
    cvec col(K);
    for (int r : ti.trace_offsets) {
        for (int k = 0; k < K; ++k) col[k] = psi.amp[ti.keep_offsets[k] + r];
        for (int k = 0; k < K; ++k) {
            const cplx v = col[k];
            if (v == cplx{0.0, 0.0}) continue;
            for (int k2 = 0; k2 < K; ++k2) rho.mat(k, k2) += v * std::conj(col[k2]);
        }
    }
    return rho;
}

/// Reduced state of a density matrix over the kept slots.
inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<Slot>& keep) {
    const auto ti = detail::trace_indexing(rho.layout, keep);
    const int K = static_cast<int>(ti.keep_offsets.size());
    DensityMatrix out{ti.kept_layout, ComplexMatrix(K)};
    for (int k = 0; k < K; ++k)
        for (int k2 = 0; k2 < K; ++k2) {
            cplx acc = 0.0;
            for (int r : ti.trace_offsets)
                acc += rho.mat(ti.keep_offsets[k] + r, ti.keep_offsets[k2] + r);
            out.mat(k, k2) = acc;
        }
    return out;
}

/// Transpose of one tensor factor; an involution, Hermitian on Hermitian input.
inline ComplexMatrix partial_transpose(const DensityMatrix& rho, Slot slot) {
    const int pos = rho.layout.slot_position(slot);
    const int ds = rho.layout.dims[pos];
    const int st = rho.layout.stride(pos);
    const int D = rho.layout.flat_dim();
    ComplexMatrix out(D);
    for (int i = 0; i < D; ++i) {
        const int is = (i / st) % ds;
        for (int j = 0; j < D; ++j) {
            const int js = (j / st) % ds;
            out(i + (js - is) * st, j + (is - js) * st) = rho.mat(i, j);
        }
    }
    return out;
}

}  // namespace sideband
