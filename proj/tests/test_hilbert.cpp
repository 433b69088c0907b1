#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "sideband/hilbert.hpp"
#include "sideband/verify.hpp"

using namespace sideband;

namespace {

SidebandWindow small_window() { return SidebandWindow{-2, 2, 0}; }

SubsystemLayout small_layout() { return SubsystemLayout::four_partite(small_window()); }

JointPureState random_state(std::mt19937_64& rng, const SubsystemLayout& layout) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    JointPureState psi{layout, cvec(layout.flat_dim())};
    for (auto& z : psi.amp) z = cplx{u(rng), u(rng)};
    const double n = norm2(psi.amp);
    for (auto& z : psi.amp) z /= n;
    return psi;
}

}  // namespace

TEST_CASE("flat_index follows the stated mixed radix, last label fastest", "[hilbert]") {
    const SubsystemLayout layout = small_layout();  // D_e = 5
    REQUIRE(flat_index(layout, {0, 0, 0, 0}) == 0);
    REQUIRE(flat_index(layout, {0, 0, 0, 1}) == 1);
    REQUIRE(flat_index(layout, {1, 2, 1, 0}) == ((1 * 5 + 2) * 2 + 1) * 2 + 0);
    REQUIRE(flat_index(layout, {1, 2, 1, 0}) == 30);
    REQUIRE_THROWS_AS(flat_index(layout, {5, 0, 0, 0}), IndexOutOfRangeError);
    REQUIRE_THROWS_AS(flat_index(layout, {0, 0, 2, 0}), IndexOutOfRangeError);
}

TEST_CASE("flat_index and multi_index are mutually inverse (exhaustive, D_e = 5)",
          "[hilbert]") {
    const SubsystemLayout layout = small_layout();
    for (int flat = 0; flat < layout.flat_dim(); ++flat) {
        const std::vector<int> multi = multi_index(layout, flat);
        REQUIRE(flat_index(layout, multi) == flat);
    }
}

TEST_CASE("window invariants are enforced", "[hilbert]") {
    REQUIRE_THROWS_AS((SidebandWindow{0, 4, 0}.validate()), ValidationError);
    REQUIRE_THROWS_AS((SidebandWindow{-1, 2, 0}.validate()), ValidationError);
    REQUIRE_NOTHROW(small_window().validate());
}

TEST_CASE("ladder operator acts as b|n> = |n-1> with an open boundary", "[hilbert]") {
    const SidebandWindow w = small_window();
    const ComplexMatrix b = ladder_b(w);
    cvec ket(w.dim());
    ket[w.index_of(0)] = 1.0;
    const cvec lowered = b * ket;
    REQUIRE(std::abs(lowered[w.index_of(-1)] - cplx{1.0, 0.0}) < 1e-15);
    REQUIRE(norm2(lowered) == Catch::Approx(1.0));

    cvec edge(w.dim());
    edge[w.index_of(w.n_min)] = 1.0;
    REQUIRE(norm2(b * edge) == 0.0);

    // b+ b = identity away from the edges; edge column is exactly null
    const ComplexMatrix btb = adjoint(b) * b;
    for (int n = w.n_min + 1; n <= w.n_max; ++n)
        REQUIRE(std::abs(btb(w.index_of(n), w.index_of(n)) - cplx{1.0, 0.0}) < 1e-15);
    for (int i = 0; i < w.dim(); ++i) {
        REQUIRE(b(i, w.index_of(w.n_min)) == cplx{0.0, 0.0});
    }
}

TEST_CASE("sideband number operator and its commutator with b", "[hilbert]") {
    const SidebandWindow w = small_window();
    const ComplexMatrix n = sideband_number(w);
    for (int i = 0; i < w.dim(); ++i)
        REQUIRE(n(i, i).real() == Catch::Approx(w.sideband_at(i)));

    cvec ket(w.dim());
    ket[w.index_of(w.n0)] = 1.0;
    const cvec nket = n * ket;
    REQUIRE(inner(ket, nket).real() == Catch::Approx(w.n0).margin(1e-15));

    // [n, b] = -b on interior kets
    const ComplexMatrix b = ladder_b(w);
    const ComplexMatrix comm = n * b - b * n;
    for (int nn = w.n_min + 1; nn <= w.n_max; ++nn) {
        cvec e(w.dim());
        e[w.index_of(nn)] = 1.0;
        const cvec lhs = comm * e;
        const cvec rhs = (cplx{-1.0, 0.0} * b) * e;
        for (int i = 0; i < w.dim(); ++i) REQUIRE(std::abs(lhs[i] - rhs[i]) < 1e-15);
    }
}

TEST_CASE("pauli operators in basis order [g, e]", "[hilbert]") {
    const PauliOps p = pauli_ops();
    const cvec e = p.plus * cvec{1.0, 0.0};
    REQUIRE(e[0] == cplx{0.0, 0.0});
    REQUIRE(e[1] == cplx{1.0, 0.0});
    const cvec ze = p.z * cvec{0.0, 1.0};
    REQUIRE(ze[1] == cplx{1.0, 0.0});
    const ComplexMatrix comm = p.plus * p.minus - p.minus * p.plus;
    REQUIRE(frobenius_norm(comm - p.z) < 1e-15);
}

TEST_CASE("embed places operators on the right slot", "[hilbert]") {
    const SubsystemLayout layout = small_layout();
    const ComplexMatrix id = embed(ComplexMatrix::identity(2), Slot::Tls1, layout);
    REQUIRE(frobenius_norm(id - ComplexMatrix::identity(layout.flat_dim())) < 1e-15);

    const PauliOps p = pauli_ops();
    const ComplexMatrix z2 = embed(p.z, Slot::Tls2, layout);
    const int idx = flat_index(layout, {1, 1, 0, 1});
    REQUIRE(z2(idx, idx) == cplx{1.0, 0.0});
    const int idx_g = flat_index(layout, {1, 1, 0, 0});
    REQUIRE(z2(idx_g, idx_g) == cplx{-1.0, 0.0});

    const ComplexMatrix bA = embed(ladder_b(small_window()), Slot::ElectronA, layout);
    const ComplexMatrix s1 = embed(p.plus, Slot::Tls1, layout);
    REQUIRE(frobenius_norm(bA * s1 - s1 * bA) < 1e-15);

    REQUIRE_THROWS_AS(embed(ComplexMatrix::identity(3), Slot::Tls1, layout),
                      DimensionMismatchError);
}

TEST_CASE("partial trace of product and Bell states", "[hilbert]") {
    const SubsystemLayout pair{{2, 2}, {Slot::Tls1, Slot::Tls2}};
    JointPureState prod{pair, cvec(4)};
    // |psi_A> = (|g> + i|e>)/sqrt(2), |psi_B> = |e>
    prod.amp[flat_index(pair, {0, 1})] = 1.0 / std::numbers::sqrt2;
    prod.amp[flat_index(pair, {1, 1})] = cplx{0.0, 1.0 / std::numbers::sqrt2};
    const DensityMatrix rhoA = partial_trace(prod, {Slot::Tls1});
    REQUIRE(rhoA.layout.dims == std::vector<int>{2});
    REQUIRE(rhoA.mat(0, 0).real() == Catch::Approx(0.5));
    REQUIRE(rhoA.mat(1, 1).real() == Catch::Approx(0.5));
    REQUIRE(std::abs(rhoA.mat(0, 1) - cplx{0.0, -0.5}) < 1e-15);

    JointPureState bell{pair, cvec(4)};
    bell.amp[flat_index(pair, {0, 1})] = 1.0 / std::numbers::sqrt2;
    bell.amp[flat_index(pair, {1, 0})] = 1.0 / std::numbers::sqrt2;
    const DensityMatrix marg = partial_trace(bell, {Slot::Tls1});
    REQUIRE(std::abs(marg.mat(0, 0) - cplx{0.5, 0.0}) < 1e-15);
    REQUIRE(std::abs(marg.mat(1, 1) - cplx{0.5, 0.0}) < 1e-15);
    REQUIRE(std::abs(marg.mat(0, 1)) < 1e-15);

    REQUIRE_THROWS_AS(partial_trace(bell, std::vector<Slot>{}), EmptyKeepSetError);
}

TEST_CASE("partial trace preserves trace and hermiticity; Schmidt symmetry holds",
          "[hilbert]") {
    std::mt19937_64 rng(42);
    const SubsystemLayout layout = small_layout();
    for (int k = 0; k < 5; ++k) {
        const JointPureState psi = random_state(rng, layout);
        const DensityMatrix rhoAB = partial_trace(psi, {Slot::ElectronA, Slot::ElectronB});
        const DensityMatrix rho12 = partial_trace(psi, {Slot::Tls1, Slot::Tls2});
        REQUIRE(std::abs(trace(rhoAB.mat).real() - 1.0) < 1e-12);
        REQUIRE(std::abs(trace(rho12.mat).real() - 1.0) < 1e-12);
        REQUIRE(std::abs(trace(rhoAB.mat).imag()) < 1e-14);
        REQUIRE(hermiticity_defect(rhoAB.mat) < 1e-12);
        REQUIRE(hermiticity_defect(rho12.mat) < 1e-12);

        // complementary reduced states share their nonzero spectrum
        const auto eAB = hermitian_eigen(rhoAB.mat);
        const auto e12 = hermitian_eigen(rho12.mat);
        std::vector<double> top_ab(eAB.eigenvalues.end() - 4, eAB.eigenvalues.end());
        std::vector<double> top_12(e12.eigenvalues.end() - 4, e12.eigenvalues.end());
        for (int i = 0; i < 4; ++i)
            REQUIRE(top_ab[i] == Catch::Approx(top_12[i]).margin(1e-8));
        for (std::size_t i = 0; i + 4 < eAB.eigenvalues.size(); ++i)
            REQUIRE(std::abs(eAB.eigenvalues[i]) < 1e-8);
    }
}

TEST_CASE("partial trace from a density matrix matches the pure-state route", "[hilbert]") {
    std::mt19937_64 rng(43);
    const SubsystemLayout layout = small_layout();
    const JointPureState psi = random_state(rng, layout);
    DensityMatrix full{layout, ComplexMatrix(layout.flat_dim())};
    for (int i = 0; i < layout.flat_dim(); ++i)
        for (int j = 0; j < layout.flat_dim(); ++j)
            full.mat(i, j) = psi.amp[i] * std::conj(psi.amp[j]);
    const DensityMatrix a = partial_trace(psi, {Slot::ElectronB, Slot::Tls2});
    const DensityMatrix b = partial_trace(full, {Slot::ElectronB, Slot::Tls2});
    REQUIRE(frobenius_norm(a.mat - b.mat) < 1e-12);
    REQUIRE(a.layout.labels == std::vector<Slot>{Slot::ElectronB, Slot::Tls2});
}

TEST_CASE("partial transpose: product states stay PSD, Bell spectrum, involution",
          "[hilbert]") {
    const SubsystemLayout pair{{2, 2}, {Slot::ElectronA, Slot::ElectronB}};

    // rho_A x rho_B -> rho_A x rho_B^T
    std::mt19937_64 rng(1);
    const ComplexMatrix ha = random_hermitian(rng, 2), hb = random_hermitian(rng, 2);
    ComplexMatrix ra = ha * ha, rb = hb * hb;
    ra = cplx{1.0 / trace(ra).real(), 0.0} * ra;
    rb = cplx{1.0 / trace(rb).real(), 0.0} * rb;
    DensityMatrix prod{pair, kron(ra, rb)};
    const ComplexMatrix pt = partial_transpose(prod, Slot::ElectronB);
    ComplexMatrix rbT(2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) rbT(i, j) = rb(j, i);
    REQUIRE(frobenius_norm(pt - kron(ra, rbT)) < 1e-14);
    REQUIRE(hermitian_eigen(pt).eigenvalues.front() > -1e-12);  // still PSD

    DensityMatrix bell{pair, ComplexMatrix(4)};
    bell.mat(1, 1) = 0.5;
    bell.mat(2, 2) = 0.5;
    bell.mat(1, 2) = 0.5;
    bell.mat(2, 1) = 0.5;
    const auto ev = hermitian_eigen(partial_transpose(bell, Slot::ElectronB)).eigenvalues;
    REQUIRE(ev[0] == Catch::Approx(-0.5).margin(1e-12));
    REQUIRE(ev[1] == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(ev[2] == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(ev[3] == Catch::Approx(0.5).margin(1e-12));

    const DensityMatrix wrapped{pair, partial_transpose(bell, Slot::ElectronB)};
    const ComplexMatrix twice = partial_transpose(wrapped, Slot::ElectronB);
    REQUIRE(frobenius_norm(twice - bell.mat) < 1e-14);

    REQUIRE_THROWS_AS(partial_transpose(bell, Slot::Tls1), UnknownSlotError);
}
