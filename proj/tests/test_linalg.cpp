#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "sideband/hilbert.hpp"
#include "sideband/linalg.hpp"
#include "sideband/rk4.hpp"
#include "sideband/verify.hpp"
#include "support.hpp"

using namespace sideband;

TEST_CASE("hermitian_eigen on identity and pauli-x", "[linalg]") {
    auto id = hermitian_eigen(ComplexMatrix::identity(2));
    REQUIRE(id.eigenvalues[0] == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(id.eigenvalues[1] == Catch::Approx(1.0).margin(1e-14));

    ComplexMatrix sx(2);
    sx(0, 1) = 1.0;
    sx(1, 0) = 1.0;
    auto ex = hermitian_eigen(sx);
    REQUIRE(ex.eigenvalues[0] == Catch::Approx(-1.0).margin(1e-13));
    REQUIRE(ex.eigenvalues[1] == Catch::Approx(1.0).margin(1e-13));
}

TEST_CASE("hermitian_eigen matches characteristic-polynomial roots", "[linalg]") {
    std::mt19937_64 rng(20240811);
    const ComplexMatrix m = random_hermitian(rng, 8);
    const auto eig = hermitian_eigen(m);
    const auto roots = oracle::poly_real_roots(oracle::char_poly(m));
    REQUIRE(roots.size() == 8);
    for (int i = 0; i < 8; ++i)
        REQUIRE(eig.eigenvalues[i] == Catch::Approx(roots[i]).margin(1e-8));
}

TEST_CASE("hermitian_eigen reconstruction and unitarity over random matrices", "[linalg]") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> dims(2, 16);
    for (int k = 0; k < 100; ++k) {
        const ComplexMatrix m = random_hermitian(rng, dims(rng));
        const auto e = hermitian_eigen(m);
        ComplexMatrix lam(m.dim);
        for (int i = 0; i < m.dim; ++i) lam(i, i) = e.eigenvalues[i];
        const ComplexMatrix rec = e.eigenvectors * lam * adjoint(e.eigenvectors);
        REQUIRE(frobenius_norm(rec - m) <= 1e-10 * frobenius_norm(m));
        const ComplexMatrix gram = adjoint(e.eigenvectors) * e.eigenvectors;
        REQUIRE(frobenius_norm(gram - ComplexMatrix::identity(m.dim)) <= 1e-10);
        for (int i = 1; i < m.dim; ++i)
            REQUIRE(e.eigenvalues[i - 1] <= e.eigenvalues[i]);
    }
}

TEST_CASE("hermitian_eigen rejects non-Hermitian input", "[linalg]") {
    ComplexMatrix m(2);
    m(0, 1) = 1.0;
    m(1, 0) = 0.5;
    REQUIRE_THROWS_AS(hermitian_eigen(m), NotHermitianError);
}

TEST_CASE("trace norm basics", "[linalg]") {
    ComplexMatrix sx(2);
    sx(0, 1) = 1.0;
    sx(1, 0) = 1.0;
    REQUIRE(trace_norm_hermitian(sx) == Catch::Approx(2.0).margin(1e-12));

    // any density matrix has trace norm 1
    std::mt19937_64 rng(3);
    ComplexMatrix a = random_hermitian(rng, 4);
    ComplexMatrix rho = a * a;  // PSD
    const double tr = trace(rho).real();
    rho = cplx{1.0 / tr, 0.0} * rho;
    REQUIRE(trace_norm_hermitian(rho) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("trace norm of the partially transposed Bell projector is 2", "[linalg]") {
    DensityMatrix bell{SubsystemLayout{{2, 2}, {Slot::Tls1, Slot::Tls2}}, ComplexMatrix(4)};
    // |Psi+> = (|01> + |10>)/sqrt(2)
    bell.mat(1, 1) = 0.5;
    bell.mat(2, 2) = 0.5;
    bell.mat(1, 2) = 0.5;
    bell.mat(2, 1) = 0.5;
    const ComplexMatrix pt = partial_transpose(bell, Slot::Tls2);
    REQUIRE(trace_norm_hermitian(pt) == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("trace norm is invariant under unitary conjugation", "[linalg]") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 10; ++k) {
        const ComplexMatrix m = random_hermitian(rng, 6);
        const ComplexMatrix u = random_unitary(rng, 6);
        const ComplexMatrix rot = u * m * adjoint(u);
        REQUIRE(trace_norm_hermitian(rot) ==
                Catch::Approx(trace_norm_hermitian(m)).margin(1e-9));
    }
}

TEST_CASE("matrix_sqrt_psd basics", "[linalg]") {
    const ComplexMatrix s1 = matrix_sqrt_psd(ComplexMatrix::identity(3));
    REQUIRE(frobenius_norm(s1 - ComplexMatrix::identity(3)) < 1e-12);

    ComplexMatrix d(2);
    d(0, 0) = 4.0;
    d(1, 1) = 9.0;
    const ComplexMatrix s2 = matrix_sqrt_psd(d);
    REQUIRE(s2(0, 0).real() == Catch::Approx(2.0).margin(1e-12));
    REQUIRE(s2(1, 1).real() == Catch::Approx(3.0).margin(1e-12));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ComplexMatrix a(4);
    for (auto& z : a.a) z = cplx{u(rng), u(rng)};
    const ComplexMatrix m = adjoint(a) * a;
    const ComplexMatrix s = matrix_sqrt_psd(m);
    REQUIRE(frobenius_norm(s * s - m) <= 1e-9 * std::max(1.0, frobenius_norm(m)));
    REQUIRE(hermiticity_defect(s) < 1e-10);
}

TEST_CASE("matrix_sqrt_psd rejects indefinite matrices", "[linalg]") {
    ComplexMatrix d(2);
    d(0, 0) = 1.0;
    d(1, 1) = -1.0;
    REQUIRE_THROWS_AS(matrix_sqrt_psd(d), NotPsdError);
}

TEST_CASE("rk4 scalar phase rotation", "[rk4]") {
    const double omega = 1.7, h = 0.01;
    auto deriv = [&](double, const cvec& y) {
        return cvec{cplx{0.0, -omega} * y[0]};
    };
    const cvec out = rk4_step(deriv, cvec{1.0}, 0.0, h);
    const cplx expect = std::exp(cplx{0.0, -omega * h});
    REQUIRE(std::abs(out[0] - expect) < std::pow(omega * h, 5.0));
}

TEST_CASE("rk4 leaves the state alone for zero derivative", "[rk4]") {
    auto deriv = [](double, const cvec& y) { return cvec(y.size(), cplx{0.0, 0.0}); };
    const cvec out = rk4_step(deriv, cvec{cplx{0.3, 0.4}, cplx{0.5, 0.0}}, 0.0, 0.25);
    REQUIRE(out[0] == cplx{0.3, 0.4});
    REQUIRE(out[1] == cplx{0.5, 0.0});
}

TEST_CASE("rk4 reproduces the Rabi population swap", "[rk4]") {
    const double g = 0.8;
    auto deriv = [&](double, const cvec& y) {
        return cvec{cplx{0.0, -g} * y[1], cplx{0.0, -g} * y[0]};
    };
    cvec y{1.0, 0.0};
    const double tmax = std::numbers::pi / (2.0 * g);
    const int steps = 100;  // h = pi/(200 g)
    const double h = tmax / steps;
    double max_norm_drift = 0.0;
    for (int k = 0; k < steps; ++k) {
        y = rk4_step(deriv, y, k * h, h);
        max_norm_drift = std::max(max_norm_drift, std::abs(norm2(y) - 1.0));
    }
    // closed form: y = (cos(gt), -i sin(gt))
    REQUIRE(std::norm(y[0]) == Catch::Approx(0.0).margin(1e-8));
    REQUIRE(std::norm(y[1]) == Catch::Approx(1.0).margin(1e-8));
    REQUIRE(std::abs(y[1] - cplx{0.0, -1.0}) < 1e-8);
    REQUIRE(max_norm_drift / steps <= 1e-10);  // per-step drift on a Hermitian generator
}
