#include <doctest.h>

#include "polariton/core.hpp"
#include "test_support.hpp"

#include <vector>

using namespace polariton;
using polariton::testing::max_abs;

TEST_CASE("kelvin_to_hartree converts with CODATA k_B") {
    CHECK(kelvin_to_hartree(0.0) == 0.0);
    CHECK(kelvin_to_hartree(300.0) == doctest::Approx(9.50043e-4).epsilon(1e-6));
    CHECK(kelvin_to_hartree(315775.02) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(kelvin_to_hartree(-1.0), InvalidInput);
}

TEST_CASE("temperature conversion round-trips to machine precision") {
    for (double t : {1e-3, 0.5, 10.0, 300.0, 1e5}) {
        CHECK(hartree_to_kelvin(kelvin_to_hartree(t)) == doctest::Approx(t).epsilon(1e-15));
    }
}

TEST_CASE("mev_to_hartree uses the Hartree energy in eV") {
    CHECK(mev_to_hartree(27211.386245988) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mev_to_hartree(5.4) == doctest::Approx(1.98446e-4).epsilon(1e-5));
}

TEST_CASE("HermitianOperator rejects non-hermitian and non-finite input") {
    ComplexMatrix m(2, 2);
    m << 1.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 2.0;
    CHECK_THROWS_AS(HermitianOperator{m}, InvalidInput);
    ComplexMatrix nan = ComplexMatrix::Identity(2, 2);
    nan(0, 0) = std::nan("");
    CHECK_THROWS_AS(HermitianOperator{nan}, InvalidInput);
    ComplexMatrix rect = ComplexMatrix::Zero(2, 3);
    CHECK_THROWS_AS(HermitianOperator{rect}, InvalidInput);
}

TEST_CASE("eigh on small fixed matrices") {
    SUBCASE("1x1") {
        RealMatrix h(1, 1);
        h << 2.0;
        const auto s = eigh(HermitianOperator(h));
        CHECK(s.eigenvalues[0] == doctest::Approx(2.0));
    }
    SUBCASE("diagonal is sorted with permutation eigenvectors") {
        RealMatrix h = RealVector::Map(std::vector<double>{3.0, 1.0, 2.0}.data(), 3).asDiagonal();
        const auto s = eigh(HermitianOperator(h));
        CHECK(s.eigenvalues[0] == doctest::Approx(1.0));
        CHECK(s.eigenvalues[1] == doctest::Approx(2.0));
        CHECK(s.eigenvalues[2] == doctest::Approx(3.0));
        CHECK(std::abs(s.eigenvectors(1, 0)) == doctest::Approx(1.0));
        CHECK(std::abs(s.eigenvectors(2, 1)) == doctest::Approx(1.0));
        CHECK(std::abs(s.eigenvectors(0, 2)) == doctest::Approx(1.0));
    }
    SUBCASE("Pauli x") {
        RealMatrix h(2, 2);
        h << 0.0, 1.0, 1.0, 0.0;
        const auto s = eigh(HermitianOperator(h));
        CHECK(s.eigenvalues[0] == doctest::Approx(-1.0));
        CHECK(s.eigenvalues[1] == doctest::Approx(1.0));
    }
}

TEST_CASE("eigh reconstructs random hermitian matrices") {
    std::mt19937_64 rng(7);
    for (int n : {3, 8, 20}) {
        const ComplexMatrix h = polariton::testing::random_hermitian(n, rng);
        const auto s = eigh(HermitianOperator(h));
        const ComplexMatrix& v = s.eigenvectors;
        for (Eigen::Index i = 1; i < s.size(); ++i) CHECK(s.eigenvalues[i] >= s.eigenvalues[i - 1]);
        CHECK(max_abs(v.adjoint() * v - ComplexMatrix::Identity(n, n)) <= 1e-10);
        CHECK(max_abs(h * v - v * s.eigenvalues.asDiagonal()) <= 1e-9 * max_abs(h));
        CHECK(max_abs(v * s.eigenvalues.asDiagonal() * v.adjoint() - h) <= 1e-9 * max_abs(h));
        const auto again = eigh(HermitianOperator(h));
        CHECK((again.eigenvalues - s.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("expectation examples") {
    const RealMatrix one = RealMatrix::Identity(1, 1);
    const std::vector<double> w1{1.0};
    CHECK(expectation(w1, ComplexMatrix::Identity(1, 1), HermitianOperator(one)) == doctest::Approx(1.0));

    RealMatrix o(2, 2);
    o << 0.0, 0.0, 0.0, 2.0;
    const std::vector<double> half{0.5, 0.5};
    CHECK(expectation(half, ComplexMatrix::Identity(2, 2), HermitianOperator(o)) == doctest::Approx(1.0));
}

TEST_CASE("expectation matches the brute-force trace of rho O") {
    std::mt19937_64 rng(11);
    const ComplexMatrix h = polariton::testing::random_hermitian(4, rng);
    const ComplexMatrix o = polariton::testing::random_hermitian(4, rng);
    const auto s = eigh(HermitianOperator(h));
    std::vector<double> w(4);
    double z = 0.0;
    for (int i = 0; i < 4; ++i) z += w[i] = std::exp(-s.eigenvalues[i]);
    for (auto& x : w) x /= z;

    // Oracle: rho = exp(-H)/Z built independently from the matrix exponential series.
    ComplexMatrix expm = ComplexMatrix::Identity(4, 4);
    ComplexMatrix term = ComplexMatrix::Identity(4, 4);
    for (int k = 1; k < 60; ++k) {
        term = (term * (-h) / static_cast<double>(k)).eval();
        expm += term;
    }
    const ComplexMatrix rho = expm / expm.trace();
    const double oracle = (rho * o).trace().real();
    CHECK(expectation(w, s.eigenvectors, HermitianOperator(o)) == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(max_abs(density_from_states(w, s.eigenvectors) - rho) <= 1e-10);
}

TEST_CASE("expectation is normalized and linear") {
    std::mt19937_64 rng(3);
    const auto v = polariton::testing::random_unitary(5, rng);
    const std::vector<double> w{0.1, 0.2, 0.3, 0.25, 0.15};
    CHECK(expectation(w, v, HermitianOperator::identity(5)) == doctest::Approx(1.0).epsilon(1e-12));
    const HermitianOperator a(polariton::testing::random_hermitian(5, rng));
    const HermitianOperator b(polariton::testing::random_hermitian(5, rng));
    const double lhs = expectation(w, v, a * 2.5 + b * -0.7);
    const double rhs = 2.5 * expectation(w, v, a) - 0.7 * expectation(w, v, b);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
}

TEST_CASE("expectation rejects bad weights and dimensions") {
    const ComplexMatrix v = ComplexMatrix::Identity(2, 2);
    const auto id = HermitianOperator::identity(2);
    const std::vector<double> unnormalized{0.5, 0.6};
    const std::vector<double> negative{1.5, -0.5};
    const std::vector<double> short_w{1.0};
    CHECK_THROWS_AS(expectation(unnormalized, v, id), InvalidInput);
    CHECK_THROWS_AS(expectation(negative, v, id), InvalidInput);
    CHECK_THROWS_AS(expectation(short_w, v, id), InvalidInput);
    const std::vector<double> ok{0.5, 0.5};
    CHECK_THROWS_AS(expectation(ok, v, HermitianOperator::identity(3)), InvalidInput);
}

TEST_CASE("kron matches the textbook block layout") {
    ComplexMatrix a(2, 2), b(2, 2);
    a << 1.0, 2.0, 3.0, 4.0;
    b << 0.0, 1.0, 1.0, 0.0;
    const ComplexMatrix k = kron(a, b);
    CHECK(k.rows() == 4);
    CHECK(k(0, 1) == Complex(1.0));
    CHECK(k(1, 2) == Complex(2.0));
    CHECK(k(2, 3) == Complex(4.0));
    CHECK(k(3, 0) == Complex(3.0));
}
