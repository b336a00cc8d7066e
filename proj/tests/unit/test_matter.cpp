#include <doctest.h>

#include "polariton/matter.hpp"
#include "test_support.hpp"

#include <filesystem>
#include <fstream>

using namespace polariton;

namespace {

constexpr double kProtonMass = 1836.15267;

// Exact Morse level E_n = w(n+1/2) - w^2/(4D) (n+1/2)^2 with w = a sqrt(2D/m).
double morse_level(double depth, double alpha, double mass, int n) {
    const double w = alpha * std::sqrt(2.0 * depth / mass);
    const double v = n + 0.5;
    return w * v - w * w / (4.0 * depth) * v * v;
}

void check_parity_diagonal(const MatterModel& m) {
    REQUIRE(m.parity.has_value());
    for (Eigen::Index i = 0; i < m.dim(); ++i) CHECK(std::abs(m.dipole.matrix()(i, i)) <= 1e-12);
}

}  // namespace

TEST_CASE("harmonic_model ladder and dipole") {
    const auto m = harmonic_model(1.0, 1.0, 1.0, 3);
    CHECK(m.energies[0] == doctest::Approx(0.5));
    CHECK(m.energies[1] == doctest::Approx(1.5));
    CHECK(m.energies[2] == doctest::Approx(2.5));
    CHECK(m.dipole.matrix()(0, 1).real() == doctest::Approx(0.70711).epsilon(1e-5));
    CHECK(m.dipole.matrix()(0, 0) == Complex(0.0));
    CHECK(*m.parity == std::vector<int>{1, -1, 1});
    check_parity_diagonal(harmonic_model(2.0, 0.3, -1.5, 12));
}

TEST_CASE("harmonic_model position and momentum obey [x, p] = i up to the truncation edge") {
    const double mass = 3.0, w = 0.7;
    const int n = 8;
    const auto m = harmonic_model(mass, w, 1.0, n);
    const ComplexMatrix x = m.dipole.matrix();
    // p = i m [H, x] for the oscillator.
    const ComplexMatrix h = m.energies.cast<Complex>().asDiagonal();
    const ComplexMatrix p = Complex(0.0, mass) * (h * x - x * h);
    const ComplexMatrix c = x * p - p * x;
    for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < n - 1; ++j) {
            const Complex want = i == j ? Complex(0.0, 1.0) : Complex(0.0);
            CHECK(std::abs(c(i, j) - want) <= 1e-12);
        }
    CHECK(std::abs(c(n - 1, n - 1) - Complex(0.0, 1.0)) > 0.5);
}

TEST_CASE("harmonic_model rejects bad input") {
    CHECK_THROWS_AS(harmonic_model(0.0, 1.0, 1.0, 4), InvalidInput);
    CHECK_THROWS_AS(harmonic_model(1.0, -1.0, 1.0, 4), InvalidInput);
    CHECK_THROWS_AS(harmonic_model(1.0, 1.0, 1.0, 1), InvalidInput);
}

TEST_CASE("rotor_model levels and couplings") {
    const auto r = rotor_model(1.0, 1.0, 2);
    REQUIRE(r.dim() == 5);
    const std::vector<double> want{0.0, 0.5, 0.5, 2.0, 2.0};
    for (int i = 0; i < 5; ++i) CHECK(r.energies[i] == doctest::Approx(want[i]));
    check_parity_diagonal(r);
    // Basis order m = 0, -1, +1, -2, +2.
    CHECK(r.dipole.matrix()(0, 1).real() == doctest::Approx(0.5));
    CHECK(r.dipole.matrix()(0, 2).real() == doctest::Approx(0.5));
    CHECK(r.dipole.matrix()(1, 3).real() == doctest::Approx(0.5));
    CHECK(r.dipole.matrix()(1, 2) == Complex(0.0));
    CHECK_THROWS_AS(rotor_model(0.0, 1.0, 2), InvalidInput);
    CHECK_THROWS_AS(rotor_model(1.0, 1.0, 0), InvalidInput);
}

TEST_CASE("two_level_model") {
    const auto t = two_level_model(1.0, 1.0);
    const ComplexMatrix d2 = t.dipole.matrix() * t.dipole.matrix();
    CHECK(polariton::testing::max_abs(d2 - ComplexMatrix::Identity(2, 2)) <= 1e-15);
    check_parity_diagonal(t);
    CHECK_THROWS_AS(two_level_model(0.0, 1.0), InvalidInput);

    const double gap = HDplusMeta::reference_omega();
    CHECK(gap == doctest::Approx(1.98446e-4).epsilon(1e-5));
    CHECK(two_level_model(gap, 1.0).energies[1] == gap);
}

TEST_CASE("HDplusMeta total mass") {
    CHECK(HDplusMeta::total_mass() == HDplusMeta::proton_mass + HDplusMeta::deuteron_mass + 1.0);
    CHECK(ComParameters::hd_plus().total_charge == 1.0);
}

TEST_CASE("morse_model reproduces the analytic Morse ladder") {
    const double depth = 0.1, alpha = 1.0;
    const auto m = morse_model(depth, alpha, kProtonMass, 1.0, 10);
    CHECK_FALSE(m.parity.has_value());
    for (int n = 0; n < 10; ++n) {
        CHECK(m.energies[n] == doctest::Approx(morse_level(depth, alpha, kProtonMass, n)).epsilon(1e-8));
    }
    CHECK(m.energies[0] == doctest::Approx(0.0051505).epsilon(1e-4));
    CHECK(m.energies[2] - m.energies[1] < m.energies[1] - m.energies[0]);
}

TEST_CASE("morse_model with unit mass has too few bound states") {
    // w = 0.447 and w^2/(4D) = 0.5: the analytic level formula gives E_0 = 0.098607,
    // but a Morse well with sqrt(2 m D)/a < 1/2 supports no vibrational ladder.
    CHECK(morse_level(0.1, 1.0, 1.0, 0) == doctest::Approx(0.098607).epsilon(1e-5));
    CHECK_THROWS_AS(morse_model(0.1, 1.0, 1.0, 1.0, 3), InvalidInput);
}

TEST_CASE("morse_model approaches the harmonic ladder for a deep well") {
    const double w = 0.01, depth = 50.0;
    const double alpha = w * std::sqrt(kProtonMass / (2.0 * depth));
    DvrGrid grid;
    grid.left_extent = 0.05;
    grid.right_extent = 0.05;
    const auto m = morse_model(depth, alpha, kProtonMass, 1.0, 5, grid);
    for (int n = 0; n < 5; ++n) CHECK(m.energies[n] == doctest::Approx(w * (n + 0.5)).epsilon(1e-2));
}

TEST_CASE("morse_model energies are stable under grid doubling") {
    DvrGrid fine;
    fine.points = 801;
    const auto coarse = morse_model(0.1, 1.0, kProtonMass, 1.0, 10);
    const auto dense = morse_model(0.1, 1.0, kProtonMass, 1.0, 10, fine);
    for (int n = 0; n < 10; ++n) CHECK(polariton::testing::rel_err(coarse.energies[n], dense.energies[n]) <= 1e-8);
}

TEST_CASE("morse_model rejects bad input") {
    CHECK_THROWS_AS(morse_model(-0.1, 1.0, kProtonMass, 1.0), InvalidInput);
    CHECK_THROWS_AS(morse_model(0.1, 1.0, kProtonMass, 1.0, 2), InvalidInput);
    DvrGrid coarse;
    coarse.points = 20;
    CHECK_THROWS_AS(morse_model(0.1, 1.0, kProtonMass, 1.0, 15, coarse), InvalidInput);
}

TEST_CASE("model files round-trip") {
    const auto path = std::filesystem::temp_directory_path() / "polariton_roundtrip.model";
    const auto m = harmonic_model(1.3, 0.4, 1.0, 6, ComParameters::hd_plus());
    save_model(m, path);
    const auto back = load_model(path);
    std::filesystem::remove(path);
    CHECK(back.name == m.name);
    CHECK(back.energies == m.energies);
    CHECK(back.dipole.matrix() == m.dipole.matrix());
    CHECK(back.parity == m.parity);
    CHECK(back.total_mass == m.total_mass);
    CHECK(back.total_charge == m.total_charge);
}

TEST_CASE("model file validation") {
    const std::string descending = "[model]\nname = x\nmass = 1\ncharge = 0\n[energies]\n1.0\n0.5\n"
                                   "[dipole]\n0 0  1 0\n1 0  0 0\n";
    CHECK_THROWS_AS(parse_model(descending), InvalidInput);
    const std::string nonhermitian = "[model]\nname = x\nmass = 1\ncharge = 0\n[energies]\n0.0\n0.5\n"
                                     "[dipole]\n0 0  1 0\n2 0  0 0\n";
    CHECK_THROWS_AS(parse_model(nonhermitian), InvalidInput);
    const std::string complex_ok = "[model]\nname = x\nmass = 1\ncharge = 0\n[energies]\n0.0\n0.5\n"
                                   "[dipole]\n0 0  1 0.5\n1 -0.5  0 0\n";
    CHECK(parse_model(complex_ok).dipole.matrix()(0, 1) == Complex(1.0, 0.5));
    const std::string bad_parity = "[model]\nname = x\nmass = 1\ncharge = 0\n[energies]\n0.0\n0.5\n"
                                   "[dipole]\n0 0  1 0\n1 0  0 0\n[parity]\n1\n1\n";
    CHECK_THROWS_AS(parse_model(bad_parity), InvalidInput);
    CHECK_THROWS_AS(parse_model("[model]\nname = x\nbogus = 1\n"), InvalidInput);
    CHECK_THROWS_AS(load_model("/nonexistent/model.txt"), InvalidInput);
}
