#include <doctest.h>

#include "polariton/observables.hpp"
#include "test_support.hpp"

using namespace polariton;
using polariton::testing::max_abs;
using polariton::testing::rel_err;
using polariton::testing::spd_power;

namespace {

constexpr double kOmega = 1.98451e-4;
constexpr double kProtonMass = 1836.15267;

struct GaussianMoments {
    double x2, q2, xq, p2;
};

// Ground-state second moments of H = p^2/2 + y^T K y / 2 in mass-weighted
// coordinates y = (sqrt(m) x, q): <y y^T> = K^{-1/2}/2, <p p^T> = K^{1/2}/2.
GaussianMoments normal_mode_ground(double mass, double charge, double omega_m, double omega, double lambda) {
    RealMatrix k(2, 2);
    k << omega_m * omega_m + lambda * lambda * charge * charge / mass, -omega * lambda * charge / std::sqrt(mass),
        -omega * lambda * charge / std::sqrt(mass), omega * omega;
    const RealMatrix cov = 0.5 * spd_power(k, -0.5);
    const RealMatrix mom = 0.5 * spd_power(k, 0.5);
    return {cov(0, 0) / mass, cov(1, 1), cov(0, 1) / std::sqrt(mass), mom(1, 1)};
}

}  // namespace

TEST_CASE("field operators vanish at zero coupling") {
    const auto model = harmonic_model(1.0, 1.0, 1.0, 4);
    const auto ops = field_operators(model, {1.0, 0.0, 4});
    CHECK(ops.vector_potential.max_abs() == 0.0);
    CHECK(ops.displacement.max_abs() == 0.0);
    CHECK(ops.electric.max_abs() == 0.0);
    CHECK(ops.dipole.max_abs() > 0.0);
}

TEST_CASE("vacuum displacement variance") {
    const auto model = two_level_model(kOmega, 1.0);
    const CavityMode mode{kOmega, 0.01, 4};
    const auto ops = field_operators(model, mode);
    CHECK(ops.displacement.squared().matrix()(0, 0).real() == doctest::Approx(9.9226e-9).epsilon(1e-4));
    CHECK(ops.displacement.squared().matrix()(0, 0).real() == doctest::Approx(0.5 * 1e-4 * kOmega).epsilon(1e-14));
}

TEST_CASE("electric field reduces to the displacement without a dipole") {
    const auto model = two_level_model(1.0, 0.0);
    const auto ops = field_operators(model, {1.0, 0.3, 4});
    CHECK(max_abs(ops.electric.matrix() - ops.displacement.matrix()) == 0.0);
}

TEST_CASE("decoupled fluctuations match the bare closed forms") {
    const auto model = rotor_model(1.0 / (2.0 * kOmega), 0.5, 2);
    const CavityMode mode{kOmega, 0.0, 40};
    for (double t : {1.0, 10.0, 50.0}) {
        const auto ens = build_ensemble(model, mode, t, 5);
        const auto r = fluctuations(ens, model, 0.01);
        CHECK(rel_err(r.dD2, r.bare_D) <= 1e-8);
        CHECK(rel_err(r.dA2, r.bare_A) <= 1e-8);
        CHECK(std::abs(r.cross) <= 1e-20);
        const auto plain = fluctuations(ens, model);
        CHECK(plain.cross == 0.0);
        CHECK(plain.dD2 == 0.0);
    }
}

TEST_CASE("resonant harmonic pair at T = 0 matches the Gaussian normal-mode moments") {
    const double lambda = 0.1;
    const auto model = harmonic_model(1.0, 1.0, 1.0, 30);
    const CavityMode mode{1.0, lambda, 30};
    const auto ens = build_ensemble(model, mode, 0.0, 1);
    const auto r = fluctuations(ens, model);
    const auto g = normal_mode_ground(1.0, 1.0, 1.0, 1.0, lambda);

    const double d2 = g.x2;
    const double dD2 = lambda * lambda * g.q2;
    const double dDd = lambda * g.xq;
    const double dE2 = dD2 - 2.0 * lambda * lambda * dDd + std::pow(lambda, 4) * d2;
    CHECK(rel_err(r.dd2, d2) <= 1e-8);
    CHECK(rel_err(r.dD2, dD2) <= 1e-8);
    CHECK(rel_err(r.cross, 2.0 * lambda * lambda * dDd) <= 1e-8);
    CHECK(rel_err(r.dE2, dE2) <= 1e-8);
    CHECK(rel_err(r.dA2, lambda * lambda * g.p2) <= 1e-8);
}

TEST_CASE("fluctuation decomposition identity and non-negative variances") {
    const auto harmonic = harmonic_model(kProtonMass, kOmega, 1.0, 10, ComParameters::hd_plus());
    const auto rotor = rotor_model(1.0 / (2.0 * kOmega), 1.0, 3, ComParameters::hd_plus());
    for (const auto* model : {&harmonic, &rotor}) {
        for (double lambda : {0.0, 0.005, 0.01}) {
            for (double t : {0.0, 5.0, 50.0, 300.0}) {
                const auto ens = build_ensemble(*model, {kOmega, lambda, 4}, t, 5);
                const auto r = fluctuations(ens, *model);
                CHECK(r.decomposition_defect() <= 1e-10);
                for (double v : {r.dE2, r.dD2, r.dd2, r.dA2}) CHECK(v >= -1e-12);
            }
        }
    }
}

TEST_CASE("vector potential fluctuations scale as lambda squared") {
    const auto model = rotor_model(1.0 / (2.0 * kOmega), 0.5, 3);
    for (double lambda : {0.0005, 0.001, 0.002}) {
        const auto r1 = fluctuations(build_ensemble(model, {kOmega, lambda, 4}, 10.0, 5), model);
        const auto r2 = fluctuations(build_ensemble(model, {kOmega, 2.0 * lambda, 4}, 10.0, 5), model);
        CHECK(r2.dA2 / r1.dA2 == doctest::Approx(4.0).epsilon(0.05));
    }
}

TEST_CASE("coupled vacuum electric fluctuations are enhanced and grow with lambda") {
    const auto model = harmonic_model(1.0, 1.0, 1.0, 20);
    double previous = 1.0;
    for (double lambda : {0.05, 0.1, 0.2, 0.3}) {
        const CavityMode mode{1.0, lambda, 20};
        const auto r = fluctuations(build_ensemble(model, mode, 0.0, 1), model);
        const double ratio = r.dE2 / bare_D_fluct(mode, 0.0);
        CHECK(ratio > previous);
        previous = ratio;
    }
}

TEST_CASE("parity models have vanishing first moments") {
    const auto harmonic = harmonic_model(kProtonMass, kOmega, 1.0, 8, ComParameters::hd_plus());
    const auto rotor = rotor_model(1.0 / (2.0 * kOmega), 1.0, 3, ComParameters::hd_plus());
    for (const auto* model : {&harmonic, &rotor}) {
        for (double lambda : {0.0, 0.005, 0.01}) {
            for (double t : {0.0, 100.0}) {
                const auto ens = build_ensemble(*model, {kOmega, lambda, 4}, t, 9);
                const auto check = parity_check(ens, *model);
                REQUIRE(check.has_value());
                CHECK(*check <= 1e-10);
            }
        }
    }
}

TEST_CASE("parity check is not applicable without parity labels") {
    const auto morse = morse_model(0.1, 1.0, kProtonMass, 1.0, 4);
    const auto ens = build_ensemble(morse, {kOmega, 0.005, 3}, 10.0, 5);
    CHECK_FALSE(parity_check(ens, morse).has_value());
    // Morse means are not constrained, but the report still carries them.
    CHECK(std::abs(fluctuations(ens, morse).mean_d) > 0.0);
}
