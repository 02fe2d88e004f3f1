#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sqpulse/model.hpp"

#include <numbers>
#include <random>

using namespace sqpulse;

namespace {

constexpr double kPi = std::numbers::pi;
std::mt19937 rng(777);
std::uniform_real_distribution<double> uni01(0.0, 1.0);

}  // namespace

TEST_CASE("PulseParams derives lambda, g*tau and |alpha|") {
    PulseParams p;
    p.r = 1.0;
    p.kappa_tau = 1e-4;
    p.gamma_tau = 0.1;
    p.validate();
    CHECK(p.lambda() == doctest::Approx(std::cosh(1.0) * 1e-2).epsilon(1e-14));
    CHECK(p.g_tau() == doctest::Approx(1e-2).epsilon(1e-14));
    CHECK(p.alpha_magnitude() == doctest::Approx(kPi / 2.0 / 1e-2).epsilon(1e-14));
    CHECK(p.kappa_over_gamma() == doctest::Approx(1e-3).epsilon(1e-14));
}

TEST_CASE("PulseParams rejects the untrusted perturbative regime") {
    PulseParams p;
    p.r = 3.5;  // cosh ~ 16.6 -> lambda ~ 0.17 at kappa_tau = 1e-4
    p.kappa_tau = 1e-4;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.allow_unsafe_lambda = true;
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("PulseParams rejects non-Markovian kappa_tau and bad cutoffs") {
    PulseParams p;
    p.kappa_tau = 1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.kappa_tau = 1e-4;
    p.n_max = 1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.n_max = 5;
    p.r = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("params_from_ratios composes kappa_tau and requires gamma_tau > 0") {
    const PulseParams p = params_from_ratios(0.5, 0.0, 0.0, 1e-3, 0.1);
    CHECK(p.kappa_tau == doctest::Approx(1e-4).epsilon(1e-14));
    CHECK_THROWS_AS(params_from_ratios(0.5, 0.0, 0.0, 1e-3, 0.0), std::invalid_argument);
}

TEST_CASE("build_W reduces to the Jaynes-Cummings form at r = 0") {
    PulseParams p;
    p.r = 0.0;
    p.kappa_tau = 1e-4;
    const ComplexMatrix w = build_W(p);
    const ComplexMatrix a = lowering_operator(p.fock_dim());
    const ComplexMatrix expected =
        kron(sigma_plus(), a) - kron(sigma_minus(), ComplexMatrix(a.adjoint()));
    CHECK(max_abs(w - expected) == 0.0);
}

TEST_CASE("build_W is unchanged under phi -> phi + pi") {
    PulseParams p;
    p.r = 0.8;
    p.phi = 0.37;
    p.kappa_tau = 1e-4;
    const ComplexMatrix w = build_W(p);
    p.phi += kPi;
    const ComplexMatrix w_shifted = build_W(p);
    CHECK(max_abs(w - w_shifted) < 1e-15);
}

TEST_CASE("build_W is anti-Hermitian for random squeezing") {
    for (int trial = 0; trial < 10; ++trial) {
        PulseParams p;
        p.r = 2.0 * uni01(rng);
        p.phi = 2.0 * kPi * uni01(rng);
        p.kappa_tau = 1e-4;
        const ComplexMatrix w = build_W(p);
        CHECK(max_abs(ComplexMatrix(w.adjoint() + w)) < 1e-14);
    }
}

TEST_CASE("build_H_S with kappa = 0 is the bare classical drive") {
    PulseParams p;
    p.kappa_tau = 0.0;
    p.theta = 0.0;
    const ComplexMatrix h = build_H_S(p);
    const ComplexMatrix drive =
        kI * (kPi / 2.0) * (kron(sigma_plus(), ComplexMatrix::Identity(6, 6)) -
                            kron(sigma_minus(), ComplexMatrix::Identity(6, 6)));
    CHECK(max_abs(h - drive) == 0.0);
}

TEST_CASE("build_H_S at r = 0, theta = 0 is drive plus sqrt(kappa_tau) ladder coupling") {
    PulseParams p;
    p.r = 0.0;
    p.kappa_tau = 1e-4;
    const ComplexMatrix h = build_H_S(p);
    const ComplexMatrix a = lowering_operator(p.fock_dim());
    const ComplexMatrix identity_field = ComplexMatrix::Identity(p.fock_dim(), p.fock_dim());
    const ComplexMatrix expected =
        kI * 1e-2 *
            (kron(sigma_plus(), a) - kron(sigma_minus(), ComplexMatrix(a.adjoint()))) +
        kI * (kPi / 2.0) * (kron(sigma_plus(), identity_field) -
                            kron(sigma_minus(), identity_field));
    CHECK(max_abs(h - expected) < 1e-15);
}

TEST_CASE("build_H_S is Hermitian for random parameters") {
    for (int trial = 0; trial < 10; ++trial) {
        PulseParams p;
        p.r = 2.0 * uni01(rng);
        p.phi = 2.0 * kPi * uni01(rng);
        p.theta = 2.0 * kPi * uni01(rng);
        p.kappa_tau = 1e-4 * uni01(rng);
        const ComplexMatrix h = build_H_S(p);
        CHECK(max_abs(ComplexMatrix(h - h.adjoint())) < 1e-12);
    }
}

TEST_CASE("classical_rotation endpoints and pi-pulse images") {
    CHECK(max_abs(ComplexMatrix(classical_rotation(0.0, 0.0, kPi) -
                                Eigen::Matrix2cd::Identity())) == 0.0);
    const Eigen::Matrix2cd full = classical_rotation(1.0, 0.0, kPi);
    Eigen::Vector2cd g, e;
    g << 1.0, 0.0;
    e << 0.0, 1.0;
    CHECK((full * g - e).norm() < 1e-15);
    CHECK((full * e + g).norm() < 1e-15);
    // half rotation splits the amplitudes as cos/sin
    const Eigen::Matrix2cd half = classical_rotation(0.5, 0.0, kPi);
    CHECK(std::abs((half * g)(0) - std::cos(kPi / 4.0)) < 1e-15);
    CHECK(std::abs((half * g)(1) - std::sin(kPi / 4.0)) < 1e-15);
}

TEST_CASE("classical_rotation is a unitary one-parameter group") {
    for (int trial = 0; trial < 10; ++trial) {
        const double theta = 2.0 * kPi * uni01(rng);
        const double angle = kPi * (0.5 + uni01(rng));
        const double xi1 = uni01(rng);
        const double xi2 = uni01(rng);
        const Eigen::Matrix2cd u1 = classical_rotation(xi1, theta, angle);
        const Eigen::Matrix2cd u2 = classical_rotation(xi2, theta, angle);
        const Eigen::Matrix2cd u12 = classical_rotation(xi1 + xi2, theta, angle);
        CHECK(max_abs(ComplexMatrix(u1 * u2 - u12)) < 1e-12);
        CHECK(max_abs(ComplexMatrix(u1.adjoint() * u1 - Eigen::Matrix2cd::Identity())) < 1e-12);
    }
}

TEST_CASE("target_state maps the paper-style examples") {
    PulseParams p;  // theta = 0, pi pulse
    Eigen::Vector2cd eta = target_state(QubitSpec::ground(), p);
    CHECK(std::abs(eta(1) - 1.0) < 1e-15);

    // (i|g> + |e>)/sqrt(2) -> (i|e> - |g>)/sqrt(2)
    eta = target_state(QubitSpec::equatorial(kPi / 2.0), p);
    CHECK(std::abs(eta(0) - complexd(-1.0, 0.0) / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(eta(1) - complexd(0.0, 1.0) / std::sqrt(2.0)) < 1e-15);

    // (|g> + |e>)/sqrt(2) -> (|e> - |g>)/sqrt(2)
    eta = target_state(QubitSpec::equatorial(0.0), p);
    CHECK(std::abs(eta(0) + 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(eta(1) - 1.0 / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("QubitSpec round-trips through parse and exposes Bloch vectors") {
    CHECK(QubitSpec::parse("g").bloch_vector().isApprox(Eigen::Vector3d(0, 0, -1)));
    CHECK(QubitSpec::parse("e").bloch_vector().isApprox(Eigen::Vector3d(0, 0, 1)));
    CHECK(QubitSpec::parse("eq:0").bloch_vector().isApprox(Eigen::Vector3d(1, 0, 0)));
    CHECK(QubitSpec::parse("eq:pi/2").bloch_vector().isApprox(Eigen::Vector3d(0, 1, 0), 1e-12));
    const QubitSpec tilted = QubitSpec::parse("bloch:pi/3:pi/4");
    CHECK(tilted.bloch_vector().norm() == doctest::Approx(1.0));
    CHECK(tilted.bloch_vector()(2) == doctest::Approx(std::cos(kPi / 3.0)));
    CHECK_THROWS_AS(QubitSpec::parse("nope"), std::invalid_argument);
}

TEST_CASE("parse_angle understands pi forms") {
    CHECK(parse_angle("pi") == doctest::Approx(kPi));
    CHECK(parse_angle("pi/2") == doctest::Approx(kPi / 2.0));
    CHECK(parse_angle("-pi/4") == doctest::Approx(-kPi / 4.0));
    CHECK(parse_angle("3pi/2") == doctest::Approx(1.5 * kPi));
    CHECK(parse_angle("0.5pi") == doctest::Approx(0.5 * kPi));
    CHECK(parse_angle("1.25") == doctest::Approx(1.25));
    CHECK_THROWS_AS(parse_angle("two"), std::invalid_argument);
}

TEST_CASE("axial_states covers the six Bloch poles") {
    const auto states = axial_states();
    const Eigen::Vector3d expected[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                                         {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    for (int i = 0; i < 6; ++i) {
        CHECK(states[i].bloch_vector().isApprox(expected[i], 1e-12));
    }
}
