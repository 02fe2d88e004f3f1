#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sqpulse/closed_forms.hpp"
#include "sqpulse/dynamics.hpp"
#include "sqpulse/entanglement.hpp"

#include <numbers>
#include <random>

using namespace sqpulse;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kKappaTau = 1e-4;
std::mt19937 rng(41);
std::uniform_real_distribution<double> uni01(0.0, 1.0);

}  // namespace

TEST_CASE("tangle_poles coherent limit and 10 dB point") {
    CHECK(tangle_poles(0.0, 0.0, kKappaTau) == doctest::Approx(kKappaTau));
    CHECK(tangle_poles(0.0, kPi / 2.0, kKappaTau) == doctest::Approx(kKappaTau));
    // r = 1.16 (10 dB), phi = 0: kappa_tau e^{-2.32}
    CHECK(tangle_poles(1.16, 0.0, kKappaTau) == doctest::Approx(9.8274e-6).epsilon(1e-4));
    CHECK(tangle_poles(1.16, kPi / 2.0, kKappaTau) ==
          doctest::Approx(kKappaTau * std::exp(2.32)).epsilon(1e-12));
}

TEST_CASE("tangle_poles approaches the interference envelope at large squeezing") {
    const double r = 8.0;
    const double c = std::cosh(r);
    for (const double phi : {0.3, 1.0, 2.2}) {
        const double envelope = 2.0 * c * c * kKappaTau * (1.0 - std::cos(2.0 * phi));
        // residual is O(1 - tanh r) ~ 2e-7 at r = 8
        CHECK(tangle_poles(r, phi, kKappaTau) == doctest::Approx(envelope).epsilon(1e-5));
    }
}

TEST_CASE("tangle_poles is pi-periodic in phi") {
    for (int trial = 0; trial < 10; ++trial) {
        const double r = 2.0 * uni01(rng);
        const double phi = 2.0 * kPi * uni01(rng);
        CHECK(tangle_poles(r, phi, kKappaTau) ==
              doctest::Approx(tangle_poles(r, phi + kPi, kKappaTau)).epsilon(1e-14));
    }
}

TEST_CASE("tangle_equatorial anchor values") {
    // theta_A = pi/2: (4/pi^2) e^{+-2r} kappa_tau, upper sign at phi = 0
    CHECK(tangle_equatorial(kPi / 2.0, 0.0, 0.0, kKappaTau) ==
          doctest::Approx(4.0 / (kPi * kPi) * kKappaTau).epsilon(1e-12));
    CHECK(tangle_equatorial(kPi / 2.0, 1.0, 0.0, kKappaTau) ==
          doctest::Approx(4.0 / (kPi * kPi) * std::exp(2.0) * kKappaTau).epsilon(1e-12));
    CHECK(tangle_equatorial(kPi / 2.0, 1.0, kPi / 2.0, kKappaTau) ==
          doctest::Approx(4.0 / (kPi * kPi) * std::exp(-2.0) * kKappaTau).epsilon(1e-12));
    // theta_A = 0, r = 0: ((2pi+4)^2 / 4pi^2) kappa_tau ~ 2.679 kappa_tau
    const double expected = std::pow(2.0 * kPi + 4.0, 2) / (4.0 * kPi * kPi) * kKappaTau;
    CHECK(tangle_equatorial(0.0, 0.0, 0.0, kKappaTau) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(2.679 * kKappaTau).epsilon(1e-3));
    CHECK_THROWS_AS(tangle_equatorial(0.0, 1.0, 0.3, kKappaTau), std::invalid_argument);
}

TEST_CASE("both pole states follow the same closed-form tangle") {
    for (const QubitSpec& q : {QubitSpec::ground(), QubitSpec::excited()}) {
        for (const double phi : {0.0, kPi / 2.0}) {
            const PulseParams p = params_from_ratios(0.8, phi, 0.0, 1e-3, 0.1);
            const double numeric =
                tangle_pure(evolve_unitary(product_state(q, p), p)).value;
            const double closed = tangle_poles(0.8, phi, p.kappa_tau);
            CHECK(std::abs(numeric - closed) / closed < 0.05);
        }
    }
}

TEST_CASE("tangle_equatorial agrees with the unitary engine at small coupling") {
    const PulseParams p = params_from_ratios(0.5, 0.0, 0.0, 1e-3, 0.1);
    const ComplexVector psi =
        evolve_unitary(product_state(QubitSpec::equatorial(kPi / 2.0), p), p);
    const double numeric = tangle_pure(psi).value;
    const double closed = tangle_equatorial(kPi / 2.0, 0.5, 0.0, p.kappa_tau);
    CHECK(std::abs(numeric - closed) / closed < 0.05);
}

TEST_CASE("average_error_closed_form branch behavior") {
    CHECK(average_error_closed_form(0.0, 0.0, kKappaTau) ==
          doctest::Approx(0.234 * kKappaTau).epsilon(1e-12));
    // the phi = 0 branch returns to its r = 0 value at r = ln(2.4667)/2
    const double crossing = 0.5 * std::log(0.1665 / 0.0675);
    CHECK(crossing == doctest::Approx(0.4514).epsilon(1e-3));
    CHECK(average_error_closed_form(crossing, 0.0, kKappaTau) ==
          doctest::Approx(average_error_closed_form(0.0, 0.0, kKappaTau)).epsilon(1e-10));
    // the phi = pi/2 branch grows monotonically
    double previous = average_error_closed_form(0.0, kPi / 2.0, kKappaTau);
    for (double r = 0.05; r <= 2.0; r += 0.05) {
        const double value = average_error_closed_form(r, kPi / 2.0, kKappaTau);
        CHECK(value > previous);
        previous = value;
    }
    CHECK_THROWS_AS(average_error_closed_form(1.0, 0.7, kKappaTau), std::invalid_argument);
}

TEST_CASE("first_order_amplitudes limits at s/c -> 1") {
    const double r = 14.0;  // tanh(r) - 1 ~ 1e-12
    const double lambda = 0.05;
    const FirstOrderAmplitudes separable = first_order_amplitudes(r, 0.0, lambda);
    CHECK(std::abs(separable.g1) < 1e-10);
    CHECK(std::abs(separable.e1 + 2.0 * lambda / kPi) < 1e-10);
    const FirstOrderAmplitudes entangled = first_order_amplitudes(r, kPi / 2.0, lambda);
    CHECK(std::abs(entangled.e1) < 1e-10);
    CHECK(std::abs(std::abs(entangled.g1) - lambda) < 1e-10);
}

TEST_CASE("a sign flip in the coupling operator is caught by the closed-form check") {
    // corrupted interaction: squeeze term added instead of subtracted
    PulseParams p;
    p.r = 1.0;
    p.phi = 0.0;
    p.kappa_tau = 1e-4;
    const ComplexMatrix a = lowering_operator(p.fock_dim());
    const complexd squeeze = std::exp(-2.0 * kI * p.phi) * p.tanh_r();
    const ComplexMatrix bad_w =
        kron(sigma_plus(), ComplexMatrix(a + squeeze * a.adjoint())) -
        kron(sigma_minus(), ComplexMatrix(a.adjoint() + std::conj(squeeze) * a));
    const ComplexMatrix drive =
        kI * (kPi / 2.0) * (kron(sigma_plus(), ComplexMatrix::Identity(6, 6)) -
                            kron(sigma_minus(), ComplexMatrix::Identity(6, 6)));
    const ComplexMatrix bad_h = kI * p.lambda() * bad_w + drive;

    ComplexVector psi = matrix_exp(-kI * bad_h) * product_state(QubitSpec::ground(), p);
    psi /= psi.norm();
    const double bad_tangle = tangle_pure(psi).value;
    const double closed = tangle_poles(p.r, p.phi, p.kappa_tau);
    // the healthy pipeline agrees to ~lambda^2; the corrupted one must not
    CHECK(std::abs(bad_tangle - closed) / closed > 0.05);

    const ComplexVector good = evolve_unitary(product_state(QubitSpec::ground(), p), p);
    CHECK(std::abs(tangle_pure(good).value - closed) / closed < 0.05);
}

TEST_CASE("closed-form agreement tightens as the coupling shrinks") {
    const auto relative_gap = [](double kappa_over_gamma) {
        const PulseParams p = params_from_ratios(0.8, 0.0, 0.0, kappa_over_gamma, 0.1);
        const double numeric =
            tangle_pure(evolve_unitary(product_state(QubitSpec::ground(), p), p)).value;
        const double closed = tangle_poles(0.8, 0.0, p.kappa_tau);
        return std::abs(numeric - closed) / closed;
    };
    const double coarse = relative_gap(1e-3);   // kappa_tau = 1e-4
    const double fine = relative_gap(1e-5);     // kappa_tau = 1e-6
    CHECK(coarse < 0.05);
    CHECK(fine < coarse / 10.0);
}

TEST_CASE("first_order |g,1> amplitude reproduces the pole tangle identity") {
    // 4 |g1|^2 with lambda = cosh(r) sqrt(kappa_tau) equals the pole closed form
    for (int trial = 0; trial < 20; ++trial) {
        const double r = 2.5 * uni01(rng);
        const double phi = 2.0 * kPi * uni01(rng);
        const double lambda = std::cosh(r) * std::sqrt(kKappaTau);
        const FirstOrderAmplitudes amps = first_order_amplitudes(r, phi, lambda);
        CHECK(4.0 * std::norm(amps.g1) ==
              doctest::Approx(tangle_poles(r, phi, kKappaTau)).epsilon(1e-12));
    }
}
