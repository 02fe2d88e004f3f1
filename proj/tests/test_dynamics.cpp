#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sqpulse/dynamics.hpp"
#include "sqpulse/closed_forms.hpp"
#include "sqpulse/entanglement.hpp"
#include "sqpulse/errors.hpp"

#include <numbers>
#include <random>

using namespace sqpulse;

namespace {

constexpr double kPi = std::numbers::pi;
std::mt19937 rng(2024);
std::uniform_real_distribution<double> uni01(0.0, 1.0);

}  // namespace

TEST_CASE("evolve_unitary performs the bare pi rotation at kappa = 0") {
    PulseParams p;
    p.kappa_tau = 0.0;
    const ComplexVector psi = evolve_unitary(product_state(QubitSpec::ground(), p), p);
    CHECK(std::abs(psi(p.fock_dim()) - 1.0) < 1e-12);  // |e,0>
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("evolve_unitary reproduces the coherent-pulse tangle kappa_tau") {
    const PulseParams p = params_from_ratios(0.0, 0.0, 0.0, 1e-3, 0.1);  // kappa_tau = 1e-4
    const ComplexVector psi = evolve_unitary(product_state(QubitSpec::ground(), p), p);
    const double tangle = tangle_pure(psi).value;
    CHECK(tangle == doctest::Approx(1e-4).epsilon(0.02));
}

TEST_CASE("evolve_unitary preserves the norm for random parameters") {
    for (int trial = 0; trial < 10; ++trial) {
        PulseParams p;
        p.r = 1.5 * uni01(rng);
        p.phi = 2.0 * kPi * uni01(rng);
        p.theta = 2.0 * kPi * uni01(rng);
        p.kappa_tau = 1e-4 * uni01(rng);
        const QubitSpec q = QubitSpec::bloch(kPi * uni01(rng), 2.0 * kPi * uni01(rng));
        const ComplexVector psi = evolve_unitary(product_state(q, p), p);
        CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("evolve_unitary flags cutoff leakage") {
    PulseParams p;
    p.n_max = 2;
    p.r = 2.0;
    p.kappa_tau = 1.3e-3;  // lambda ~ 0.136, strong enough to reach n = 2
    CHECK_THROWS_AS(evolve_unitary(product_state(QubitSpec::ground(), p), p), numeric_error);
}

TEST_CASE("perturbative propagator starts from the classical rotation") {
    PulseParams p;
    p.r = 0.6;
    p.phi = 0.3;
    p.kappa_tau = 1e-4;
    const PropagatorExpansion u = perturbative_propagator(p);
    const ComplexMatrix expected =
        kron(classical_rotation(1.0, p.theta, p.rotation_angle),
             ComplexMatrix::Identity(p.fock_dim(), p.fock_dim()));
    CHECK(max_abs(u.U0 - expected) < 1e-15);
}

TEST_CASE("first-order amplitudes match the interference closed forms") {
    for (const auto& [r, phi] : std::vector<std::pair<double, double>>{
             {0.0, 0.0}, {0.9, 0.4}, {1.16, kPi / 2.0}}) {
        PulseParams p;
        p.r = r;
        p.phi = phi;
        p.kappa_tau = 1e-6;
        const PropagatorExpansion u = perturbative_propagator(p);
        const FirstOrderAmplitudes closed = first_order_amplitudes(r, phi, 1.0);
        const Eigen::Index fock = p.fock_dim();
        CHECK(std::abs(u.U1(fock + 1, 0) - closed.e1) < 1e-10);  // <e,1|U1|g,0>
        CHECK(std::abs(u.U1(1, 0) - closed.g1) < 1e-10);         // <g,1|U1|g,0>
        // the only O(lambda) content of |g,0> evolution lives at n = 1
        CHECK(std::abs(u.U1(0, 0)) < 1e-12);
        CHECK(std::abs(u.U1(fock, 0)) < 1e-12);
    }
}

TEST_CASE("truncated expansion converges at third order in lambda") {
    PulseParams base;
    base.r = 0.7;
    base.phi = 1.2;
    base.kappa_tau = 1e-6;
    const PropagatorExpansion u = perturbative_propagator(base);
    const ComplexVector psi0 = product_state(QubitSpec::ground(), base);

    std::vector<double> log_lambda, log_err;
    for (const double lambda : {0.12, 0.06, 0.03}) {
        PulseParams p = base;
        const double ratio = lambda / p.cosh_r();
        p.kappa_tau = ratio * ratio;
        const ComplexVector exact = evolve_unitary(psi0, p);
        const ComplexVector series =
            u.U0 * psi0 + p.lambda() * (u.U1 * psi0) + p.lambda() * p.lambda() * (u.U2 * psi0);
        log_lambda.push_back(std::log(p.lambda()));
        log_err.push_back(std::log((series - exact).norm()));
    }
    const double slope01 = (log_err[1] - log_err[0]) / (log_lambda[1] - log_lambda[0]);
    const double slope12 = (log_err[2] - log_err[1]) / (log_lambda[2] - log_lambda[1]);
    CHECK(slope01 == doctest::Approx(3.0).epsilon(0.07));
    CHECK(slope12 == doctest::Approx(3.0).epsilon(0.07));
}

TEST_CASE("apply_expansion returns a normalized state") {
    PulseParams p;
    p.r = 0.5;
    p.kappa_tau = 1e-4;
    const PropagatorExpansion u = perturbative_propagator(p);
    const ComplexVector psi =
        apply_expansion(u, p.lambda(), product_state(QubitSpec::equatorial(0.3), p));
    CHECK(std::abs(psi.norm() - 1.0) < 1e-14);
}

TEST_CASE("field phase acts as a shift of the squeezing phase for pole states") {
    // conjugating by the atomic phase rotation together with a field-mode
    // rotation maps (theta, phi) onto (0, phi + theta); |g> is invariant
    // under the atomic rotation, so its tangle depends on phi + theta only
    for (const auto& [theta, phi] : std::vector<std::pair<double, double>>{
             {0.7, 0.2}, {1.9, 1.1}, {-0.5, 0.9}}) {
        PulseParams with_theta;
        with_theta.r = 0.9;
        with_theta.phi = phi;
        with_theta.theta = theta;
        with_theta.kappa_tau = 1e-4;
        PulseParams shifted = with_theta;
        shifted.phi = phi + theta;
        shifted.theta = 0.0;
        const double t_theta =
            tangle_pure(evolve_unitary(product_state(QubitSpec::ground(), with_theta),
                                       with_theta))
                .value;
        const double t_shifted =
            tangle_pure(evolve_unitary(product_state(QubitSpec::ground(), shifted), shifted))
                .value;
        CHECK(t_theta == doctest::Approx(t_shifted).epsilon(1e-10));
    }
}

TEST_CASE("lindblad evolution with the reservoir off matches the unitary path") {
    PulseParams p;
    p.r = 1.0;
    p.phi = 0.8;
    p.kappa_tau = 1e-4;
    p.gamma_tau = 0.0;
    const ComplexVector psi0 = product_state(QubitSpec::equatorial(1.1), p);
    const ComplexVector psi = evolve_unitary(psi0, p);
    const ComplexMatrix rho = evolve_lindblad(psi0 * psi0.adjoint(), p, 2000);
    const double fidelity = std::real(psi.dot(rho * psi));
    CHECK(fidelity > 1.0 - 1e-8);
}

TEST_CASE("lindblad evolution preserves trace, Hermiticity and positivity") {
    for (int trial = 0; trial < 5; ++trial) {
        PulseParams p;
        p.r = uni01(rng);
        p.phi = 2.0 * kPi * uni01(rng);
        p.kappa_tau = 1e-4 * uni01(rng);
        p.gamma_tau = 0.02 + 0.3 * uni01(rng);
        const QubitSpec q = QubitSpec::bloch(kPi * uni01(rng), 2.0 * kPi * uni01(rng));
        const ComplexVector psi0 = product_state(q, p);
        const ComplexMatrix rho = evolve_lindblad(psi0 * psi0.adjoint(), p, 500);
        CHECK(std::abs(rho.trace().real() - 1.0) < 1e-10);
        CHECK(max_abs(ComplexMatrix(rho - rho.adjoint())) < 1e-10);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho, Eigen::EigenvaluesOnly);
        CHECK(solver.eigenvalues().minCoeff() > -1e-9);
    }
}

TEST_CASE("lindblad evolution rejects too few steps and bad input") {
    PulseParams p;
    const ComplexVector psi0 = product_state(QubitSpec::ground(), p);
    CHECK_THROWS_AS(evolve_lindblad(psi0 * psi0.adjoint(), p, 50), std::invalid_argument);
    ComplexMatrix not_density = ComplexMatrix::Identity(p.dim(), p.dim());
    CHECK_THROWS_AS(evolve_lindblad(not_density, p, 500), numeric_error);
}
