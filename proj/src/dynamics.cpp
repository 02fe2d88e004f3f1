#include "sqpulse/dynamics.hpp"

#include "sqpulse/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace sqpulse {

namespace {

// Gauss-Legendre nodes and weights on [0,1], by Newton iteration on the
// Legendre recurrence. Deterministic and accurate to machine precision for
// the node counts used here.
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};

Quadrature gauss_legendre_unit(int n) {
    Quadrature q;
    q.nodes.resize(n);
    q.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // map from [-1,1] to [0,1]; nodes come out in descending x order
        q.nodes[i] = 0.5 * (1.0 - x);
        q.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return q;
}

}  // namespace

std::string to_string(Engine engine) {
    switch (engine) {
        case Engine::unitary: return "unitary";
        case Engine::lindblad: return "lindblad";
        case Engine::perturbative: return "perturbative";
    }
    throw std::logic_error("Engine: invalid value");
}

Engine engine_from_string(const std::string& name) {
    if (name == "unitary") return Engine::unitary;
    if (name == "lindblad") return Engine::lindblad;
    if (name == "perturbative") return Engine::perturbative;
    throw std::invalid_argument("unknown engine '" + name +
                                "' (expected unitary, lindblad or perturbative)");
}

ComplexVector product_state(const QubitSpec& q, const PulseParams& p) {
    p.validate();
    const Eigen::Vector2cd amps = q.amplitudes();
    ComplexVector psi = ComplexVector::Zero(p.dim());
    psi(0) = amps(0);                // |g,0>
    psi(p.fock_dim()) = amps(1);     // |e,0>
    return psi;
}

double cutoff_population(const ComplexVector& psi, Eigen::Index fock_dim) {
    return std::norm(psi(fock_dim - 1)) + std::norm(psi(2 * fock_dim - 1));
}

double cutoff_population(const ComplexMatrix& rho, Eigen::Index fock_dim) {
    return rho(fock_dim - 1, fock_dim - 1).real() +
           rho(2 * fock_dim - 1, 2 * fock_dim - 1).real();
}

namespace {

void check_cutoff(double leak, int n_max) {
    if (leak > kCutoffLeakLimit) {
        std::ostringstream msg;
        msg << "Fock cutoff too small: population " << leak << " at n = n_max = " << n_max
            << " exceeds " << kCutoffLeakLimit << "; increase n_max";
        throw numeric_error(numeric_error::kind::cutoff, msg.str());
    }
}

}  // namespace

ComplexVector evolve_unitary(const ComplexVector& initial, const PulseParams& p) {
    p.validate();
    if (initial.size() != p.dim()) {
        throw std::invalid_argument("evolve_unitary: state dimension does not match params");
    }
    if (std::abs(initial.norm() - 1.0) > 1e-8) {
        throw std::invalid_argument("evolve_unitary: initial state must be normalized");
    }
    const ComplexMatrix u = matrix_exp(-kI * build_H_S(p));
    ComplexVector out = u * initial;
    const double norm = out.norm();
    if (std::abs(norm - 1.0) > 1e-12) {
        throw numeric_error(numeric_error::kind::non_finite,
                            "evolve_unitary: propagator lost unitarity beyond 1e-12");
    }
    out /= norm;
    check_cutoff(cutoff_population(out, p.fock_dim()), p.n_max);
    return out;
}

PropagatorExpansion perturbative_propagator(const PulseParams& p, int quadrature_nodes) {
    p.validate();
    if (quadrature_nodes < 2) {
        throw std::invalid_argument("perturbative_propagator: need at least 2 quadrature nodes");
    }
    constexpr int kMaxNodes = 2048;
    constexpr double kQuadTol = 1e-10;

    const Eigen::Index fock = p.fock_dim();
    const ComplexMatrix identity_field = ComplexMatrix::Identity(fock, fock);
    const ComplexMatrix w = build_W(p);
    const auto u0 = [&](double xi) -> ComplexMatrix {
        return kron(classical_rotation(xi, p.theta, p.rotation_angle), identity_field);
    };

    const auto first_order = [&](int n) {
        const Quadrature q = gauss_legendre_unit(n);
        ComplexMatrix acc = ComplexMatrix::Zero(p.dim(), p.dim());
        for (int k = 0; k < n; ++k) {
            const double xi = q.nodes[k];
            acc += q.weights[k] * (u0(1.0 - xi) * w * u0(xi));
        }
        return acc;
    };

    // ordered double integral over xi2 <= xi1 <= 1
    const auto second_order = [&](int n) {
        const Quadrature outer = gauss_legendre_unit(n);
        const Quadrature inner = gauss_legendre_unit(n);
        ComplexMatrix acc = ComplexMatrix::Zero(p.dim(), p.dim());
        for (int j = 0; j < n; ++j) {
            const double xi2 = outer.nodes[j];
            const double span = 1.0 - xi2;
            const ComplexMatrix right = w * u0(xi2);
            for (int k = 0; k < n; ++k) {
                const double xi1 = xi2 + span * inner.nodes[k];
                acc += (outer.weights[j] * span * inner.weights[k]) *
                       (u0(1.0 - xi1) * w * u0(xi1 - xi2) * right);
            }
        }
        return acc;
    };

    PropagatorExpansion result;
    result.U0 = u0(1.0);

    int n = quadrature_nodes;
    ComplexMatrix u1 = first_order(n);
    ComplexMatrix u2 = second_order(n);
    while (true) {
        if (2 * n > kMaxNodes) {
            throw numeric_error(numeric_error::kind::convergence,
                                "perturbative_propagator: quadrature did not converge to 1e-10 "
                                "within the node limit");
        }
        n *= 2;
        ComplexMatrix u1_fine = first_order(n);
        ComplexMatrix u2_fine = second_order(n);
        const double delta = std::max(max_abs(u1_fine - u1), max_abs(u2_fine - u2));
        u1.swap(u1_fine);
        u2.swap(u2_fine);
        if (delta < kQuadTol) break;
    }
    result.U1 = std::move(u1);
    result.U2 = std::move(u2);
    return result;
}

ComplexVector apply_expansion(const PropagatorExpansion& u, double lambda,
                              const ComplexVector& initial) {
    if (u.U0.rows() != initial.size()) {
        throw std::invalid_argument("apply_expansion: state dimension does not match expansion");
    }
    ComplexVector psi = u.U0 * initial + lambda * (u.U1 * initial) +
                        (lambda * lambda) * (u.U2 * initial);
    const double norm = psi.norm();
    if (norm == 0.0) {
        throw numeric_error(numeric_error::kind::non_finite,
                            "apply_expansion: expansion annihilated the state");
    }
    return psi / norm;
}

void validate_density(const ComplexMatrix& rho, double hermiticity_tol, double trace_tol,
                      double min_eigenvalue_floor) {
    if (rho.rows() != rho.cols()) {
        throw std::invalid_argument("validate_density: matrix must be square");
    }
    const double herm_defect = max_abs(rho - rho.adjoint());
    if (herm_defect > hermiticity_tol) {
        std::ostringstream msg;
        msg << "density matrix not Hermitian: defect " << herm_defect;
        throw numeric_error(numeric_error::kind::positivity, msg.str());
    }
    const double trace_defect = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
    if (trace_defect > trace_tol) {
        std::ostringstream msg;
        msg << "density matrix trace off unity by " << trace_defect;
        throw numeric_error(numeric_error::kind::positivity, msg.str());
    }
    const ComplexMatrix herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < min_eigenvalue_floor) {
        std::ostringstream msg;
        msg << "density matrix positivity violated: min eigenvalue " << min_eig;
        throw numeric_error(numeric_error::kind::positivity, msg.str());
    }
}

ComplexMatrix evolve_lindblad(const ComplexMatrix& rho0, const PulseParams& p, int steps) {
    p.validate();
    if (steps < 100) throw std::invalid_argument("evolve_lindblad: steps must be >= 100");
    if (rho0.rows() != p.dim() || rho0.cols() != p.dim()) {
        throw std::invalid_argument("evolve_lindblad: state dimension does not match params");
    }
    validate_density(rho0);

    const Eigen::Index fock = p.fock_dim();
    const ComplexMatrix identity_field = ComplexMatrix::Identity(fock, fock);
    const ComplexMatrix h = build_H_S(p);
    const ComplexMatrix jump = kron(sigma_minus(), identity_field);
    const ComplexMatrix jump_dag = jump.adjoint();
    const ComplexMatrix number = jump_dag * jump;  // |e><e| x 1
    const double gamma = p.gamma_tau;

    const auto rhs = [&](const ComplexMatrix& rho) -> ComplexMatrix {
        ComplexMatrix d = -kI * (h * rho - rho * h);
        if (gamma > 0.0) {
            d.noalias() += gamma * (jump * rho * jump_dag);
            d.noalias() -= (0.5 * gamma) * (number * rho + rho * number);
        }
        return d;
    };

    ComplexMatrix rho = rho0;
    const double h_step = 1.0 / steps;
    for (int i = 0; i < steps; ++i) {
        const ComplexMatrix k1 = rhs(rho);
        const ComplexMatrix k2 = rhs(rho + 0.5 * h_step * k1);
        const ComplexMatrix k3 = rhs(rho + 0.5 * h_step * k2);
        const ComplexMatrix k4 = rhs(rho + h_step * k3);
        rho += (h_step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    validate_density(rho);
    check_cutoff(cutoff_population(rho, fock), p.n_max);
    return rho;
}

}  // namespace sqpulse
