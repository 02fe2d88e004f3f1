// Time evolution of the joint atom⊗pulse state over one pulse: exact unitary
// propagation, the ordered perturbative expansion of the propagator, and
// fixed-step Lindblad integration with the free-space reservoir.
#pragma once

#include "sqpulse/model.hpp"

#include <string>

namespace sqpulse {

enum class Engine { unitary, lindblad, perturbative };

std::string to_string(Engine engine);
Engine engine_from_string(const std::string& name);

// Population gate at the highest Fock level; above this the cutoff is
// considered too small for the run.
inline constexpr double kCutoffLeakLimit = 1e-8;

// |sigma> ⊗ |0>, dimension 2*(n_max+1).
ComplexVector product_state(const QubitSpec& q, const PulseParams& p);

// Population of the n = n_max Fock level, summed over both atomic states.
double cutoff_population(const ComplexVector& psi, Eigen::Index fock_dim);
double cutoff_population(const ComplexMatrix& rho, Eigen::Index fock_dim);

// exp(-i H_S) applied to a normalized joint state, renormalized to absorb
// roundoff only. Throws numeric_error{cutoff} on cutoff leakage.
ComplexVector evolve_unitary(const ComplexVector& initial, const PulseParams& p);

// Terms of the lambda-series of the propagator: U ~ U0 + lambda U1 + lambda^2 U2
// with U0 the classical rotation on the atom factor and the higher orders
// the time-ordered integrals of W sandwiched between classical rotations.
struct PropagatorExpansion {
    ComplexMatrix U0;
    ComplexMatrix U1;
    ComplexMatrix U2;
};

// Gauss-Legendre evaluation of the ordered integrals, refined by node
// doubling until entries move by less than 1e-10.
PropagatorExpansion perturbative_propagator(const PulseParams& p, int quadrature_nodes = 16);

// (U0 + lambda U1 + lambda^2 U2)|psi0>, normalized exactly.
ComplexVector apply_expansion(const PropagatorExpansion& u, double lambda,
                              const ComplexVector& initial);

// Hermiticity, unit trace and positivity gates for a density matrix.
void validate_density(const ComplexMatrix& rho, double hermiticity_tol = 1e-10,
                      double trace_tol = 1e-10, double min_eigenvalue_floor = -1e-9);

// Fixed-step RK4 integration of
//   d rho / dt = -i [H_S, rho] + Gamma*tau (s- rho s+ - {s+ s-, rho}/2)
// over t in [0,1], with the dissipator acting on the atom factor only.
ComplexMatrix evolve_lindblad(const ComplexMatrix& rho0, const PulseParams& p, int steps = 2000);

}  // namespace sqpulse
