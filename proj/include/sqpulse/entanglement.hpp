// Tangle (squared concurrence) of the atom-pulse state, gate error against
// the classical target, and the six-state averaged error.
#pragma once

#include "sqpulse/dynamics.hpp"

namespace sqpulse {

enum class TangleMethod { pure_formula, wootters_mixed };

struct TangleValue {
    double value = 0.0;
    TangleMethod method = TangleMethod::pure_formula;
    // Population removed by the projection onto the {|0>,|1>} field subspace
    // (mixed path only; 0 for the pure path).
    double truncation_discard = 0.0;
};

// Budget for the population discarded by the two-level-field projection of
// the mixed tangle.
inline constexpr double kTruncationDiscardLimit = 1e-6;

// Reduced 2x2 atomic state.
Eigen::Matrix2cd atom_marginal(const ComplexVector& psi);
Eigen::Matrix2cd atom_marginal(const ComplexMatrix& rho);

// Population outside the {g,e} x {|0>,|1>} subspace; reported as a
// diagnostic on sweep rows.
double truncation_weight(const ComplexVector& psi);
double truncation_weight(const ComplexMatrix& rho);

// T = 2 (1 - Tr[(Tr_field |psi><psi|)^2]) for a normalized pure state on
// atom x field.
TangleValue tangle_pure(const ComplexVector& psi);

// Squared Wootters concurrence of rho projected onto the {g,e} x {|0>,|1>}
// subspace and renormalized. Throws numeric_error{truncation} when the
// discarded population exceeds kTruncationDiscardLimit.
TangleValue tangle_mixed(const ComplexMatrix& rho);

// 1 - <eta| rho_atom |eta>, clamped to [0,1] against roundoff.
double error_probability(const Eigen::Matrix2cd& rho_atom, const Eigen::Vector2cd& eta);

// Mean gate error over the six axial Bloch states, each evolved with the
// selected engine and reduced to the atom. Perturbative is not an averaging
// engine.
double average_error(const PulseParams& p, Engine engine, int steps = 2000);

}  // namespace sqpulse
