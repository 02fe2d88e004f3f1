// Physical knobs of a squeezed-light pulse acting on a two-level atom, and
// the operators of the working Hamiltonian in the displaced + Bogoliubov
// frame where the pulse mode starts in vacuum.
//
// Conventions, fixed globally:
//   - basis order: atom index slow, Fock index fast; atom basis (|g>, |e>),
//     Fock basis (|0>, ..., |n_max>);
//   - time in pulse durations (the pulse occupies t in [0,1]), energies in
//     units of hbar/tau, so rates enter only as the products kappa*tau and
//     gamma*tau;
//   - <sigma_z> = -1 for |g>; equatorial qubit states are
//     (e^{i theta_A}|g> + |e>)/sqrt(2) with theta_A measured from +x.
#pragma once

#include "sqpulse/linalg.hpp"

#include <array>
#include <numbers>
#include <string>

namespace sqpulse {

inline constexpr double kDefaultLambdaMax = 0.15;

// All knobs are dimensionless. The fluctuation coupling is
// lambda = cosh(r) * sqrt(kappa*tau); construction gates on it because the
// perturbative and Markovian regime assumed by the model needs lambda small
// and kappa*tau < 1.
struct PulseParams {
    double r = 0.0;                     // squeezing magnitude, >= 0
    double phi = 0.0;                   // squeezing phase
    double theta = 0.0;                 // field phase (rotation axis angle from y)
    double kappa_tau = 1e-4;            // decay into the paraxial pulse-mode family, per pulse
    double gamma_tau = 0.1;             // free-space decay per pulse; 0 switches the reservoir off
    double rotation_angle = std::numbers::pi;  // pulse area, pi for a pi pulse
    int n_max = 5;                      // Fock cutoff
    bool allow_unsafe_lambda = false;   // downgrade the lambda gate from error to "marked row"

    double sinh_r() const { return std::sinh(r); }
    double cosh_r() const { return std::cosh(r); }
    double tanh_r() const { return std::tanh(r); }
    double lambda() const { return std::cosh(r) * std::sqrt(kappa_tau); }
    double g_tau() const { return std::sqrt(kappa_tau); }              // g*tau
    double alpha_magnitude() const;                                    // rotation_angle / (2 g tau)
    double kappa_over_gamma() const;                                   // inf when gamma_tau = 0

    Eigen::Index fock_dim() const { return n_max + 1; }
    Eigen::Index dim() const { return 2 * (n_max + 1); }

    // Throws std::invalid_argument on any violated constraint. A lambda above
    // lambda_max is an error unless allow_unsafe_lambda is set.
    void validate(double lambda_max = kDefaultLambdaMax) const;
};

// The figure-style parameterization: kappa*tau = (kappa/Gamma) * (Gamma*tau),
// with Gamma*tau required positive.
PulseParams params_from_ratios(double r, double phi, double theta, double kappa_over_gamma,
                               double gamma_tau, double rotation_angle = std::numbers::pi,
                               int n_max = 5, bool allow_unsafe_lambda = false);

// Atomic initial state as Bloch-sphere data.
struct QubitSpec {
    enum class Kind { ground, excited, equatorial, general };

    Kind kind = Kind::ground;
    double theta_a = 0.0;  // equatorial azimuth from +x
    double polar = 0.0;    // general: polar angle from +z (= |e>)
    double azimuth = 0.0;

    static QubitSpec ground() { return {}; }
    static QubitSpec excited() { return {Kind::excited, 0.0, 0.0, 0.0}; }
    static QubitSpec equatorial(double theta_a) { return {Kind::equatorial, theta_a, 0.0, 0.0}; }
    static QubitSpec bloch(double polar, double azimuth) {
        return {Kind::general, 0.0, polar, azimuth};
    }

    // Accepts "g", "e", "eq:ANGLE", "bloch:POLAR:AZIMUTH"; angles may use
    // "pi" forms such as "pi/2" or "0.5pi".
    static QubitSpec parse(const std::string& text);

    Eigen::Vector2cd amplitudes() const;  // normalized (c_g, c_e)
    Eigen::Vector3d bloch_vector() const;
    std::string label() const;
};

// "pi", "pi/2", "3pi/4", "0.5pi" or a plain radian value.
double parse_angle(const std::string& text);

// The six axial Bloch states +x, -x, +y, -y, +z, -z used for state-averaged
// gate error.
std::array<QubitSpec, 6> axial_states();

// Atomic ladder operators in the (|g>, |e>) basis.
Eigen::Matrix2cd sigma_plus();
Eigen::Matrix2cd sigma_minus();

// Truncated Fock lowering operator on {|0>, ..., |fock_dim-1>}.
ComplexMatrix lowering_operator(Eigen::Index fock_dim);

// W = sigma_+ (a - e^{-2i phi}(s/c) a^dag) - sigma_- (a^dag - e^{2i phi}(s/c) a):
// the dimensionless fluctuation part of the atom-pulse coupling.
// Anti-Hermitian by construction.
ComplexMatrix build_W(const PulseParams& p);

// Working Hamiltonian in units of hbar/tau:
//   i lambda W + i (rotation_angle/2)(e^{i theta} sigma_+ - e^{-i theta} sigma_-) x 1_field.
ComplexMatrix build_H_S(const PulseParams& p);

// Classical-drive propagator exp[(angle/2)(e^{i theta} sigma_+ - e^{-i theta} sigma_-) xi],
// evaluated in closed form. One-parameter group in xi.
Eigen::Matrix2cd classical_rotation(double xi, double theta, double angle);

// Target state |eta>: the classical-field image of the initial qubit state.
Eigen::Vector2cd target_state(const QubitSpec& q, const PulseParams& p);

}  // namespace sqpulse
