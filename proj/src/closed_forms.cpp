#include "sqpulse/closed_forms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sqpulse {

namespace {

constexpr double kPi = std::numbers::pi;

// +1 for the phi = 0 branch (upper sign), -1 for phi = pi/2.
int branch_sign(double phi) {
    if (std::abs(phi) <= 1e-12) return +1;
    if (std::abs(phi - 0.5 * kPi) <= 1e-12) return -1;
    throw std::invalid_argument(
        "closed form defined only for squeezing phases 0 and pi/2");
}

}  // namespace

double tangle_poles(double r, double phi, double kappa_tau) {
    const double t = std::tanh(r);
    const double c = std::cosh(r);
    return (1.0 + t * t - 2.0 * t * std::cos(2.0 * phi)) * c * c * kappa_tau;
}

double tangle_equatorial(double theta_a, double r, double phi, double kappa_tau) {
    const int sign = branch_sign(phi);
    const complexd phase = std::exp(kI * theta_a);
    const complexd bracket = kPi * (1.0 + phase * phase) * std::exp(-sign * r) +
                             4.0 * phase * std::exp(sign * r);
    const complexd value =
        std::exp(-2.0 * kI * theta_a) / (4.0 * kPi * kPi) * bracket * bracket * kappa_tau;
    return value.real();
}

double average_error_closed_form(double r, double phi, double kappa_tau) {
    const int sign = branch_sign(phi);
    return (0.0675 * std::exp(2.0 * sign * r) + 0.1665 * std::exp(-2.0 * sign * r)) * kappa_tau;
}

FirstOrderAmplitudes first_order_amplitudes(double r, double phi, double lambda) {
    const complexd squeeze = std::exp(-2.0 * kI * phi) * std::tanh(r);
    return {-(lambda / kPi) * (squeeze + 1.0), 0.5 * lambda * (squeeze - 1.0)};
}

}  // namespace sqpulse
