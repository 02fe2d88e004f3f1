// Leading-order closed forms for the tangle, the state-averaged gate error
// and the first-order interference amplitudes. These are the references the
// numerical engines are validated against.
#pragma once

#include "sqpulse/linalg.hpp"

namespace sqpulse {

// Tangle for the pole states |g>, |e>:
//   [1 + (s/c)^2 - 2 (s/c) cos(2 phi)] c^2 kappa*tau.
// Valid at any squeezing phase; reduces to kappa*tau e^{-+2r} at phi = 0, pi/2.
double tangle_poles(double r, double phi, double kappa_tau);

// Tangle for an equatorial state at azimuth theta_a, restricted to the two
// squeezing phases phi in {0, pi/2} (upper/lower sign branch). Evaluated as
// the written complex expression; the result is real at theta_a in {0, pi/2},
// and the real part is returned elsewhere.
double tangle_equatorial(double theta_a, double r, double phi, double kappa_tau);

// Averaged gate error over all qubit initial states,
//   (0.0675 e^{+-2r} + 0.1665 e^{-+2r}) kappa*tau,
// upper sign at phi = 0. Restricted to phi in {0, pi/2}.
double average_error_closed_form(double r, double phi, double kappa_tau);

// First-order amplitudes of |e,1> and |g,1> after a pi pulse on |g,0> at
// theta = 0:
//   e1 = -(lambda/pi) (e^{-2i phi} s/c + 1)
//   g1 =  (lambda/2)  (e^{-2i phi} s/c - 1)
struct FirstOrderAmplitudes {
    complexd e1;
    complexd g1;
};

FirstOrderAmplitudes first_order_amplitudes(double r, double phi, double lambda);

}  // namespace sqpulse
