// Noisy optical-Bloch picture: classical Rabi precession with one static
// Gaussian quadrature fluctuation per pulse. Corroborates the sign of the
// squeezing-phase dependence of the gate error; trends only, never
// magnitudes.
#pragma once

#include "sqpulse/model.hpp"

#include <cstdint>

namespace sqpulse {

// One static draw of the quadrature fluctuations (delta X1, delta X2);
// standard deviations (e^{-r}, e^{r}) at phi = 0 and (e^{r}, e^{-r}) at
// phi = pi/2, with the squeezing ellipse rotated for other phases.
struct NoiseDraw {
    double dx1 = 0.0;
    double dx2 = 0.0;
};

// Closed-form solution of ds/dt = -omega x s over `time` (rotation about
// omega-hat by -|omega| time).
Eigen::Vector3d rotate_bloch(const Eigen::Vector3d& s, const Eigen::Vector3d& omega,
                             double time = 1.0);

// Per-step exact precession over t in [0,1]; norm preserving.
Eigen::Vector3d bloch_trajectory(const Eigen::Vector3d& initial, const Eigen::Vector3d& omega,
                                 int steps);

// Classical Rabi vector for a pulse of the given area about the equatorial
// axis at angle theta from y.
Eigen::Vector3d rabi_vector(double theta, double rotation_angle);

// Deterministic per-sample noise stream: identical (r, phi, seed, index)
// always yields the identical draw.
NoiseDraw draw_noise(double r, double phi, std::uint64_t seed, std::uint64_t sample_index);

// Gate error of a single pulse with the drive perturbed by one noise draw:
// 1 - (1 + s . s_target)/2 with s_target the noiseless image.
double single_shot_error(const QubitSpec& q, const PulseParams& p, const NoiseDraw& noise);

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    int samples = 0;
};

// Mean and standard error of single_shot_error over `samples` independent
// draws; bit-identical for identical inputs and seed.
MonteCarloEstimate noisy_obe_error(const QubitSpec& q, const PulseParams& p, int samples,
                                   std::uint64_t seed);

}  // namespace sqpulse
