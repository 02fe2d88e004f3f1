#include "sqpulse/semiclassical.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sqpulse {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// uniform on (0,1); never exactly 0, safe under log()
double uniform01(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

}  // namespace

Eigen::Vector3d rotate_bloch(const Eigen::Vector3d& s, const Eigen::Vector3d& omega,
                             double time) {
    const double magnitude = omega.norm();
    if (magnitude == 0.0 || time == 0.0) return s;
    const Eigen::Vector3d axis = omega / magnitude;
    const double angle = -magnitude * time;
    const double c = std::cos(angle);
    const double sn = std::sin(angle);
    return s * c + axis.cross(s) * sn + axis * (axis.dot(s)) * (1.0 - c);
}

Eigen::Vector3d bloch_trajectory(const Eigen::Vector3d& initial, const Eigen::Vector3d& omega,
                                 int steps) {
    if (steps < 100) throw std::invalid_argument("bloch_trajectory: steps must be >= 100");
    const double dt = 1.0 / steps;
    Eigen::Vector3d s = initial;
    for (int i = 0; i < steps; ++i) {
        s = rotate_bloch(s, omega, dt);
    }
    return s;
}

Eigen::Vector3d rabi_vector(double theta, double rotation_angle) {
    return rotation_angle * Eigen::Vector3d(std::sin(theta), std::cos(theta), 0.0);
}

NoiseDraw draw_noise(double r, double phi, std::uint64_t seed, std::uint64_t sample_index) {
    std::uint64_t state = seed ^ (0xD1B54A32D192ED03ull * (sample_index + 1));
    splitmix64(state);  // decorrelate nearby (seed, index) pairs
    const double u1 = uniform01(state);
    const double u2 = uniform01(state);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double z1 = radius * std::cos(2.0 * std::numbers::pi * u2);
    const double z2 = radius * std::sin(2.0 * std::numbers::pi * u2);
    // squeezing ellipse with principal deviations (e^{-r}, e^{r}), rotated by phi
    const double a = std::exp(-r) * z1;
    const double b = std::exp(r) * z2;
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    return {c * a - s * b, s * a + c * b};
}

double single_shot_error(const QubitSpec& q, const PulseParams& p, const NoiseDraw& noise) {
    p.validate();
    const Eigen::Vector3d omega = rabi_vector(p.theta, p.rotation_angle);
    const Eigen::Vector3d target = rotate_bloch(q.bloch_vector(), omega);
    const double zeta = p.g_tau();
    const Eigen::Vector3d perturbed =
        omega + 0.5 * zeta * Eigen::Vector3d(noise.dx2, noise.dx1, 0.0);
    const Eigen::Vector3d finish = rotate_bloch(q.bloch_vector(), perturbed);
    return 0.5 * (1.0 - finish.dot(target));
}

MonteCarloEstimate noisy_obe_error(const QubitSpec& q, const PulseParams& p, int samples,
                                   std::uint64_t seed) {
    if (samples < 1000) throw std::invalid_argument("noisy_obe_error: samples must be >= 1000");
    p.validate();
    double mean = 0.0;
    double m2 = 0.0;
    for (int i = 0; i < samples; ++i) {
        const NoiseDraw noise = draw_noise(p.r, p.phi, seed, static_cast<std::uint64_t>(i));
        const double x = single_shot_error(q, p, noise);
        const double delta = x - mean;
        mean += delta / (i + 1);
        m2 += delta * (x - mean);
    }
    const double variance = m2 / (samples - 1);
    return {mean, std::sqrt(variance / samples), samples};
}

}  // namespace sqpulse
