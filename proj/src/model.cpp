#include "sqpulse/model.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sqpulse {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        throw std::invalid_argument(std::string("PulseParams: ") + name + " must be finite");
    }
}

}  // namespace

double PulseParams::alpha_magnitude() const {
    return rotation_angle / (2.0 * std::sqrt(kappa_tau));
}

double PulseParams::kappa_over_gamma() const {
    if (gamma_tau == 0.0) return std::numeric_limits<double>::infinity();
    return kappa_tau / gamma_tau;
}

void PulseParams::validate(double lambda_max) const {
    require_finite(r, "r");
    require_finite(phi, "phi");
    require_finite(theta, "theta");
    require_finite(kappa_tau, "kappa_tau");
    require_finite(gamma_tau, "gamma_tau");
    require_finite(rotation_angle, "rotation_angle");
    if (r < 0.0) throw std::invalid_argument("PulseParams: squeezing magnitude r must be >= 0");
    if (kappa_tau < 0.0) throw std::invalid_argument("PulseParams: kappa_tau must be >= 0");
    if (gamma_tau < 0.0) throw std::invalid_argument("PulseParams: gamma_tau must be >= 0");
    if (rotation_angle < 0.0) {
        throw std::invalid_argument("PulseParams: rotation_angle must be >= 0");
    }
    if (n_max < 2) throw std::invalid_argument("PulseParams: n_max must be >= 2");
    if (kappa_tau >= 1.0) {
        throw std::invalid_argument(
            "PulseParams: kappa_tau must be < 1 (Markovian pulse-mode regime)");
    }
    const double l = lambda();
    if (l > lambda_max && !allow_unsafe_lambda) {
        std::ostringstream msg;
        msg << "PulseParams: lambda = cosh(r)*sqrt(kappa_tau) = " << l << " exceeds lambda_max = "
            << lambda_max << "; the perturbative regime is not trusted here. "
            << "Set allow_unsafe_lambda to proceed anyway.";
        throw std::invalid_argument(msg.str());
    }
}

PulseParams params_from_ratios(double r, double phi, double theta, double kappa_over_gamma,
                               double gamma_tau, double rotation_angle, int n_max,
                               bool allow_unsafe_lambda) {
    if (!(gamma_tau > 0.0)) {
        throw std::invalid_argument("params_from_ratios: gamma_tau must be > 0");
    }
    if (kappa_over_gamma < 0.0) {
        throw std::invalid_argument("params_from_ratios: kappa_over_gamma must be >= 0");
    }
    PulseParams p;
    p.r = r;
    p.phi = phi;
    p.theta = theta;
    p.kappa_tau = kappa_over_gamma * gamma_tau;
    p.gamma_tau = gamma_tau;
    p.rotation_angle = rotation_angle;
    p.n_max = n_max;
    p.allow_unsafe_lambda = allow_unsafe_lambda;
    p.validate();
    return p;
}

double parse_angle(const std::string& text) {
    std::string s = text;
    // strip spaces
    std::string compact;
    for (char c : s) {
        if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
    }
    if (compact.empty()) throw std::invalid_argument("parse_angle: empty angle");

    const auto pos = compact.find("pi");
    if (pos == std::string::npos) {
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(compact, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("parse_angle: cannot parse '" + text + "'");
        }
        if (used != compact.size()) {
            throw std::invalid_argument("parse_angle: cannot parse '" + text + "'");
        }
        return value;
    }

    // forms: [COEFF]pi[/DIV], with optional leading sign on COEFF
    const std::string head = compact.substr(0, pos);
    const std::string tail = compact.substr(pos + 2);
    try {
        double coeff = 1.0;
        if (head == "-") {
            coeff = -1.0;
        } else if (!head.empty() && head != "+") {
            std::size_t used = 0;
            coeff = std::stod(head, &used);
            if (used != head.size()) {
                throw std::invalid_argument("trailing junk");
            }
        }
        double divisor = 1.0;
        if (!tail.empty()) {
            if (tail[0] != '/') {
                throw std::invalid_argument("expected /");
            }
            std::size_t used = 0;
            divisor = std::stod(tail.substr(1), &used);
            if (used != tail.size() - 1 || divisor == 0.0) {
                throw std::invalid_argument("bad divisor");
            }
        }
        return coeff * kPi / divisor;
    } catch (const std::exception&) {
        throw std::invalid_argument("parse_angle: cannot parse '" + text + "'");
    }
}

QubitSpec QubitSpec::parse(const std::string& text) {
    if (text == "g") return ground();
    if (text == "e") return excited();
    if (text.rfind("eq:", 0) == 0) {
        return equatorial(parse_angle(text.substr(3)));
    }
    if (text.rfind("bloch:", 0) == 0) {
        const std::string rest = text.substr(6);
        const auto sep = rest.find(':');
        if (sep == std::string::npos) {
            throw std::invalid_argument("QubitSpec: expected bloch:POLAR:AZIMUTH, got '" + text +
                                        "'");
        }
        return bloch(parse_angle(rest.substr(0, sep)), parse_angle(rest.substr(sep + 1)));
    }
    throw std::invalid_argument("QubitSpec: unknown state '" + text +
                                "' (expected g, e, eq:ANGLE or bloch:POLAR:AZIMUTH)");
}

Eigen::Vector2cd QubitSpec::amplitudes() const {
    Eigen::Vector2cd v;
    switch (kind) {
        case Kind::ground:
            v << 1.0, 0.0;
            return v;
        case Kind::excited:
            v << 0.0, 1.0;
            return v;
        case Kind::equatorial:
            v << std::exp(kI * theta_a) / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
            return v;
        case Kind::general:
            v << std::exp(kI * azimuth) * std::sin(0.5 * polar), std::cos(0.5 * polar);
            return v;
    }
    throw std::logic_error("QubitSpec: invalid kind");
}

Eigen::Vector3d QubitSpec::bloch_vector() const {
    const Eigen::Vector2cd a = amplitudes();
    const complexd cross = std::conj(a(0)) * a(1);
    return {2.0 * cross.real(), -2.0 * cross.imag(), std::norm(a(1)) - std::norm(a(0))};
}

std::string QubitSpec::label() const {
    std::ostringstream out;
    out.precision(12);
    switch (kind) {
        case Kind::ground:
            return "g";
        case Kind::excited:
            return "e";
        case Kind::equatorial:
            out << "eq:" << theta_a;
            return out.str();
        case Kind::general:
            out << "bloch:" << polar << ":" << azimuth;
            return out.str();
    }
    throw std::logic_error("QubitSpec: invalid kind");
}

std::array<QubitSpec, 6> axial_states() {
    return {QubitSpec::equatorial(0.0),        QubitSpec::equatorial(kPi),
            QubitSpec::equatorial(0.5 * kPi),  QubitSpec::equatorial(-0.5 * kPi),
            QubitSpec::excited(),              QubitSpec::ground()};
}

Eigen::Matrix2cd sigma_plus() {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(1, 0) = 1.0;  // |e><g|
    return m;
}

Eigen::Matrix2cd sigma_minus() {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 1) = 1.0;  // |g><e|
    return m;
}

ComplexMatrix lowering_operator(Eigen::Index fock_dim) {
    if (fock_dim < 1) throw std::invalid_argument("lowering_operator: dimension must be >= 1");
    ComplexMatrix a = ComplexMatrix::Zero(fock_dim, fock_dim);
    for (Eigen::Index n = 1; n < fock_dim; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

ComplexMatrix build_W(const PulseParams& p) {
    p.validate();
    const ComplexMatrix a = lowering_operator(p.fock_dim());
    const ComplexMatrix a_dag = a.adjoint();
    const complexd squeeze = std::exp(-2.0 * kI * p.phi) * p.tanh_r();
    const ComplexMatrix field_raise = a - squeeze * a_dag;
    const ComplexMatrix field_lower = a_dag - std::conj(squeeze) * a;
    return kron(sigma_plus(), field_raise) - kron(sigma_minus(), field_lower);
}

ComplexMatrix build_H_S(const PulseParams& p) {
    p.validate();
    const Eigen::Matrix2cd drive =
        kI * (0.5 * p.rotation_angle) *
        (std::exp(kI * p.theta) * sigma_plus() - std::exp(-kI * p.theta) * sigma_minus());
    const ComplexMatrix identity_field =
        ComplexMatrix::Identity(p.fock_dim(), p.fock_dim());
    return kI * p.lambda() * build_W(p) + kron(drive, identity_field);
}

Eigen::Matrix2cd classical_rotation(double xi, double theta, double angle) {
    // The generator G = e^{i theta} sigma_+ - e^{-i theta} sigma_- squares to -1,
    // so exp(beta G) = cos(beta) + sin(beta) G.
    const double beta = 0.5 * angle * xi;
    const complexd phase = std::exp(kI * theta);
    Eigen::Matrix2cd u;
    u << std::cos(beta), -std::conj(phase) * std::sin(beta),
         phase * std::sin(beta), std::cos(beta);
    return u;
}

Eigen::Vector2cd target_state(const QubitSpec& q, const PulseParams& p) {
    Eigen::Vector2cd eta = classical_rotation(1.0, p.theta, p.rotation_angle) * q.amplitudes();
    return eta / eta.norm();
}

}  // namespace sqpulse
