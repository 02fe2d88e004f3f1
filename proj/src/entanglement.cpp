#include "sqpulse/entanglement.hpp"

#include "sqpulse/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sqpulse {

namespace {

Eigen::Index field_dim_of(Eigen::Index total) {
    if (total < 4 || total % 2 != 0) {
        throw std::invalid_argument("expected a state on atom (2) x field (>= 2)");
    }
    return total / 2;
}

}  // namespace

Eigen::Matrix2cd atom_marginal(const ComplexVector& psi) {
    const Eigen::Index fock = field_dim_of(psi.size());
    const ComplexMatrix rho = psi * psi.adjoint();
    return partial_trace(rho, 2, fock, Subsystem::A);
}

Eigen::Matrix2cd atom_marginal(const ComplexMatrix& rho) {
    const Eigen::Index fock = field_dim_of(rho.rows());
    return partial_trace(rho, 2, fock, Subsystem::A);
}

double truncation_weight(const ComplexVector& psi) {
    const Eigen::Index fock = field_dim_of(psi.size());
    double kept = 0.0;
    for (Eigen::Index a = 0; a < 2; ++a) {
        for (Eigen::Index n = 0; n < std::min<Eigen::Index>(2, fock); ++n) {
            kept += std::norm(psi(a * fock + n));
        }
    }
    return std::max(0.0, 1.0 - kept);
}

double truncation_weight(const ComplexMatrix& rho) {
    const Eigen::Index fock = field_dim_of(rho.rows());
    double kept = 0.0;
    for (Eigen::Index a = 0; a < 2; ++a) {
        for (Eigen::Index n = 0; n < std::min<Eigen::Index>(2, fock); ++n) {
            kept += rho(a * fock + n, a * fock + n).real();
        }
    }
    return std::max(0.0, 1.0 - kept);
}

TangleValue tangle_pure(const ComplexVector& psi) {
    field_dim_of(psi.size());  // shape gate
    if (std::abs(psi.norm() - 1.0) > 1e-8) {
        throw std::invalid_argument("tangle_pure: state must be normalized");
    }
    const Eigen::Matrix2cd rho_atom = atom_marginal(psi);
    const double purity = (rho_atom * rho_atom).trace().real();
    double value = 2.0 * (1.0 - purity);
    if (value < -1e-9 || value > 1.0 + 1e-9) {
        std::ostringstream msg;
        msg << "tangle_pure: value " << value << " outside [0,1]";
        throw numeric_error(numeric_error::kind::non_finite, msg.str());
    }
    value = std::clamp(value, 0.0, 1.0 + 1e-12);
    return {value, TangleMethod::pure_formula, 0.0};
}

TangleValue tangle_mixed(const ComplexMatrix& rho) {
    const Eigen::Index fock = field_dim_of(rho.rows());
    if (rho.rows() != rho.cols()) {
        throw std::invalid_argument("tangle_mixed: matrix must be square");
    }
    validate_density(rho);

    // project onto {g,e} x {|0>,|1>}: basis order (g0, g1, e0, e1)
    const std::array<Eigen::Index, 4> idx = {0, 1, fock, fock + 1};
    Eigen::Matrix4cd rho4;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            rho4(i, j) = rho(idx[i], idx[j]);
        }
    }
    const double kept = rho4.trace().real();
    const double discard = std::max(0.0, 1.0 - kept);
    if (discard > kTruncationDiscardLimit) {
        std::ostringstream msg;
        msg << "tangle_mixed: population " << discard
            << " outside the two-level field subspace exceeds " << kTruncationDiscardLimit;
        throw numeric_error(numeric_error::kind::truncation, msg.str());
    }
    rho4 /= kept;

    // Wootters spin flip: the square roots of the eigenvalues of
    // rho (sy x sy) rho* (sy x sy) equal the singular values of
    // sqrt(rho) (sy x sy) sqrt(rho)*, which is the stable way to get them
    // (a zero eigenvalue perturbed by machine epsilon would otherwise
    // surface as a 1e-8 root).
    Eigen::Matrix2cd sy;
    sy << 0.0, -kI, kI, 0.0;
    const Eigen::Matrix4cd flip = kron(sy, sy);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(rho4);
    const Eigen::Vector4d clamped = solver.eigenvalues().cwiseMax(0.0);
    const Eigen::Matrix4cd sqrt_rho = solver.eigenvectors() *
                                      clamped.cwiseSqrt().cast<complexd>().asDiagonal() *
                                      solver.eigenvectors().adjoint();
    const Eigen::Matrix4cd m = sqrt_rho * flip * sqrt_rho.conjugate();
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(m);
    const Eigen::Vector4d roots = svd.singularValues();  // descending

    const double concurrence = std::max(0.0, roots(0) - roots(1) - roots(2) - roots(3));
    return {concurrence * concurrence, TangleMethod::wootters_mixed, discard};
}

double error_probability(const Eigen::Matrix2cd& rho_atom, const Eigen::Vector2cd& eta) {
    if (max_abs(ComplexMatrix(rho_atom - rho_atom.adjoint())) > 1e-8) {
        throw std::invalid_argument("error_probability: rho_atom must be Hermitian");
    }
    if (std::abs(rho_atom.trace().real() - 1.0) > 1e-8) {
        throw std::invalid_argument("error_probability: rho_atom must have unit trace");
    }
    if (std::abs(eta.norm() - 1.0) > 1e-8) {
        throw std::invalid_argument("error_probability: target state must be normalized");
    }
    const double fidelity = std::real(eta.dot(rho_atom * eta));
    return std::clamp(1.0 - fidelity, 0.0, 1.0);
}

double average_error(const PulseParams& p, Engine engine, int steps) {
    if (engine == Engine::perturbative) {
        throw std::invalid_argument("average_error: engine must be unitary or lindblad");
    }
    p.validate();
    double sum = 0.0;
    for (const QubitSpec& q : axial_states()) {
        const Eigen::Vector2cd eta = target_state(q, p);
        Eigen::Matrix2cd rho_atom;
        if (engine == Engine::unitary) {
            rho_atom = atom_marginal(evolve_unitary(product_state(q, p), p));
        } else {
            const ComplexVector psi0 = product_state(q, p);
            const ComplexMatrix rho0 = psi0 * psi0.adjoint();
            rho_atom = atom_marginal(evolve_lindblad(rho0, p, steps));
        }
        sum += error_probability(rho_atom, eta);
    }
    return sum / 6.0;
}

}  // namespace sqpulse
