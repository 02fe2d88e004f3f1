#include "sqpulse/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <sstream>
#include <stdexcept>

namespace sqpulse {

double max_abs(const ComplexMatrix& a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().maxCoeff();
}

ComplexMatrix matrix_exp(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("matrix_exp: input must be square");
    }
    return a.exp();
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, Eigen::Index dim_a, Eigen::Index dim_b,
                            Subsystem keep) {
    if (dim_a < 1 || dim_b < 1) {
        throw std::invalid_argument("partial_trace: factor dimensions must be positive");
    }
    if (rho.rows() != rho.cols() || rho.rows() != dim_a * dim_b) {
        std::ostringstream msg;
        msg << "partial_trace: expected a " << dim_a * dim_b << "x" << dim_a * dim_b
            << " matrix, got " << rho.rows() << "x" << rho.cols();
        throw std::invalid_argument(msg.str());
    }
    if (keep == Subsystem::A) {
        ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
        for (Eigen::Index i = 0; i < dim_a; ++i) {
            for (Eigen::Index j = 0; j < dim_a; ++j) {
                for (Eigen::Index k = 0; k < dim_b; ++k) {
                    out(i, j) += rho(i * dim_b + k, j * dim_b + k);
                }
            }
        }
        return out;
    }
    ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
    for (Eigen::Index k = 0; k < dim_b; ++k) {
        for (Eigen::Index l = 0; l < dim_b; ++l) {
            for (Eigen::Index i = 0; i < dim_a; ++i) {
                out(k, l) += rho(i * dim_b + k, i * dim_b + l);
            }
        }
    }
    return out;
}

std::pair<Eigen::VectorXd, ComplexMatrix> eig_hermitian(const ComplexMatrix& a,
                                                        double hermiticity_tol) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("eig_hermitian: input must be square");
    }
    const double defect = max_abs(a - a.adjoint());
    if (defect > hermiticity_tol) {
        std::ostringstream msg;
        msg << "eig_hermitian: input is not Hermitian (defect " << defect << ", tolerance "
            << hermiticity_tol << ")";
        throw std::invalid_argument(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eig_hermitian: eigendecomposition failed");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexVector eigenvalues_general(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("eigenvalues_general: input must be square");
    }
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigenvalues_general: eigendecomposition failed");
    }
    return solver.eigenvalues();
}

}  // namespace sqpulse
