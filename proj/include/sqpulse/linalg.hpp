// Dense complex linear-algebra kernel shared by every engine: Kronecker
// products, matrix exponential, partial traces and eigendecompositions of
// small atom⊗field operators. All functions are pure; inputs are validated,
// not assumed.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <utility>

namespace sqpulse {

using complexd = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr complexd kI{0.0, 1.0};

// Which tensor factor survives a partial trace. A is the slow (left) factor,
// B the fast (right) one: a product index reads i_A * dim_b + i_B.
enum class Subsystem { A, B };

// Kronecker product, dimensions (ra*rb) x (ca*cb).
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    using Scalar = typename Eigen::ScalarBinaryOpTraits<typename DerivedA::Scalar,
                                                        typename DerivedB::Scalar>::ReturnType;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                              a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b.derived().template cast<Scalar>();
        }
    }
    return out;
}

// Largest entry magnitude; zero for empty matrices.
double max_abs(const ComplexMatrix& a);

// exp(a) for a square matrix.
ComplexMatrix matrix_exp(const ComplexMatrix& a);

// Reduced matrix of the kept factor of a (dim_a*dim_b) square matrix.
ComplexMatrix partial_trace(const ComplexMatrix& rho, Eigen::Index dim_a, Eigen::Index dim_b,
                            Subsystem keep);

// Ascending real eigenvalues and matching eigenvector columns of a Hermitian
// matrix. Inputs farther than hermiticity_tol from Hermitian are rejected.
std::pair<Eigen::VectorXd, ComplexMatrix> eig_hermitian(const ComplexMatrix& a,
                                                        double hermiticity_tol = 1e-10);

// Eigenvalues of a general square matrix, no ordering guarantee.
ComplexVector eigenvalues_general(const ComplexMatrix& a);

}  // namespace sqpulse
