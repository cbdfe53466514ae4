#pragma once

#include <Eigen/Dense>
#include <vector>

namespace wfprop {

struct CholeskyResult {
    Eigen::MatrixXcd L;              // lower factor; flagged rows/cols zero
    std::vector<int> dependent;      // flagged column indices, ascending
    double threshold = 0.0;
};

// Left-to-right Cholesky that flags columns whose residual pivot drops below
// `threshold` (relative to the unit diagonal) and excludes them from the
// factorization. A residual pivot below -10*threshold means the input was not
// PSD to working precision and raises instead.
CholeskyResult thresholded_cholesky(const Eigen::MatrixXcd& S, double threshold);

// Eigenvalues ascending, eigenvectors unitary.
std::pair<Eigen::VectorXd, Eigen::MatrixXcd> hermitian_eig(const Eigen::MatrixXcd& A);

// Propagates i S dC/dt = Hm C over dt by exact exponentiation in the
// Cholesky-congruent basis. S must be strictly positive definite.
Eigen::VectorXcd evolve_subspace(const Eigen::MatrixXcd& S, const Eigen::MatrixXcd& Hm,
                                 const Eigen::VectorXcd& C0, double dt);

}  // namespace wfprop
