#include "wfprop/subspace.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace wfprop {

using cplx = std::complex<double>;

CholeskyResult thresholded_cholesky(const Eigen::MatrixXcd& S, double threshold) {
    const Eigen::Index n = S.rows();
    if (S.cols() != n) throw std::invalid_argument("cholesky: matrix not square");
    Eigen::MatrixXcd A = S;
    CholeskyResult res;
    res.L = Eigen::MatrixXcd::Zero(n, n);
    res.threshold = threshold;
    const double guard = -10.0 * std::max(threshold, 1e-300);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double d = A(j, j).real();
        if (d < threshold) {
            if (d < guard)
                throw std::runtime_error(
                    "cholesky: residual pivot below the non-PSD guard; overlap matrix "
                    "is numerically indefinite");
            res.dependent.push_back(static_cast<int>(j));
            continue;
        }
        const double ljj = std::sqrt(d);
        res.L(j, j) = ljj;
        for (Eigen::Index i = j + 1; i < n; ++i) res.L(i, j) = A(i, j) / ljj;
        for (Eigen::Index k = j + 1; k < n; ++k) {
            const cplx lkj_conj = std::conj(res.L(k, j));
            for (Eigen::Index i = k; i < n; ++i) A(i, k) -= res.L(i, j) * lkj_conj;
        }
    }
    return res;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXcd> hermitian_eig(const Eigen::MatrixXcd& A) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eig: eigensolver failed to converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

Eigen::VectorXcd evolve_subspace(const Eigen::MatrixXcd& S, const Eigen::MatrixXcd& Hm,
                                 const Eigen::VectorXcd& C0, double dt) {
    const Eigen::Index n = S.rows();
    if (Hm.rows() != n || Hm.cols() != n || S.cols() != n || C0.size() != n)
        throw std::invalid_argument("evolve_subspace: dimension mismatch");

    // Plain Cholesky with a hard positivity guard; dependent directions must
    // already have been resolved by the caller.
    Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(n, n);
    {
        Eigen::MatrixXcd A = S;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double d = A(j, j).real();
            if (d < 1e-14)
                throw std::runtime_error(
                    "evolve_subspace: overlap matrix singular; dependent states not resolved");
            const double ljj = std::sqrt(d);
            L(j, j) = ljj;
            for (Eigen::Index i = j + 1; i < n; ++i) L(i, j) = A(i, j) / ljj;
            for (Eigen::Index k = j + 1; k < n; ++k) {
                const cplx lkj_conj = std::conj(L(k, j));
                for (Eigen::Index i = k; i < n; ++i) A(i, k) -= L(i, j) * lkj_conj;
            }
        }
    }

    auto lower = L.triangularView<Eigen::Lower>();
    Eigen::MatrixXcd X = lower.solve(Hm);                      // L^-1 Hm
    Eigen::MatrixXcd A = lower.solve(X.adjoint()).adjoint();   // L^-1 Hm L^-H
    A = ((A + A.adjoint()) / 2.0).eval();

    auto [lam, Q] = hermitian_eig(A);
    Eigen::VectorXcd y = Q.adjoint() * (L.adjoint() * C0);
    for (Eigen::Index i = 0; i < n; ++i) y(i) *= std::exp(cplx(0.0, -lam(i) * dt));
    Eigen::VectorXcd z = Q * y;
    return L.adjoint().triangularView<Eigen::Upper>().solve(z);  // L^-H (Q y)
}

}  // namespace wfprop
