#include "wfprop/lanczos.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace wfprop {

WaveState lanczos_step(const HermitianOperator& H, const WaveState& psi, int mu, double dt) {
    if (mu < 1) throw std::invalid_argument("lanczos_step: budget must be >= 1");
    const double nrm = norm(psi);
    if (nrm < 1e-300) throw std::invalid_argument("lanczos_step: zero input state");

    std::vector<WaveState> q;
    q.reserve(mu);
    q.push_back(psi);
    scale(q[0], cplx(1.0 / nrm, 0.0));

    std::vector<double> alpha, beta;
    for (int j = 0; j < mu; ++j) {
        WaveState w = H.apply(q[j]);
        const double a = inner(q[j], w).real();
        alpha.push_back(a);
        axpy(cplx(-a, 0.0), q[j], w);
        if (j > 0) axpy(cplx(-beta[j - 1], 0.0), q[j - 1], w);
        for (const WaveState& v : q) axpy(-inner(v, w), v, w);
        const double b = norm(w);
        if (j + 1 < mu) {
            if (b < 1e-13) break;  // invariant subspace: result below is exact
            beta.push_back(b);
            scale(w, cplx(1.0 / b, 0.0));
            q.push_back(std::move(w));
        }
    }

    const int k = static_cast<int>(q.size());
    Eigen::VectorXd diag(k), sub(std::max(k - 1, 0));
    for (int i = 0; i < k; ++i) diag(i) = alpha[i];
    for (int i = 0; i + 1 < k; ++i) sub(i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("lanczos_step: tridiagonal eigensolver failed");
    const Eigen::VectorXd& lam = es.eigenvalues();
    const Eigen::MatrixXd& Q = es.eigenvectors();

    std::vector<cplx> c(k, cplx(0.0, 0.0));
    for (int r = 0; r < k; ++r) {
        const cplx phase = std::exp(cplx(0.0, -lam(r) * dt));
        for (int j = 0; j < k; ++j) c[j] += Q(j, r) * phase * Q(0, r);
    }
    for (cplx& cj : c) cj *= nrm;
    return linear_combination(c, q);
}

}  // namespace wfprop
