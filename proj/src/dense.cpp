#include "wfprop/dense.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace wfprop {

namespace {
double max_abs(const Eigen::MatrixXcd& M) { return M.cwiseAbs().maxCoeff(); }
}  // namespace

DenseHamiltonian::DenseHamiltonian(Eigen::MatrixXcd M)
    : HermitianOperator(static_cast<std::size_t>(M.rows())), M_(std::move(M)) {
    if (M_.rows() != M_.cols()) throw std::invalid_argument("dense: matrix not square");
    Eigen::MatrixXcd sym = (M_ + M_.adjoint()) / 2.0;
    double scale = std::max(1.0, max_abs(sym));
    if (max_abs(M_ - sym) > 1e-12 * scale)
        throw std::invalid_argument("dense: matrix not Hermitian within 1e-12");
    M_ = std::move(sym);
}

DenseHamiltonian::DenseHamiltonian(Eigen::MatrixXcd M, unchecked_tag)
    : HermitianOperator(static_cast<std::size_t>(M.rows())), M_(std::move(M)) {}

DenseHamiltonian DenseHamiltonian::unchecked(Eigen::MatrixXcd M) {
    return DenseHamiltonian(std::move(M), unchecked_tag{});
}

void DenseHamiltonian::apply_impl(const WaveState& in, WaveState& out) const {
    Eigen::Map<const Eigen::VectorXcd> vin(in.amp.data(), in.dim());
    Eigen::Map<Eigen::VectorXcd> vout(out.amp.data(), out.dim());
    vout = M_ * vin;
}

std::pair<double, double> DenseHamiltonian::gershgorin_bounds() const {
    double lo = 0.0, hi = 0.0;
    for (Eigen::Index i = 0; i < M_.rows(); ++i) {
        double center = M_(i, i).real();
        double radius = 0.0;
        for (Eigen::Index j = 0; j < M_.cols(); ++j)
            if (j != i) radius += std::abs(M_(i, j));
        if (i == 0 || center - radius < lo) lo = center - radius;
        if (i == 0 || center + radius > hi) hi = center + radius;
    }
    return {lo, hi};
}

void DenseHamiltonian::ensure_eig() const {
    std::lock_guard<std::mutex> lock(eig_mutex_);
    if (eig_done_) return;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M_);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("dense: eigendecomposition failed");
    evals_ = es.eigenvalues();
    evecs_ = es.eigenvectors();
    eig_done_ = true;
}

WaveState DenseHamiltonian::exact_evolve(const WaveState& psi, double t) const {
    if (psi.dim() != dim()) throw std::invalid_argument("exact_evolve: dimension mismatch");
    ensure_eig();
    Eigen::Map<const Eigen::VectorXcd> vin(psi.amp.data(), psi.dim());
    Eigen::VectorXcd y = evecs_.adjoint() * vin;
    for (Eigen::Index i = 0; i < y.size(); ++i)
        y(i) *= std::exp(cplx(0.0, -evals_(i) * t));
    return from_eigen(evecs_ * y);
}

Eigen::MatrixXcd random_hermitian(int n, double radius, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::MatrixXcd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = cplx(nd(rng), nd(rng));
    A = (A + A.adjoint()).eval() / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
    double top = std::max(std::abs(es.eigenvalues()(0)),
                          std::abs(es.eigenvalues()(n - 1)));
    A *= radius / top;
    return A;
}

WaveState random_state(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    WaveState s(dim);
    for (std::size_t i = 0; i < dim; ++i) s[i] = cplx(nd(rng), nd(rng));
    normalize(s);
    return s;
}

Eigen::MatrixXcd load_dense_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    int n = 0;
    in >> n;
    if (n <= 0) throw std::runtime_error("bad dimension in " + path);
    Eigen::MatrixXcd M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double re = 0.0, im = 0.0;
            if (!(in >> re >> im)) throw std::runtime_error("truncated matrix in " + path);
            M(i, j) = cplx(re, im);
        }
    return M;
}

void save_dense_text(const Eigen::MatrixXcd& M, const std::string& path) {
    std::ofstream out(path);
    out << M.rows() << "\n" << std::setprecision(17);
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j)
            out << M(i, j).real() << " " << M(i, j).imag()
                << (j + 1 == M.cols() ? "" : " ");
        out << "\n";
    }
}

Eigen::VectorXcd to_eigen(const WaveState& s) {
    return Eigen::Map<const Eigen::VectorXcd>(s.amp.data(), s.dim());
}

WaveState from_eigen(const Eigen::VectorXcd& v) {
    WaveState s(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) s[i] = v(i);
    return s;
}

}  // namespace wfprop
