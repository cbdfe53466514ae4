#pragma once

#include <Eigen/Dense>
#include <memory>
#include <mutex>
#include <random>
#include <string>

#include "wfprop/state.hpp"

namespace wfprop {

// Dense Hermitian operator used as an exact-evolution test backend.
class DenseHamiltonian : public HermitianOperator {
   public:
    // Symmetrizes (M + M^H)/2 and requires the residual against the input to be
    // within max-norm 1e-12 relative to the matrix scale.
    explicit DenseHamiltonian(Eigen::MatrixXcd M);

    // Skips symmetrization entirely; exists so the oracle suite can prove the
    // Hermiticity battery notices a corrupted matrix.
    static DenseHamiltonian unchecked(Eigen::MatrixXcd M);

    const Eigen::MatrixXcd& matrix() const { return M_; }

    // Enclosing disc-union bounds on the real spectrum.
    std::pair<double, double> gershgorin_bounds() const;

    // Q exp(-i Lambda t) Q^H psi via full eigendecomposition (cached).
    WaveState exact_evolve(const WaveState& psi, double t) const;

   protected:
    void apply_impl(const WaveState& in, WaveState& out) const override;

   private:
    struct unchecked_tag {};
    DenseHamiltonian(Eigen::MatrixXcd M, unchecked_tag);
    void ensure_eig() const;

    Eigen::MatrixXcd M_;
    mutable std::mutex eig_mutex_;
    mutable bool eig_done_ = false;
    mutable Eigen::VectorXd evals_;
    mutable Eigen::MatrixXcd evecs_;
};

// Spectrum scaled so max |eigenvalue| == radius.
Eigen::MatrixXcd random_hermitian(int n, double radius, std::mt19937_64& rng);

WaveState random_state(std::size_t dim, std::mt19937_64& rng);

// Text format: first line n, then n*n whitespace-separated "re im" pairs, row-major.
Eigen::MatrixXcd load_dense_text(const std::string& path);
void save_dense_text(const Eigen::MatrixXcd& M, const std::string& path);

Eigen::VectorXcd to_eigen(const WaveState& s);
WaveState from_eigen(const Eigen::VectorXcd& v);

}  // namespace wfprop
