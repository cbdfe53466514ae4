#pragma once

#include <atomic>
#include <complex>
#include <cstddef>
#include <vector>

namespace wfprop {

using cplx = std::complex<double>;

// Flat complex amplitude vector; grid states are row-major (ix*ny + iy).
struct WaveState {
    std::vector<cplx> amp;

    WaveState() = default;
    explicit WaveState(std::size_t dim) : amp(dim, cplx(0.0, 0.0)) {}
    explicit WaveState(std::vector<cplx> a) : amp(std::move(a)) {}

    std::size_t dim() const { return amp.size(); }
    cplx& operator[](std::size_t i) { return amp[i]; }
    const cplx& operator[](std::size_t i) const { return amp[i]; }
};

// <u|v> with the conjugate in the first slot.
cplx inner(const WaveState& u, const WaveState& v);
double norm(const WaveState& v);
double distance(const WaveState& u, const WaveState& v);
// v <- v / ||v||; throws on (near-)zero input.
void normalize(WaveState& v);

WaveState linear_combination(const std::vector<cplx>& coeffs,
                             const std::vector<const WaveState*>& states);
WaveState linear_combination(const std::vector<cplx>& coeffs,
                             const std::vector<WaveState>& states);

// y += a*x
void axpy(cplx a, const WaveState& x, WaveState& y);
void scale(WaveState& v, cplx a);

class HermitianOperator {
   public:
    explicit HermitianOperator(std::size_t dim) : dim_(dim), counter_(0) {}
    virtual ~HermitianOperator() = default;

    // One application of H; increments the matvec counter by exactly 1.
    WaveState apply(const WaveState& psi) const;

    std::size_t dim() const { return dim_; }
    long long matvecs() const { return counter_.load(); }

   protected:
    virtual void apply_impl(const WaveState& in, WaveState& out) const = 0;

   private:
    std::size_t dim_;
    mutable std::atomic<long long> counter_;
};

}  // namespace wfprop
