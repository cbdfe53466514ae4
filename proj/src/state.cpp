#include "wfprop/state.hpp"

#include <cmath>
#include <stdexcept>

namespace wfprop {

cplx inner(const WaveState& u, const WaveState& v) {
    if (u.dim() != v.dim()) throw std::invalid_argument("inner: dimension mismatch");
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < u.dim(); ++i) acc += std::conj(u.amp[i]) * v.amp[i];
    return acc;
}

double norm(const WaveState& v) {
    double acc = 0.0;
    for (const cplx& a : v.amp) acc += std::norm(a);
    return std::sqrt(acc);
}

double distance(const WaveState& u, const WaveState& v) {
    if (u.dim() != v.dim()) throw std::invalid_argument("distance: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < u.dim(); ++i) acc += std::norm(u.amp[i] - v.amp[i]);
    return std::sqrt(acc);
}

void normalize(WaveState& v) {
    double n = norm(v);
    if (n < 1e-300) throw std::invalid_argument("normalize: zero state");
    scale(v, cplx(1.0 / n, 0.0));
}

WaveState linear_combination(const std::vector<cplx>& coeffs,
                             const std::vector<const WaveState*>& states) {
    if (coeffs.empty() || coeffs.size() != states.size())
        throw std::invalid_argument("linear_combination: length mismatch");
    const std::size_t d = states[0]->dim();
    WaveState out(d);
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (states[j]->dim() != d)
            throw std::invalid_argument("linear_combination: state dim mismatch");
        axpy(coeffs[j], *states[j], out);
    }
    return out;
}

WaveState linear_combination(const std::vector<cplx>& coeffs,
                             const std::vector<WaveState>& states) {
    std::vector<const WaveState*> ptrs;
    ptrs.reserve(states.size());
    for (const WaveState& s : states) ptrs.push_back(&s);
    return linear_combination(coeffs, ptrs);
}

void axpy(cplx a, const WaveState& x, WaveState& y) {
    if (x.dim() != y.dim()) throw std::invalid_argument("axpy: dimension mismatch");
    for (std::size_t i = 0; i < x.dim(); ++i) y.amp[i] += a * x.amp[i];
}

void scale(WaveState& v, cplx a) {
    for (cplx& e : v.amp) e *= a;
}

WaveState HermitianOperator::apply(const WaveState& psi) const {
    if (psi.dim() != dim_) throw std::invalid_argument("apply: dimension mismatch");
    WaveState out(dim_);
    apply_impl(psi, out);
    counter_.fetch_add(1, std::memory_order_relaxed);
    return out;
}

}  // namespace wfprop
