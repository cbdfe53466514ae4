#pragma once

#include <vector>

#include "wfprop/state.hpp"

namespace wfprop {

// J_0..J_kmax at x >= 0 by downward recurrence with sum-rule normalization.
std::vector<double> bessel_j_array(double x, int kmax);
double bessel_j(int order, double x);

// Terms needed for the expansion tail of exp(-i a dT) at argument x = a*dT to
// fall below machine relevance.
int suggest_terms(double x);

struct ChebyshevPlan {
    double e_min = 0.0, e_max = 1.0;
    double dT = 0.0;
    int n_terms = 2;
    std::vector<cplx> coefficients;
    double tail_ratio = 0.0;  // |c_last| / max_k |c_k|

    double center() const { return 0.5 * (e_max + e_min); }
    double half_width() const { return 0.5 * (e_max - e_min); }
    double argument() const { return half_width() * dT; }

    // enforce_tail=false skips the truncation-quality gate; used only for
    // deliberate under-resolved diagnostics.
    static ChebyshevPlan make(double e_min, double e_max, double dT, int n_terms,
                              bool enforce_tail = true);
};

// One expansion application: exactly n_terms-1 applications of H, no guard.
WaveState chebyshev_apply(const HermitianOperator& H, const WaveState& psi,
                          const ChebyshevPlan& plan);

// Guarded step: raises if the result norm drifts by more than 1e-8, which
// signals spectral bounds that do not enclose the spectrum.
WaveState chebyshev_propagate(const HermitianOperator& H, const WaveState& psi,
                              const ChebyshevPlan& plan);

}  // namespace wfprop
