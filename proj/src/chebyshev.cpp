#include "wfprop/chebyshev.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace wfprop {

namespace {
constexpr double kRescaleLimit = 1e250;
constexpr double kTailLimit = 1e-16;
}  // namespace

std::vector<double> bessel_j_array(double x, int kmax) {
    if (kmax < 0) {
        throw std::invalid_argument("bessel_j_array: order must be non-negative");
    }
    if (!(x >= 0.0)) {
        throw std::invalid_argument("bessel_j_array: argument must be non-negative");
    }
    std::vector<double> out(static_cast<std::size_t>(kmax) + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }

    // Start far enough above both kmax and the turning point that the seed's
    // contamination of the minimal solution has decayed below target accuracy.
    const int start = std::max(kmax, static_cast<int>(std::ceil(x))) + 40 +
                      static_cast<int>(std::ceil(12.0 * std::cbrt(std::max(x, 1.0))));

    double fp = 0.0;      // value at index j+1
    double fc = 1e-300;   // value at index j, seeded at j = start
    double sum = (start % 2 == 0) ? 2.0 * fc : 0.0;
    for (int j = start; j >= 1; --j) {
        const double fm = (2.0 * j / x) * fc - fp;
        fp = fc;
        fc = fm;
        if (std::abs(fc) > kRescaleLimit) {
            fp *= 1e-250;
            fc *= 1e-250;
            sum *= 1e-250;
            for (double& v : out) v *= 1e-250;
        }
        const int idx = j - 1;
        if (idx <= kmax) out[static_cast<std::size_t>(idx)] = fc;
        if (idx % 2 == 0) sum += 2.0 * fc;
    }
    sum -= fc;  // even-index sum counted f_0 twice; identity needs it once
    for (double& v : out) v /= sum;
    return out;
}

double bessel_j(int order, double x) {
    if (order < 0) {
        throw std::invalid_argument("bessel_j: order must be non-negative");
    }
    return bessel_j_array(x, order)[static_cast<std::size_t>(order)];
}

int suggest_terms(double x) {
    if (!(x >= 0.0)) {
        throw std::invalid_argument("suggest_terms: argument must be non-negative");
    }
    return static_cast<int>(std::ceil(x + 12.0 * std::cbrt(x) + 60.0));
}

ChebyshevPlan ChebyshevPlan::make(double e_min, double e_max, double dT, int n_terms,
                                  bool enforce_tail) {
    if (!(e_max > e_min)) {
        throw std::invalid_argument("chebyshev plan: spectral interval is empty");
    }
    if (n_terms < 2) {
        throw std::invalid_argument("chebyshev plan: needs at least two terms");
    }
    if (!(dT >= 0.0)) {
        throw std::invalid_argument("chebyshev plan: step must be non-negative");
    }

    ChebyshevPlan plan;
    plan.e_min = e_min;
    plan.e_max = e_max;
    plan.dT = dT;
    plan.n_terms = n_terms;

    const double x = plan.argument();
    const std::vector<double> J = bessel_j_array(x, n_terms - 1);
    // powers of -i cycle with period four
    static const cplx cycle[4] = {cplx(1.0, 0.0), cplx(0.0, -1.0), cplx(-1.0, 0.0),
                                  cplx(0.0, 1.0)};
    plan.coefficients.resize(static_cast<std::size_t>(n_terms));
    double max_mag = 0.0;
    for (int k = 0; k < n_terms; ++k) {
        const double fac = (k == 0) ? 1.0 : 2.0;
        plan.coefficients[static_cast<std::size_t>(k)] =
            fac * cycle[k % 4] * J[static_cast<std::size_t>(k)];
        max_mag = std::max(max_mag, std::abs(plan.coefficients[static_cast<std::size_t>(k)]));
    }
    plan.tail_ratio = std::abs(plan.coefficients.back()) / max_mag;

    if (enforce_tail && plan.tail_ratio > kTailLimit) {
        std::ostringstream msg;
        msg << "chebyshev plan: truncation tail " << plan.tail_ratio
            << " exceeds 1e-16 at argument " << x << "; use at least "
            << suggest_terms(x) << " terms";
        throw std::runtime_error(msg.str());
    }
    return plan;
}

WaveState chebyshev_apply(const HermitianOperator& H, const WaveState& psi,
                          const ChebyshevPlan& plan) {
    const double a = plan.half_width();
    const double b = plan.center();
    const cplx* c = plan.coefficients.data();

    auto scaled_apply = [&](const WaveState& v) {
        WaveState w = H.apply(v);
        for (std::size_t i = 0; i < w.dim(); ++i) {
            w[i] = (w[i] - b * v[i]) / a;
        }
        return w;
    };

    WaveState phi0 = psi;
    WaveState acc(psi.dim());
    for (std::size_t i = 0; i < psi.dim(); ++i) acc[i] = c[0] * phi0[i];

    WaveState phi1 = scaled_apply(phi0);
    for (std::size_t i = 0; i < psi.dim(); ++i) acc[i] += c[1] * phi1[i];

    for (int k = 2; k < plan.n_terms; ++k) {
        WaveState next = scaled_apply(phi1);
        for (std::size_t i = 0; i < psi.dim(); ++i) {
            next[i] = 2.0 * next[i] - phi0[i];
            acc[i] += c[k] * next[i];
        }
        phi0 = std::move(phi1);
        phi1 = std::move(next);
    }

    const cplx phase = std::exp(cplx(0.0, -b * plan.dT));
    for (std::size_t i = 0; i < acc.dim(); ++i) acc[i] *= phase;
    return acc;
}

WaveState chebyshev_propagate(const HermitianOperator& H, const WaveState& psi,
                              const ChebyshevPlan& plan) {
    const double before = norm(psi);
    WaveState out = chebyshev_apply(H, psi, plan);
    const double drift = std::abs(norm(out) - before);
    if (drift > 1e-8) {
        std::ostringstream msg;
        msg << "chebyshev propagate: norm drift " << drift
            << "; spectral interval [" << plan.e_min << ", " << plan.e_max
            << "] does not appear to enclose the spectrum";
        throw std::runtime_error(msg.str());
    }
    return out;
}

}  // namespace wfprop
