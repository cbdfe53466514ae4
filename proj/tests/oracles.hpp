#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

// Independent slow-path references used to pin the fast implementations.
namespace oracles {

// Alternating power series in long double; trustworthy for x up to ~10.
inline long double bessel_series(int k, long double x) {
    if (k < 0) throw std::invalid_argument("bessel_series: negative order");
    const long double half = x / 2.0L;
    long double term = 1.0L;
    for (int i = 1; i <= k; ++i) term *= half / i;
    long double sum = term;
    for (int s = 1; s <= 400; ++s) {
        term *= -half * half / (static_cast<long double>(s) * (s + k));
        sum += term;
        if (std::abs(term) < 1e-30L * std::abs(sum) + 1e-4950L) break;
    }
    return sum;
}

// Fixed-step classical RK4 on i S dC/dt = Hm C with dt/substeps resolution.
inline Eigen::VectorXcd rk4_subspace(const Eigen::MatrixXcd& S, const Eigen::MatrixXcd& Hm,
                                     const Eigen::VectorXcd& C0, double dt,
                                     int substeps = 10000) {
    const Eigen::MatrixXcd A =
        std::complex<double>(0.0, -1.0) * S.fullPivLu().solve(Hm);
    const double h = dt / substeps;
    Eigen::VectorXcd c = C0;
    for (int i = 0; i < substeps; ++i) {
        const Eigen::VectorXcd k1 = A * c;
        const Eigen::VectorXcd k2 = A * (c + 0.5 * h * k1);
        const Eigen::VectorXcd k3 = A * (c + 0.5 * h * k2);
        const Eigen::VectorXcd k4 = A * (c + h * k3);
        c += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return c;
}

// Direct O(N^2) transform against e^{+i 2 pi j k / N}.
inline std::vector<std::complex<double>> naive_dft_plus(
    const std::vector<std::complex<double>>& v) {
    const std::size_t n = v.size();
    std::vector<std::complex<double>> out(n);
    const double two_pi = 6.283185307179586476925286766559;
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = two_pi * static_cast<double>(j) * static_cast<double>(k) /
                               static_cast<double>(n);
            acc += v[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

}  // namespace oracles
