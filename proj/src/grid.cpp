#include "wfprop/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace wfprop {

// FFTW plan creation is not thread-safe; execution via the new-array interface is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

namespace {
std::vector<double> dft_wavenumbers(int n, double d) {
    std::vector<double> k(n);
    const double base = 2.0 * std::numbers::pi / (n * d);
    for (int j = 0; j < n; ++j) {
        int jj = (j < (n + 1) / 2) ? j : j - n;
        k[j] = base * jj;
    }
    return k;
}
}  // namespace

void Grid2D::validate() const {
    if (nx < 2 || ny < 2) throw std::invalid_argument("grid: need at least 2 points per axis");
    if (x_max <= x_min || y_max <= y_min) throw std::invalid_argument("grid: empty extent");
}

double henon_heiles_potential(double x, double y, const HenonHeilesParams& p) {
    return 0.5 * (p.omega_x * p.omega_x * x * x + p.omega_y * p.omega_y * y * y) +
           p.lambda * y * (x * x + p.eta * y * y);
}

WaveState gaussian_packet(const Grid2D& g, double x0, double y0, double px, double py,
                          double sx, double sy) {
    g.validate();
    if (sx <= 0.0 || sy <= 0.0) throw std::invalid_argument("gaussian_packet: width must be positive");
    if (x0 < g.x_min || x0 >= g.x_max || y0 < g.y_min || y0 >= g.y_max)
        throw std::invalid_argument("gaussian_packet: center outside grid");
    WaveState psi(g.size());
    for (int ix = 0; ix < g.nx; ++ix) {
        for (int iy = 0; iy < g.ny; ++iy) {
            const double x = g.x(ix), y = g.y(iy);
            const double arg = -(x - x0) * (x - x0) / (2.0 * sx * sx) -
                               (y - y0) * (y - y0) / (2.0 * sy * sy);
            psi[g.index(ix, iy)] = std::exp(arg) * std::exp(cplx(0.0, px * x + py * y));
        }
    }
    normalize(psi);
    return psi;
}

std::pair<double, double> spectral_bounds(const Grid2D& g, const HenonHeilesParams& p) {
    g.validate();
    double vmin = 0.0, vmax = 0.0;
    bool first = true;
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy) {
            double v = henon_heiles_potential(g.x(ix), g.y(iy), p);
            if (first || v < vmin) vmin = v;
            if (first || v > vmax) vmax = v;
            first = false;
        }
    const double pi = std::numbers::pi;
    double tmax = (pi / g.dx()) * (pi / g.dx()) / (2.0 * p.mass) +
                  (pi / g.dy()) * (pi / g.dy()) / (2.0 * p.mass);
    double lo = vmin, hi = vmax + tmax;
    double margin = 0.05 * (hi - lo);
    return {lo - margin, hi + margin};
}

double position_expectation_x(const Grid2D& g, const WaveState& psi) {
    double num = 0.0, den = 0.0;
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy) {
            double w = std::norm(psi[g.index(ix, iy)]);
            num += w * g.x(ix);
            den += w;
        }
    return num / den;
}

double position_expectation_y(const Grid2D& g, const WaveState& psi) {
    double num = 0.0, den = 0.0;
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy) {
            double w = std::norm(psi[g.index(ix, iy)]);
            num += w * g.y(iy);
            den += w;
        }
    return num / den;
}

double momentum_expectation_x(const Grid2D& g, const WaveState& psi) {
    fftw_complex* buf = fftw_alloc_complex(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        buf[i][0] = psi[i].real();
        buf[i][1] = psi[i].imag();
    }
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan = fftw_plan_dft_2d(g.nx, g.ny, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    auto kx = dft_wavenumbers(g.nx, g.dx());
    double num = 0.0, den = 0.0;
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy) {
            std::size_t i = g.index(ix, iy);
            double w = buf[i][0] * buf[i][0] + buf[i][1] * buf[i][1];
            num += w * kx[ix];
            den += w;
        }
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(buf);
    return num / den;
}

GridHamiltonian::GridHamiltonian(const Grid2D& g, const HenonHeilesParams& p)
    : HermitianOperator(g.size()), grid_(g), params_(p) {
    g.validate();
    v_.resize(g.size());
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy)
            v_[g.index(ix, iy)] = henon_heiles_potential(g.x(ix), g.y(iy), p);

    auto kx = dft_wavenumbers(g.nx, g.dx());
    auto ky = dft_wavenumbers(g.ny, g.dy());
    kfac_.resize(g.size());
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy)
            kfac_[g.index(ix, iy)] =
                (kx[ix] * kx[ix] + ky[iy] * ky[iy]) / (2.0 * p.mass);

    fftw_complex* scratch = fftw_alloc_complex(g.size());
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fwd_ = fftw_plan_dft_2d(g.nx, g.ny, scratch, scratch, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_2d(g.nx, g.ny, scratch, scratch, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_free(scratch);
}

GridHamiltonian::~GridHamiltonian() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    if (fwd_) fftw_destroy_plan(fwd_);
    if (bwd_) fftw_destroy_plan(bwd_);
}

void GridHamiltonian::apply_impl(const WaveState& in, WaveState& out) const {
    const std::size_t ntot = grid_.size();
    fftw_complex* buf = fftw_alloc_complex(ntot);
    for (std::size_t i = 0; i < ntot; ++i) {
        buf[i][0] = in[i].real();
        buf[i][1] = in[i].imag();
    }
    fftw_execute_dft(fwd_, buf, buf);
    for (std::size_t i = 0; i < ntot; ++i) {
        buf[i][0] *= kfac_[i];
        buf[i][1] *= kfac_[i];
    }
    fftw_execute_dft(bwd_, buf, buf);
    const double inv_n = 1.0 / static_cast<double>(ntot);
    for (std::size_t i = 0; i < ntot; ++i) {
        out[i] = cplx(buf[i][0] * inv_n, buf[i][1] * inv_n) + v_[i] * in[i];
    }
    fftw_free(buf);
}

}  // namespace wfprop
