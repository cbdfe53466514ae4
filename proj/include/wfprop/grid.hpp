#pragma once

#include <mutex>
#include <vector>

#include "wfprop/state.hpp"

struct fftw_plan_s;

namespace wfprop {

// Serializes FFTW plan creation across all translation units.
std::mutex& fftw_planner_mutex();

struct Grid2D {
    int nx = 64, ny = 64;
    double x_min = -10.0, x_max = 10.0;
    double y_min = -10.0, y_max = 10.0;

    double dx() const { return (x_max - x_min) / nx; }
    double dy() const { return (y_max - y_min) / ny; }
    double x(int ix) const { return x_min + ix * dx(); }
    double y(int iy) const { return y_min + iy * dy(); }
    std::size_t index(int ix, int iy) const {
        return static_cast<std::size_t>(ix) * ny + iy;
    }
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    void validate() const;
};

struct HenonHeilesParams {
    double omega_x = 1.3;
    double omega_y = 0.7;
    double lambda = -0.1;
    double eta = 0.1;
    double mass = 1.0;
};

double henon_heiles_potential(double x, double y, const HenonHeilesParams& p);

WaveState gaussian_packet(const Grid2D& g, double x0, double y0, double px, double py,
                          double sx, double sy);

// v_min and v_max + full kinetic range, widened by 5% of the span on each end.
std::pair<double, double> spectral_bounds(const Grid2D& g, const HenonHeilesParams& p);

double position_expectation_x(const Grid2D& g, const WaveState& psi);
double position_expectation_y(const Grid2D& g, const WaveState& psi);
double momentum_expectation_x(const Grid2D& g, const WaveState& psi);

// (T + V) psi with T applied in momentum space: two FFTs per application.
class GridHamiltonian : public HermitianOperator {
   public:
    GridHamiltonian(const Grid2D& g, const HenonHeilesParams& p);
    ~GridHamiltonian() override;
    GridHamiltonian(const GridHamiltonian&) = delete;
    GridHamiltonian& operator=(const GridHamiltonian&) = delete;

    const Grid2D& grid() const { return grid_; }
    const HenonHeilesParams& params() const { return params_; }
    const std::vector<double>& potential() const { return v_; }

   protected:
    void apply_impl(const WaveState& in, WaveState& out) const override;

   private:
    Grid2D grid_;
    HenonHeilesParams params_;
    std::vector<double> v_;     // potential on grid points
    std::vector<double> kfac_;  // k^2 / (2m) in DFT layout
    fftw_plan_s* fwd_ = nullptr;
    fftw_plan_s* bwd_ = nullptr;
};

}  // namespace wfprop
