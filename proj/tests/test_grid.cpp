#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wfprop/grid.hpp"

using namespace wfprop;

TEST_CASE("potential at hand-evaluated points") {
    HenonHeilesParams p;
    CHECK(henon_heiles_potential(2.0, 2.0, p) == doctest::Approx(3.48).epsilon(1e-14));
    CHECK(henon_heiles_potential(1.0, 0.0, p) == doctest::Approx(0.845).epsilon(1e-14));
    CHECK(henon_heiles_potential(0.0, 0.0, p) == 0.0);
}

TEST_CASE("grid geometry and validation") {
    Grid2D g;
    CHECK(g.dx() == doctest::Approx(0.3125).epsilon(1e-16));
    CHECK(g.x(0) == -10.0);
    CHECK(g.x(32) == doctest::Approx(0.0).epsilon(1e-16));
    CHECK(g.index(1, 0) == 64);
    CHECK(g.size() == 4096);

    Grid2D bad = g;
    bad.nx = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = g;
    bad.x_max = -12.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("gaussian packet is normalized and centered") {
    Grid2D g;
    const WaveState psi = gaussian_packet(g, 2.0, 2.0, 0.0, 0.0, 1.0, 1.0);
    CHECK(norm(psi) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(position_expectation_x(g, psi) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(position_expectation_y(g, psi) == doctest::Approx(2.0).epsilon(1e-9));

    const WaveState moving = gaussian_packet(g, 0.0, 0.0, 1.5, 0.0, 1.0, 1.0);
    CHECK(momentum_expectation_x(g, moving) == doctest::Approx(1.5).epsilon(1e-9));

    CHECK_THROWS_AS(gaussian_packet(g, 11.0, 0.0, 0.0, 0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_packet(g, 0.0, 0.0, 0.0, 0.0, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("spectral bounds for the default setup") {
    Grid2D g;
    HenonHeilesParams p;
    const auto [lo, hi] = spectral_bounds(g, p);
    CHECK(lo == doctest::Approx(-16.00323745335775).epsilon(1e-9));
    CHECK(hi == doctest::Approx(336.0679865205128).epsilon(1e-9));
}

TEST_CASE("rayleigh quotients lie inside the spectral bounds") {
    Grid2D g;
    HenonHeilesParams p;
    GridHamiltonian H(g, p);
    const auto [lo, hi] = spectral_bounds(g, p);
    for (double px : {0.0, 3.0, 8.0}) {
        const WaveState psi = gaussian_packet(g, 1.0, -1.0, px, 0.5, 0.8, 1.3);
        const double e = std::real(inner(psi, H.apply(psi)));
        CHECK(e > lo);
        CHECK(e < hi);
    }
}

TEST_CASE("plane waves are kinetic eigenstates when the potential vanishes") {
    Grid2D g;
    HenonHeilesParams free{0.0, 0.0, 0.0, 0.0, 1.0};
    GridHamiltonian T(g, free);
    const double kx = 2.0 * std::numbers::pi * 3.0 / 20.0;
    const double ky = 2.0 * std::numbers::pi * (-5.0) / 20.0;
    WaveState psi(g.size());
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy)
            psi[g.index(ix, iy)] = std::exp(cplx(0.0, kx * g.x(ix) + ky * g.y(iy)));
    normalize(psi);
    const WaveState out = T.apply(psi);
    const double expect = 0.5 * (kx * kx + ky * ky);
    double worst = 0.0;
    for (std::size_t i = 0; i < psi.dim(); ++i)
        worst = std::max(worst, std::abs(out[i] - expect * psi[i]));
    CHECK(worst < 1e-12);
}

TEST_CASE("grid operator is hermitian through inner products") {
    Grid2D g;
    HenonHeilesParams p;
    GridHamiltonian H(g, p);
    const WaveState u = gaussian_packet(g, 2.0, 2.0, 0.0, 0.0, 1.0, 1.0);
    const WaveState v = gaussian_packet(g, -1.5, 0.5, 2.0, -1.0, 1.2, 0.7);
    const double res = std::abs(inner(u, H.apply(v)) - std::conj(inner(v, H.apply(u))));
    CHECK(res < 1e-9);
}

TEST_CASE("grid operator counts applications") {
    Grid2D g;
    g.nx = g.ny = 16;
    HenonHeilesParams p;
    GridHamiltonian H(g, p);
    const WaveState psi = gaussian_packet(g, 2.0, 2.0, 0.0, 0.0, 1.0, 1.0);
    (void)H.apply(psi);
    (void)H.apply(psi);
    (void)H.apply(psi);
    CHECK(H.matvecs() == 3);
}
