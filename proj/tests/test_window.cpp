#include <random>

#include "doctest.h"
#include "wfprop/dense.hpp"
#include "wfprop/lanczos.hpp"
#include "wfprop/window.hpp"

using namespace wfprop;

namespace {

WaveState step_any(const DenseHamiltonian& H, const WaveState& psi, BasisWindow& win,
                   double dt, bool first, StepStats* stats = nullptr) {
    auto [out, st] = first ? first_step_basis(H, psi, win, dt) : extended_step(H, psi, win, dt);
    if (stats != nullptr) *stats = st;
    return out;
}

}  // namespace

TEST_CASE("window constructor validates its shape") {
    CHECK_THROWS_AS(BasisWindow(0, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(BasisWindow(2, 3, 0), std::invalid_argument);
    CHECK_THROWS_AS(BasisWindow(1, 5, 1), std::invalid_argument);  // 5 > (1+1)*(1+1)
    CHECK_THROWS_AS(BasisWindow(2, 4, 1, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(BasisWindow(2, 4, 1, 0.0), std::invalid_argument);
    CHECK_NOTHROW(BasisWindow(2, 6, 1));
}

TEST_CASE("first step spends n applications and primes the window") {
    std::mt19937_64 rng(61);
    DenseHamiltonian H(random_hermitian(16, 1.0, rng));
    const WaveState psi = random_state(16, rng);
    BasisWindow win(2, 5, 2);
    StepStats st;
    const WaveState out = step_any(H, psi, win, 0.05, true, &st);
    CHECK(st.matvecs == 5);
    CHECK(H.matvecs() == 5);
    CHECK(win.ledger_matvecs() == 5);
    CHECK(win.entries().size() == 5);
    for (const BasisEntry& e : win.entries()) CHECK(e.age == 1);
    CHECK(norm(out) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("first step with a single state is the mean-energy phase hold") {
    std::mt19937_64 rng(62);
    DenseHamiltonian H(random_hermitian(12, 1.0, rng));
    const WaveState psi = random_state(12, rng);
    BasisWindow win(1, 1, 1);
    const double dt = 0.4;
    const WaveState out = step_any(H, psi, win, dt, true);
    const cplx alpha = inner(psi, H.apply(psi));
    WaveState expect = psi;
    const cplx phase = std::exp(cplx(0.0, -alpha.real() * dt));
    for (std::size_t i = 0; i < expect.dim(); ++i) expect[i] *= phase;
    CHECK(distance(out, expect) < 1e-13);
}

TEST_CASE("first step absorbs collinear powers of a stationary state") {
    std::mt19937_64 rng(63);
    const Eigen::MatrixXcd M = random_hermitian(12, 1.0, rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
    DenseHamiltonian H(M);
    const double E = es.eigenvalues()(5);
    const WaveState psi = from_eigen(es.eigenvectors().col(5));
    BasisWindow win(2, 6, 1);
    StepStats st;
    const WaveState out = step_any(H, psi, win, 0.7, true, &st);
    CHECK(st.fresh_drops >= 4);
    WaveState expect = psi;
    const cplx phase = std::exp(cplx(0.0, -E * 0.7));
    for (std::size_t i = 0; i < expect.dim(); ++i) expect[i] *= phase;
    CHECK(distance(out, expect) < 1e-12);
}

TEST_CASE("zero operator leaves the state alone through both entry points") {
    DenseHamiltonian H(Eigen::MatrixXcd::Zero(4, 4));
    std::mt19937_64 rng(64);
    const WaveState psi = random_state(4, rng);
    BasisWindow win(1, 3, 1);
    const WaveState a = step_any(H, psi, win, 0.3, true);
    CHECK(distance(a, psi) < 1e-14);
    StepStats st;
    const WaveState b = step_any(H, a, win, 0.3, false, &st);
    CHECK(distance(b, psi) < 1e-14);
    CHECK(st.replacements == 0);
    CHECK(st.fresh_drops >= 1);
}

TEST_CASE("dt = 0 reproduces the state while the window still slides") {
    std::mt19937_64 rng(65);
    DenseHamiltonian H(random_hermitian(16, 1.0, rng));
    const WaveState psi = random_state(16, rng);
    BasisWindow win(2, 6, 1);
    const WaveState a = step_any(H, psi, win, 0.0, true);
    CHECK(distance(a, psi) < 1e-12);
    const WaveState b = step_any(H, a, win, 0.0, false);
    CHECK(distance(b, psi) < 1e-12);
    CHECK(win.entries().size() == 6);
    int fresh = 0;
    for (const BasisEntry& e : win.entries())
        if (e.age == 1) ++fresh;
    CHECK(fresh == 3);
}

TEST_CASE("no-recycling window equals the krylov stepper across 20 systems") {
    std::mt19937_64 rng(66);
    double worst = 0.0;
    for (int sys = 0; sys < 20; ++sys) {
        DenseHamiltonian H(random_hermitian(8, 1.0, rng));
        WaveState a = random_state(8, rng);
        WaveState b = a;
        BasisWindow win(3, 4, 1);
        for (int s = 0; s < 20; ++s) {
            a = step_any(H, a, win, 0.05, s == 0);
            b = lanczos_step(H, b, 4, 0.05);
            worst = std::max(worst, distance(a, b));
        }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("hundred-step accuracy against the exact dense oracle") {
    std::mt19937_64 rng(67);
    DenseHamiltonian H(random_hermitian(32, 1.0, rng));
    const WaveState psi0 = random_state(32, rng);
    const double dt = 0.02;
    const int steps = 100;

    BasisWindow win(3, 6, 1);
    WaveState ext = psi0;
    WaveState kry = psi0;
    for (int s = 0; s < steps; ++s) {
        ext = step_any(H, ext, win, dt, s == 0);
        kry = lanczos_step(H, kry, 4, dt);
    }
    const WaveState exact = H.exact_evolve(psi0, dt * steps);
    const double err_ext = distance(ext, exact);
    const double err_kry = distance(kry, exact);
    CHECK(err_ext < 1e-8);
    CHECK(err_ext < 1e-2 * err_kry);
}

TEST_CASE("normal stepping costs exactly m+1 applications per step") {
    std::mt19937_64 rng(68);
    DenseHamiltonian H(random_hermitian(16, 1.0, rng));
    WaveState psi = random_state(16, rng);
    // single high-power recycled state: well conditioned at this step size
    BasisWindow win(3, 5, 1);
    psi = step_any(H, psi, win, 0.1, true);
    const long long after_first = H.matvecs();
    CHECK(after_first == 5);
    for (int s = 0; s < 4; ++s) {
        StepStats st;
        psi = step_any(H, psi, win, 0.1, false, &st);
        CHECK(st.replacements == 0);
        CHECK(st.matvecs == 4);
    }
    CHECK(H.matvecs() == after_first + 4 * 4);
    CHECK(win.ledger_matvecs() == H.matvecs());
}

TEST_CASE("a duplicated recycled state is replaced and the dimension survives") {
    std::mt19937_64 rng(69);
    DenseHamiltonian H(random_hermitian(32, 1.0, rng));
    const WaveState psi = random_state(32, rng);
    BasisWindow win(3, 6, 1);
    // dt = 0 keeps the state fixed, so the third step recycles exact copies of
    // its own fresh powers
    WaveState s1 = step_any(H, psi, win, 0.0, true);
    WaveState s2 = step_any(H, s1, win, 0.0, false);
    StepStats st;
    WaveState s3 = step_any(H, s2, win, 0.0, false, &st);
    CHECK(st.replacements >= 1);
    CHECK(win.entries().size() == 6);
    CHECK(distance(s3, psi) < 1e-12);
    CHECK(win.ledger_matvecs() == H.matvecs());
}

TEST_CASE("forced near-collinearity at tiny dt stays accurate and keeps books") {
    std::mt19937_64 rng(70);
    const Eigen::MatrixXcd M = random_hermitian(32, 1.0, rng);
    WaveState psi0;
    {
        std::mt19937_64 rng2(71);
        psi0 = random_state(32, rng2);
    }
    const int steps = 100;

    // single recycled state: its pivot collapses under the 100x step shrink
    // while the baseline keeps it comfortably independent
    auto run = [&](double dt, long long* reps, long long* ledger, long long* counter,
                   double* err) {
        DenseHamiltonian H(M);
        BasisWindow win(3, 5, 1);
        WaveState s = psi0;
        for (int i = 0; i < steps; ++i) s = step_any(H, s, win, dt, i == 0);
        *reps = win.total_replacements();
        *ledger = win.ledger_matvecs();
        *counter = H.matvecs();
        *err = distance(s, H.exact_evolve(psi0, dt * steps));
        CHECK(win.entries().size() == 5);
    };

    long long reps_f = 0, led_f = 0, cnt_f = 0;
    double err_f = 0.0;
    run(1e-5, &reps_f, &led_f, &cnt_f, &err_f);
    long long reps_b = 0, led_b = 0, cnt_b = 0;
    double err_b = 0.0;
    run(1e-3, &reps_b, &led_b, &cnt_b, &err_b);

    CHECK(reps_f >= 1);
    CHECK(reps_b == 0);
    CHECK(led_f == cnt_f);
    CHECK(led_b == cnt_b);
    CHECK(cnt_f == 5 + 99 * 4 + reps_f);
    CHECK(err_f <= 10.0 * err_b);
}

TEST_CASE("replacement budget exhaustion raises and leaves the window intact") {
    std::mt19937_64 rng(72);
    DenseHamiltonian H(random_hermitian(2, 1.0, rng));
    const WaveState psi = random_state(2, rng);
    BasisWindow win(1, 3, 2);
    const WaveState s1 = step_any(H, psi, win, 0.01, true);
    const long long ledger_before = win.ledger_matvecs();
    const std::size_t entries_before = win.entries().size();
    CHECK(entries_before == 2);  // the dependent top power was dropped up front

    CHECK_THROWS_AS(extended_step(H, s1, win, 0.01), std::runtime_error);
    CHECK(win.ledger_matvecs() == ledger_before);
    CHECK(win.entries().size() == entries_before);
    CHECK(win.total_replacements() == 0);
    // the failed attempt still spent operator applications; only the window
    // ledger is transactional
    CHECK(H.matvecs() > ledger_before);
}

TEST_CASE("auto-shrink drops dependent recycled states instead of replacing") {
    std::mt19937_64 rng(73);
    DenseHamiltonian H(random_hermitian(32, 1.0, rng));
    const WaveState psi = random_state(32, rng);
    BasisWindow win(3, 6, 1, 1e-10, 4, true);
    WaveState s = step_any(H, psi, win, 0.0, true);
    s = step_any(H, s, win, 0.0, false);
    StepStats st;
    s = step_any(H, s, win, 0.0, false, &st);
    CHECK(st.replacements == 0);
    CHECK(win.entries().size() < 6);
    CHECK(distance(s, psi) < 1e-12);
}
