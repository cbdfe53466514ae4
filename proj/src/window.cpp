#include "wfprop/window.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wfprop/subspace.hpp"

namespace wfprop {

namespace {

constexpr double kDeadNorm = 1e-250;  // chain norms below this mean the Krylov space closed

struct Chain {
    std::vector<WaveState> states;  // states[p] = normalized H^p psi, zero state if dead
    std::vector<double> raws;       // raws[p] = ||H states[p-1]||; raws[0] = ||psi||
    bool dead = false;

    // Appends power top+1 by one application of H (no-op once the chain is dead).
    void extend(const HermitianOperator& H, StepStats& stats) {
        const std::size_t dim = states.back().dim();
        if (dead) {
            states.emplace_back(dim);
            raws.push_back(0.0);
            return;
        }
        WaveState u = H.apply(states.back());
        ++stats.matvecs;
        const double r = norm(u);
        raws.push_back(r);
        if (r < kDeadNorm) {
            dead = true;
            states.emplace_back(dim);
        } else {
            scale(u, cplx(1.0 / r, 0.0));
            states.push_back(std::move(u));
        }
    }
};

Chain build_chain(const HermitianOperator& H, const WaveState& psi, int top_power,
                  StepStats& stats) {
    const double nrm = norm(psi);
    if (nrm < 1e-300) throw std::invalid_argument("extended step: zero input state");
    Chain c;
    c.states.push_back(psi);
    scale(c.states[0], cplx(1.0 / nrm, 0.0));
    c.raws.push_back(nrm);
    for (int p = 1; p <= top_power; ++p) c.extend(H, stats);
    return c;
}

void remove_row_col(Eigen::MatrixXcd& M, int j) {
    const Eigen::Index n = M.rows();
    Eigen::MatrixXcd R(n - 1, n - 1);
    for (Eigen::Index a = 0, ra = 0; a < n; ++a) {
        if (a == j) continue;
        for (Eigen::Index b = 0, rb = 0; b < n; ++b) {
            if (b == j) continue;
            R(ra, rb) = M(a, b);
            ++rb;
        }
        ++ra;
    }
    M.swap(R);
}

void symmetrize(Eigen::MatrixXcd& M) { M = ((M + M.adjoint()) / 2.0).eval(); }

// <bra|H|Phi^(p)> for a current-step chain entry via r_{p+1} <bra|Phi^(p+1)>,
// so the previous step's top power is never needed.
cplx ket_identity(const Chain& chain, int p, const WaveState& bra) {
    const double r_next = chain.raws[p + 1];
    if (r_next < kDeadNorm) return cplx(0.0, 0.0);
    return r_next * inner(bra, chain.states[p + 1]);
}

WaveState combine(const Eigen::VectorXcd& C, const std::vector<BasisEntry>& entries) {
    std::vector<cplx> coeffs(C.size());
    std::vector<const WaveState*> states(C.size());
    for (Eigen::Index j = 0; j < C.size(); ++j) {
        coeffs[j] = C(j);
        states[j] = &entries[j].state;
    }
    return linear_combination(coeffs, states);
}

}  // namespace

BasisWindow::BasisWindow(int m, int n, int K, double threshold, int power_cap_extra,
                         bool auto_shrink)
    : m_(m), n_(n), K_(K), threshold_(threshold), power_cap_(m + power_cap_extra),
      auto_shrink_(auto_shrink) {
    if (m < 1) throw std::invalid_argument("window: m must be >= 1");
    if (K < 1) throw std::invalid_argument("window: K must be >= 1");
    if (n < 1) throw std::invalid_argument("window: n must be >= 1");
    if (n > (K + 1) * (m + 1))
        throw std::invalid_argument("window: n exceeds (K+1)(m+1) available states");
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("window: threshold must lie in (0,1)");
    if (power_cap_extra < 0) throw std::invalid_argument("window: negative power cap");
}

std::pair<WaveState, StepStats> first_step_basis(const HermitianOperator& H,
                                                 const WaveState& psi0, BasisWindow& win,
                                                 double dt) {
    StepStats stats;
    const int n = win.n_;
    Chain chain = build_chain(H, psi0, n, stats);  // powers 0..n, top only for elements
    const double nrm = chain.raws[0];

    Eigen::MatrixXcd S(n, n), Hm(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) S(a, b) = inner(chain.states[a], chain.states[b]);
    for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a) Hm(a, b) = ket_identity(chain, b, chain.states[a]);
    symmetrize(S);
    symmetrize(Hm);

    CholeskyResult chol = thresholded_cholesky(S, win.threshold_);
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
        if (!std::binary_search(chol.dependent.begin(), chol.dependent.end(), i))
            keep.push_back(i);
    stats.fresh_drops = static_cast<int>(chol.dependent.size());

    const int k = static_cast<int>(keep.size());
    Eigen::MatrixXcd Sr(k, k), Hr(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            Sr(a, b) = S(keep[a], keep[b]);
            Hr(a, b) = Hm(keep[a], keep[b]);
        }

    Eigen::VectorXcd C0 = Eigen::VectorXcd::Zero(k);
    C0(0) = nrm;
    Eigen::VectorXcd C = evolve_subspace(Sr, Hr, C0, dt);

    win.entries_.clear();
    for (int i : keep)
        win.entries_.push_back(BasisEntry{chain.states[i], i, 1, chain.raws[i]});
    win.S_cache_ = Sr;
    win.H_cache_ = Hr;
    win.total_fresh_drops_ += stats.fresh_drops;
    win.ledger_matvecs_ += stats.matvecs;

    WaveState out = combine(C, win.entries_);
    return {std::move(out), stats};
}

std::pair<WaveState, StepStats> extended_step(const HermitianOperator& H,
                                              const WaveState& psi, BasisWindow& win,
                                              double dt) {
    StepStats stats;
    const int m = win.m_, n = win.n_, K = win.K_;
    if (n < m + 1)
        throw std::invalid_argument("window: recycled stepping needs n >= m+1");
    Chain chain = build_chain(H, psi, m + 1, stats);
    const double nrm = chain.raws[0];

    std::vector<BasisEntry> entries;
    for (int i = 0; i <= m; ++i)
        entries.push_back(BasisEntry{chain.states[i], i, 0, chain.raws[i]});
    int nf = m + 1;

    // Recycled selection: youngest first, highest power first within a step.
    std::vector<int> pool;
    for (int idx = 0; idx < static_cast<int>(win.entries_.size()); ++idx)
        if (win.entries_[idx].age <= K) pool.push_back(idx);
    std::stable_sort(pool.begin(), pool.end(), [&](int a, int b) {
        const BasisEntry& ea = win.entries_[a];
        const BasisEntry& eb = win.entries_[b];
        if (ea.age != eb.age) return ea.age < eb.age;
        return ea.power > eb.power;
    });
    if (static_cast<int>(pool.size()) > n - m - 1) pool.resize(n - m - 1);
    std::vector<int> rec_idx = pool;  // positions into the previous window for the caches
    for (int idx : rec_idx) entries.push_back(win.entries_[idx]);
    int nn = static_cast<int>(entries.size());

    Eigen::MatrixXcd S(nn, nn), Hm(nn, nn);
    for (int a = 0; a < nn; ++a)
        for (int b = 0; b < nn; ++b)
            S(a, b) = (a >= nf && b >= nf)
                          ? win.S_cache_(rec_idx[a - nf], rec_idx[b - nf])
                          : inner(entries[a].state, entries[b].state);
    for (int b = 0; b < nn; ++b)
        for (int a = 0; a < nn; ++a) {
            if (b < nf) {
                Hm(a, b) = ket_identity(chain, entries[b].power, entries[a].state);
            } else if (a >= nf) {
                Hm(a, b) = win.H_cache_(rec_idx[a - nf], rec_idx[b - nf]);
            } else {
                Hm(a, b) = std::conj(ket_identity(chain, entries[a].power, entries[b].state));
            }
        }
    symmetrize(S);
    symmetrize(Hm);

    int top_power = m + 1;  // chain currently holds powers 0..m+1
    for (;;) {
        CholeskyResult chol = thresholded_cholesky(S, win.threshold_);
        if (chol.dependent.empty()) break;
        const int j = chol.dependent.front();

        const bool drop = (j < nf) || win.auto_shrink_ ||
                          chain.dead;  // dead chain: no further independent powers exist
        if (drop) {
            if (j < nf) {
                --nf;
                ++stats.fresh_drops;
            } else {
                rec_idx.erase(rec_idx.begin() + (j - nf));
            }
            entries.erase(entries.begin() + j);
            remove_row_col(S, j);
            remove_row_col(Hm, j);
            --nn;
            continue;
        }

        if (top_power > win.power_cap_)
            throw std::runtime_error(
                "dependent-state replacement budget exhausted; increase m or reduce n");

        const int new_power = top_power;
        WaveState new_state = chain.states[new_power];
        chain.extend(H, stats);  // next power feeds the new entry's matrix elements
        ++top_power;
        ++stats.replacements;

        entries[j] = BasisEntry{std::move(new_state), new_power, 0, chain.raws[new_power]};
        for (int a = 0; a < nn; ++a) {
            if (a == j) continue;
            S(a, j) = inner(entries[a].state, entries[j].state);
            S(j, a) = std::conj(S(a, j));
        }
        S(j, j) = cplx(1.0, 0.0);
        for (int a = 0; a < nn; ++a)
            Hm(a, j) = ket_identity(chain, new_power, entries[a].state);
        for (int b = 0; b < nn; ++b) {
            if (b == j) continue;
            if (b < nf)
                Hm(j, b) = ket_identity(chain, entries[b].power, entries[j].state);
            else
                Hm(j, b) = std::conj(Hm(b, j));
        }
        symmetrize(S);
        symmetrize(Hm);
    }

    Eigen::VectorXcd C0 = Eigen::VectorXcd::Zero(nn);
    C0(0) = nrm;
    Eigen::VectorXcd C = evolve_subspace(S, Hm, C0, dt);
    WaveState out = combine(C, entries);

    for (BasisEntry& e : entries) ++e.age;
    win.entries_ = std::move(entries);
    win.S_cache_ = std::move(S);
    win.H_cache_ = std::move(Hm);
    win.total_replacements_ += stats.replacements;
    win.total_fresh_drops_ += stats.fresh_drops;
    win.ledger_matvecs_ += stats.matvecs;
    return {std::move(out), stats};
}

}  // namespace wfprop
