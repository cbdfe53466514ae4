#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wfprop/state.hpp"

namespace wfprop {

struct BasisEntry {
    WaveState state;   // normalized H^power psi(t - age*dt)
    int power = 0;
    int age = 0;       // steps since creation; fresh entries age to 1 at the slide
    double raw_norm = 0.0;
};

struct StepStats {
    int matvecs = 0;
    int replacements = 0;  // dependent recycled entries swapped for higher powers
    int fresh_drops = 0;   // dependent fresh entries removed (invariant subspace)
};

// Sliding variational subspace: the m+1 fresh Krylov states of the current step
// plus up to n-m-1 recycled states of age <= K, with overlap and Hamiltonian
// blocks between previously-seen pairs reused bitwise from the step that
// computed them.
class BasisWindow {
   public:
    BasisWindow(int m, int n, int K, double threshold = 1e-10, int power_cap_extra = 4,
                bool auto_shrink = false);

    int m() const { return m_; }
    int n() const { return n_; }
    int K() const { return K_; }
    double threshold() const { return threshold_; }
    int power_cap() const { return power_cap_; }
    bool auto_shrink() const { return auto_shrink_; }

    const std::vector<BasisEntry>& entries() const { return entries_; }
    long long total_replacements() const { return total_replacements_; }
    long long total_fresh_drops() const { return total_fresh_drops_; }
    long long ledger_matvecs() const { return ledger_matvecs_; }

   private:
    friend std::pair<WaveState, StepStats> first_step_basis(const HermitianOperator&,
                                                            const WaveState&, BasisWindow&,
                                                            double);
    friend std::pair<WaveState, StepStats> extended_step(const HermitianOperator&,
                                                         const WaveState&, BasisWindow&,
                                                         double);

    int m_, n_, K_;
    double threshold_;
    int power_cap_;
    bool auto_shrink_;
    std::vector<BasisEntry> entries_;
    Eigen::MatrixXcd S_cache_, H_cache_;
    long long total_replacements_ = 0;
    long long total_fresh_drops_ = 0;
    long long ledger_matvecs_ = 0;
};

// Builds the initial subspace from powers 0..n-1 of psi0 (n applications of H:
// n-1 for the basis plus one for the top-power matrix elements), advances one
// step, and primes the window.
std::pair<WaveState, StepStats> first_step_basis(const HermitianOperator& H,
                                                 const WaveState& psi0, BasisWindow& win,
                                                 double dt);

// One step of the recycled-subspace method: m+1 applications of H for the fresh
// chain plus one per dependent-state replacement.
std::pair<WaveState, StepStats> extended_step(const HermitianOperator& H,
                                              const WaveState& psi, BasisWindow& win,
                                              double dt);

}  // namespace wfprop
