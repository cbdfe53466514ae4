#pragma once

#include "wfprop/state.hpp"

namespace wfprop {

// One Krylov step of duration dt with a budget of mu applications of H,
// producing a mu-dimensional tridiagonal representation. Exits early (with
// fewer applications) when the Krylov subspace closes on itself.
WaveState lanczos_step(const HermitianOperator& H, const WaveState& psi, int mu, double dt);

}  // namespace wfprop
