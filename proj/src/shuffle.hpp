#pragma once

// One round of the reverse Thorp shuffle and of the forward shuffle,
// multi-round trajectories, and the single-card marginal chain.

#include <vector>

#include "core.hpp"

namespace thorp {

struct Trajectory {
  DeckParams params;
  std::vector<Permutation> states;  // states[t], t = 0..rounds

  uint32_t rounds() const { return static_cast<uint32_t>(states.size()) - 1; }
};

// X_{t+1} = nu o X_t, where nu sends position (L, R) to
// (R xor Z(L, t), L). Oracle misses (Tabular out of range) propagate.
Permutation reverse_round(const Permutation& pi, uint32_t t, const BitOracle& z);

// Forward Thorp round. Positions 0..n/2-1 form one pile, n/2..n-1 the
// other; pair l lands on positions 2l and 2l+1, order decided by
// coins[l]. Orientation is pinned so the coin-averaged kernel is the
// transpose of the reverse-round kernel: the card at position l goes
// to 2l + coins[l], the card at position l + n/2 to 2l + 1 - coins[l].
Permutation forward_round(const Permutation& pi, const std::vector<int>& coins);

Trajectory simulate(const Permutation& pi0, uint32_t rounds, const BitOracle& z);

// n x n row-major stochastic matrix of the one-round single-position
// marginal: row x has 1/2 at round_image(x, 0) and round_image(x, 1).
std::vector<double> single_card_kernel(int d);

// n! x n! row-major one-round kernels on S_n, averaged exhaustively
// over the round's bit patterns. Only feasible for d <= 2 (n! <= 24).
std::vector<double> reverse_kernel_matrix(int d);
std::vector<double> forward_kernel_matrix(int d);

}  // namespace thorp
