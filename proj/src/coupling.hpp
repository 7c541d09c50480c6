#pragma once

// Gadgets for the coupled shuffle pair (X, X~): the flip schedule T_j,
// highest-differing-bit buckets, adjacency and partners, the flipped
// oracle Z~, and coupled trajectories.

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "core.hpp"
#include "shuffle.hpp"

namespace thorp {

// T_j = floor(log2 j) + 1 - T for j >= 1; T_0 := T_1 = 1 - T so the
// chain T_0 <= T_1 <= ... stays monotone. Values may be negative.
int t_schedule(uint32_t j, int t_param);

struct FlipSchedule {
  int t_param = 1;            // the fixed T >= 1
  bool geometric = false;     // sampled from geometric(1/2) on {1,2,...}
  std::vector<int> times;     // T_j for j in [0, n)

  static FlipSchedule fixed(int d, int t_param);
  static FlipSchedule geometric_half(int d, uint64_t seed);
};

// Highest bit index where k and j differ; k != j.
int msb_diff(uint32_t k, uint32_t j);

// B(j, t) = { k : msb_diff(k, j) = t }; empty for t < 0 or t >= d.
std::vector<uint32_t> bucket(uint32_t j, int t, int d);

// Cards i and j are adjacent when their positions share L.
bool adjacent(uint32_t i, uint32_t j, const Permutation& state);

// The unique card adjacent to j at time T_j; nullopt when T_j < 0.
// T_j beyond the trajectory horizon is an error.
std::optional<uint32_t> partner(uint32_t j, const Trajectory& traj,
                                const FlipSchedule& schedule);

struct FlipResult {
  TabularOracle z_tilde;
  std::set<std::pair<uint32_t, uint32_t>> flips;  // (l, t) pairs, set semantics
  std::vector<uint32_t> beyond_horizon;           // cards with T_j >= rounds
};

// Z~(l, t) = 1 - Z(l, t) iff some card j has L(X_{T_j}(j)) = l and
// T_j = t within the trajectory horizon; the bit is flipped once no
// matter how many cards target it.
FlipResult flip_oracle(const TabularOracle& z, const Trajectory& traj,
                       const FlipSchedule& schedule);

struct CouplingTrace {
  DeckParams params;
  FlipSchedule schedule;
  TabularOracle z;
  TabularOracle z_tilde;
  Trajectory x;        // under z
  Trajectory x_tilde;  // under z_tilde
  std::set<std::pair<uint32_t, uint32_t>> flips;
  std::vector<uint32_t> beyond_horizon;
  // partners[j] = m(j), or none when T_j < 0
  std::vector<std::optional<uint32_t>> partners;

  // Gamma_j: positions of card j at times 1..d.
  std::vector<uint32_t> gamma(uint32_t j, bool tilde) const;
};

// Run d rounds of X from (pi0, z), derive Z~ and the coupled X~.
CouplingTrace coupled_run(const Permutation& pi0, const TabularOracle& z,
                          const FlipSchedule& schedule);
CouplingTrace coupled_run(const Permutation& pi0, const TabularOracle& z,
                          int t_param);

}  // namespace thorp
