#include "coupling.hpp"

#include <bit>
#include <random>

namespace thorp {

int t_schedule(uint32_t j, int t_param) {
  if (t_param < 1) throw std::invalid_argument("t_schedule: T must be >= 1");
  if (j == 0) return 1 - t_param;  // T_0 := T_1, keeps T_j monotone
  const int log2j = std::bit_width(j) - 1;
  return log2j + 1 - t_param;
}

FlipSchedule FlipSchedule::fixed(int d, int t_param) {
  FlipSchedule s;
  s.t_param = t_param;
  const uint32_t n = DeckParams(d).n;
  s.times.resize(n);
  for (uint32_t j = 0; j < n; ++j) s.times[j] = t_schedule(j, t_param);
  return s;
}

FlipSchedule FlipSchedule::geometric_half(int d, uint64_t seed) {
  // Geometric(1/2) on {1, 2, ...}: count fair-coin failures before the
  // first success, plus one.
  std::mt19937_64 rng(mix64(seed));
  int t = 1;
  while (rng() & 1) ++t;
  FlipSchedule s = fixed(d, t);
  s.geometric = true;
  return s;
}

int msb_diff(uint32_t k, uint32_t j) {
  if (k == j) throw std::domain_error("msb_diff: k == j");
  return std::bit_width(k ^ j) - 1;
}

std::vector<uint32_t> bucket(uint32_t j, int t, int d) {
  const uint32_t n = DeckParams(d).n;
  if (j >= n) throw std::out_of_range("bucket: j out of range");
  std::vector<uint32_t> out;
  if (t < 0 || t >= d) return out;
  for (uint32_t k = 0; k < n; ++k)
    if (k != j && msb_diff(k, j) == t) out.push_back(k);
  return out;
}

bool adjacent(uint32_t i, uint32_t j, const Permutation& state) {
  if (i == j) throw std::domain_error("adjacent: i == j");
  return (state.locs[i] >> 1) == (state.locs[j] >> 1);
}

std::optional<uint32_t> partner(uint32_t j, const Trajectory& traj,
                                const FlipSchedule& schedule) {
  const int tj = schedule.times[j];
  if (tj < 0) return std::nullopt;
  if (static_cast<uint32_t>(tj) >= traj.states.size())
    throw std::out_of_range("partner: T_j beyond trajectory horizon");
  const Permutation& state = traj.states[tj];
  for (uint32_t k = 0; k < state.size(); ++k)
    if (k != j && adjacent(k, j, state)) return k;
  throw std::logic_error("partner: no adjacent card found");
}

FlipResult flip_oracle(const TabularOracle& z, const Trajectory& traj,
                       const FlipSchedule& schedule) {
  FlipResult res{z, {}, {}};
  const uint32_t rounds = traj.rounds();
  for (uint32_t j = 0; j < traj.params.n; ++j) {
    const int tj = schedule.times[j];
    if (tj < 0) continue;
    if (static_cast<uint32_t>(tj) >= rounds) {
      res.beyond_horizon.push_back(j);
      continue;
    }
    const uint32_t l = traj.states[tj].locs[j] >> 1;
    res.flips.insert({l, static_cast<uint32_t>(tj)});
  }
  for (const auto& [l, t] : res.flips) res.z_tilde.flip(l, t);
  return res;
}

std::vector<uint32_t> CouplingTrace::gamma(uint32_t j, bool tilde) const {
  const Trajectory& traj = tilde ? x_tilde : x;
  std::vector<uint32_t> g;
  for (uint32_t t = 1; t < traj.states.size(); ++t)
    g.push_back(traj.states[t].locs[j]);
  return g;
}

CouplingTrace coupled_run(const Permutation& pi0, const TabularOracle& z,
                          const FlipSchedule& schedule) {
  const int d = z.d();
  if (pi0.size() != (1u << d))
    throw std::invalid_argument("coupled_run: deck size does not match oracle");
  if (z.rounds() < static_cast<uint32_t>(d))
    throw std::invalid_argument("coupled_run: oracle must cover d rounds");
  Trajectory x = simulate(pi0, d, z);
  FlipResult flips = flip_oracle(z, x, schedule);
  Trajectory x_tilde = simulate(pi0, d, flips.z_tilde);
  CouplingTrace trace{DeckParams(d), schedule,        z,
                      flips.z_tilde, std::move(x),    std::move(x_tilde),
                      flips.flips,   flips.beyond_horizon, {}};
  trace.partners.resize(trace.params.n);
  for (uint32_t j = 0; j < trace.params.n; ++j) {
    const int tj = schedule.times[j];
    if (tj >= 0 && static_cast<uint32_t>(tj) < trace.x.states.size())
      trace.partners[j] = partner(j, trace.x, schedule);
  }
  return trace;
}

CouplingTrace coupled_run(const Permutation& pi0, const TabularOracle& z,
                          int t_param) {
  return coupled_run(pi0, z, FlipSchedule::fixed(z.d(), t_param));
}

}  // namespace thorp
