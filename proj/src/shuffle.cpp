#include "shuffle.hpp"

#include <bit>

namespace thorp {

namespace {

int deck_log2(const Permutation& pi) {
  const uint32_t n = pi.size();
  if (n < 2 || (n & (n - 1)) != 0)
    throw std::invalid_argument("deck size must be a power of two >= 2");
  return std::countr_zero(n);
}

}  // namespace

Permutation reverse_round(const Permutation& pi, uint32_t t, const BitOracle& z) {
  const int d = deck_log2(pi);
  std::vector<uint32_t> out(pi.size());
  for (uint32_t card = 0; card < pi.size(); ++card) {
    const auto [l, r] = split_position(pi.locs[card], d);
    (void)r;
    out[card] = round_image(pi.locs[card], z.bit(l, t), d);
  }
  return Permutation(std::move(out));
}

Permutation forward_round(const Permutation& pi, const std::vector<int>& coins) {
  const int d = deck_log2(pi);
  const uint32_t n = pi.size();
  const uint32_t half = n >> 1;
  if (coins.size() != half)
    throw std::invalid_argument("forward_round: need exactly n/2 coins");
  std::vector<uint32_t> out(n);
  for (uint32_t card = 0; card < n; ++card) {
    const uint32_t y = pi.locs[card];
    const uint32_t l = y & (half - 1);           // low d-1 bits: pair index
    const uint32_t b = y >> (d - 1);             // which pile
    out[card] = 2 * l + (b ^ static_cast<uint32_t>(coins[l] & 1));
  }
  return Permutation(std::move(out));
}

Trajectory simulate(const Permutation& pi0, uint32_t rounds, const BitOracle& z) {
  Trajectory traj{DeckParams(deck_log2(pi0)), {}};
  traj.states.reserve(rounds + 1);
  traj.states.push_back(pi0);
  for (uint32_t t = 0; t < rounds; ++t)
    traj.states.push_back(reverse_round(traj.states.back(), t, z));
  return traj;
}

std::vector<double> single_card_kernel(int d) {
  const uint32_t n = DeckParams(d).n;
  std::vector<double> k(static_cast<size_t>(n) * n, 0.0);
  for (uint32_t x = 0; x < n; ++x) {
    k[static_cast<size_t>(x) * n + round_image(x, 0, d)] += 0.5;
    k[static_cast<size_t>(x) * n + round_image(x, 1, d)] += 0.5;
  }
  return k;
}

namespace {

std::vector<double> averaged_kernel(int d, bool forward) {
  if (d > 2) throw CapacityError("averaged kernel: d > 2 (n! blowup)");
  const uint32_t n = DeckParams(d).n;
  const uint64_t nf = factorial(n);
  const uint32_t half = n >> 1;
  const uint32_t patterns = 1u << half;
  std::vector<Permutation> perms(nf);
  for (uint64_t r = 0; r < nf; ++r) perms[r] = perm_unrank(r, n);
  std::vector<double> k(nf * nf, 0.0);
  const double w = 1.0 / patterns;
  for (uint32_t p = 0; p < patterns; ++p) {
    std::vector<int> bits(half);
    for (uint32_t l = 0; l < half; ++l) bits[l] = (p >> l) & 1;
    for (uint64_t r = 0; r < nf; ++r) {
      Permutation next;
      if (forward) {
        next = forward_round(perms[r], bits);
      } else {
        TabularOracle z(d, 1);
        for (uint32_t l = 0; l < half; ++l) z.set(l, 0, bits[l]);
        next = reverse_round(perms[r], 0, z);
      }
      k[r * nf + perm_rank(next)] += w;
    }
  }
  return k;
}

}  // namespace

std::vector<double> reverse_kernel_matrix(int d) { return averaged_kernel(d, false); }
std::vector<double> forward_kernel_matrix(int d) { return averaged_kernel(d, true); }

}  // namespace thorp
