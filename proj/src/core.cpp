#include "core.hpp"

#include <algorithm>

namespace thorp {

DeckParams::DeckParams(int d_) : d(d_) {
  if (d_ < 1 || d_ > 30)
    throw std::invalid_argument("DeckParams: d must be in [1, 30]");
  n = 1u << d_;
}

std::pair<uint32_t, int> split_position(uint32_t x, int d) {
  if (d < 1 || x >= (1u << d))
    throw std::out_of_range("split_position: x out of [0, 2^d)");
  return {x >> 1, static_cast<int>(x & 1u)};
}

uint32_t round_image(uint32_t x, int z, int d) {
  auto [l, r] = split_position(x, d);
  return static_cast<uint32_t>(r ^ (z & 1)) << (d - 1) | l;
}

Permutation Permutation::identity(uint32_t n) {
  std::vector<uint32_t> l(n);
  for (uint32_t i = 0; i < n; ++i) l[i] = i;
  return Permutation(std::move(l));
}

bool Permutation::is_valid() const {
  const uint32_t n = size();
  std::vector<bool> seen(n, false);
  for (uint32_t v : locs) {
    if (v >= n || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

Permutation Permutation::inverse() const {
  std::vector<uint32_t> inv(size());
  for (uint32_t i = 0; i < size(); ++i) inv[locs[i]] = i;
  return Permutation(std::move(inv));
}

Permutation Permutation::compose(const Permutation& rhs) const {
  std::vector<uint32_t> out(size());
  for (uint32_t i = 0; i < size(); ++i) out[i] = locs[rhs.locs[i]];
  return Permutation(std::move(out));
}

uint64_t factorial(uint32_t n) {
  uint64_t f = 1;
  for (uint32_t i = 2; i <= n; ++i) f *= i;
  return f;
}

uint64_t perm_rank(const Permutation& p) {
  const uint32_t n = p.size();
  if (!p.is_valid()) throw std::invalid_argument("perm_rank: not a bijection");
  uint64_t r = 0;
  for (uint32_t i = 0; i < n; ++i) {
    uint32_t smaller = 0;
    for (uint32_t j = i + 1; j < n; ++j)
      if (p.locs[j] < p.locs[i]) ++smaller;
    r += smaller * factorial(n - 1 - i);
  }
  return r;
}

Permutation perm_unrank(uint64_t r, uint32_t n) {
  if (r >= factorial(n)) throw std::out_of_range("perm_unrank: rank >= n!");
  std::vector<uint32_t> avail(n);
  for (uint32_t i = 0; i < n; ++i) avail[i] = i;
  std::vector<uint32_t> locs(n);
  for (uint32_t i = 0; i < n; ++i) {
    const uint64_t f = factorial(n - 1 - i);
    const uint32_t idx = static_cast<uint32_t>(r / f);
    r %= f;
    locs[i] = avail[idx];
    avail.erase(avail.begin() + idx);
  }
  return Permutation(std::move(locs));
}

uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

int SeededOracle::bit(uint32_t l, uint32_t t) const {
  const uint64_t h = mix64(mix64(mix64(seed_) ^ l) ^ (0x510e527fade682d1ull + t));
  return static_cast<int>(h >> 63);
}

KeyedOracle::KeyedOracle(const std::array<uint8_t, 16>& key) {
  k0_ = k1_ = 0;
  for (int i = 0; i < 8; ++i) {
    k0_ |= static_cast<uint64_t>(key[i]) << (8 * i);
    k1_ |= static_cast<uint64_t>(key[8 + i]) << (8 * i);
  }
}

int KeyedOracle::bit(uint32_t l, uint32_t t) const {
  const uint64_t h = mix64(mix64(mix64(k0_) ^ l) ^ mix64(k1_ ^ t));
  return static_cast<int>(h >> 63);
}

TabularOracle::TabularOracle(int d, uint32_t rounds)
    : d_(d), rounds_(rounds) {
  if (d < 1) throw std::invalid_argument("TabularOracle: d < 1");
  rows_ = 1u << (d - 1);
  bits_.assign(static_cast<size_t>(rows_) * rounds_, 0);
}

TabularOracle TabularOracle::from_code(int d, uint32_t rounds, uint64_t code) {
  TabularOracle z(d, rounds);
  if (z.bit_count() > 63)
    throw std::invalid_argument("TabularOracle::from_code: table > 63 bits");
  for (uint32_t i = 0; i < z.bit_count(); ++i)
    z.bits_[i] = static_cast<uint8_t>((code >> i) & 1u);
  return z;
}

TabularOracle TabularOracle::sample(int d, uint32_t rounds, uint64_t seed) {
  TabularOracle z(d, rounds);
  const SeededOracle src(seed);
  for (uint32_t t = 0; t < rounds; ++t)
    for (uint32_t l = 0; l < z.rows_; ++l)
      z.set(l, t, src.bit(l, t));
  return z;
}

int TabularOracle::bit(uint32_t l, uint32_t t) const {
  if (l >= rows_ || t >= rounds_)
    throw std::out_of_range("TabularOracle: (l, t) outside tabulated range");
  return bits_[static_cast<size_t>(t) * rows_ + l];
}

void TabularOracle::set(uint32_t l, uint32_t t, int v) {
  if (l >= rows_ || t >= rounds_)
    throw std::out_of_range("TabularOracle: (l, t) outside tabulated range");
  bits_[static_cast<size_t>(t) * rows_ + l] = static_cast<uint8_t>(v & 1);
}

void TabularOracle::flip(uint32_t l, uint32_t t) {
  set(l, t, 1 - bit(l, t));
}

}  // namespace thorp
