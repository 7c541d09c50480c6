#pragma once

// Position bit arithmetic, permutations on 2^d positions, Lehmer
// ranking, and the Bernoulli(1/2) bit oracles driving the shuffle.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace thorp {

// Raised when a request exceeds a hard size limit (n! blowup etc.).
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DeckParams {
  int d = 1;          // log2 of deck size
  uint32_t n = 2;     // 2^d cards / positions

  explicit DeckParams(int d_);
};

// Positions are d-bit integers, x = 2*L + R with L the leftmost d-1
// bits and R the last bit. For d = 1, L is the empty string, encoded 0.
std::pair<uint32_t, int> split_position(uint32_t x, int d);

// One-round image of a position: (L, R) -> (R xor z, L), i.e.
// (R^z)*2^(d-1) + L.
uint32_t round_image(uint32_t x, int z, int d);

// Card -> position map. locs[i] is the location of card i; bottom card
// sits at position 0, top at n-1.
struct Permutation {
  std::vector<uint32_t> locs;

  Permutation() = default;
  explicit Permutation(std::vector<uint32_t> l) : locs(std::move(l)) {}

  static Permutation identity(uint32_t n);

  uint32_t size() const { return static_cast<uint32_t>(locs.size()); }
  uint32_t operator()(uint32_t card) const { return locs[card]; }

  bool is_valid() const;
  Permutation inverse() const;

  // (a.compose(b))(i) = a(b(i))
  Permutation compose(const Permutation& rhs) const;

  bool operator==(const Permutation&) const = default;
};

uint64_t factorial(uint32_t n);

// Lexicographic Lehmer rank over the locs array; identity ranks 0.
uint64_t perm_rank(const Permutation& p);
Permutation perm_unrank(uint64_t r, uint32_t n);

// Deterministic source of the fair bits Z(l, t), l < 2^(d-1).
class BitOracle {
 public:
  virtual ~BitOracle() = default;
  virtual int bit(uint32_t l, uint32_t t) const = 0;
};

// Counter-mode hash of (seed, l, t); random access, no state.
class SeededOracle final : public BitOracle {
 public:
  explicit SeededOracle(uint64_t seed) : seed_(seed) {}
  int bit(uint32_t l, uint32_t t) const override;

 private:
  uint64_t seed_;
};

// PRF-style derivation from a 16-byte key. Not a cryptographic claim.
class KeyedOracle final : public BitOracle {
 public:
  explicit KeyedOracle(const std::array<uint8_t, 16>& key);
  int bit(uint32_t l, uint32_t t) const override;

 private:
  uint64_t k0_, k1_;
};

// Explicit bit table over [0, 2^(d-1)) x [0, rounds); queries outside
// the declared range throw. Used for exhaustive enumeration and for
// the flip construction.
class TabularOracle final : public BitOracle {
 public:
  TabularOracle(int d, uint32_t rounds);

  // Unpack `code` little-endian into the table, bit index l + t*rows.
  static TabularOracle from_code(int d, uint32_t rounds, uint64_t code);
  static TabularOracle sample(int d, uint32_t rounds, uint64_t seed);

  int bit(uint32_t l, uint32_t t) const override;
  void set(uint32_t l, uint32_t t, int v);
  void flip(uint32_t l, uint32_t t);

  int d() const { return d_; }
  uint32_t rows() const { return rows_; }
  uint32_t rounds() const { return rounds_; }
  uint32_t bit_count() const { return rows_ * rounds_; }

  bool operator==(const TabularOracle& rhs) const {
    return d_ == rhs.d_ && rounds_ == rhs.rounds_ && bits_ == rhs.bits_;
  }

 private:
  int d_ = 1;
  uint32_t rows_ = 1;
  uint32_t rounds_ = 0;
  std::vector<uint8_t> bits_;
};

// splitmix64 finalizer; also used for child-seed derivation.
uint64_t mix64(uint64_t x);

}  // namespace thorp
