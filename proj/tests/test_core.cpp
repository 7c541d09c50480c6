#include "core.hpp"

#include "doctest.h"

using namespace thorp;

TEST_CASE("split_position examples") {
  CHECK(split_position(5, 3) == std::pair<uint32_t, int>{2, 1});
  CHECK(split_position(0, 1) == std::pair<uint32_t, int>{0, 0});
  CHECK(split_position(7, 3) == std::pair<uint32_t, int>{3, 1});
  CHECK_THROWS_AS(split_position(8, 3), std::out_of_range);
}

TEST_CASE("split/join round-trip") {
  for (int d = 1; d <= 8; ++d)
    for (uint32_t x = 0; x < (1u << d); ++x) {
      auto [l, r] = split_position(x, d);
      CHECK(2 * l + static_cast<uint32_t>(r) == x);
    }
}

TEST_CASE("round_image examples") {
  CHECK(round_image(0, 0, 2) == 0);
  CHECK(round_image(1, 0, 2) == 2);
  CHECK(round_image(3, 1, 2) == 1);
}

TEST_CASE("round_image is a bijection for fixed z") {
  for (int d = 1; d <= 10; ++d)
    for (int z = 0; z < 2; ++z) {
      std::vector<bool> hit(1u << d, false);
      for (uint32_t x = 0; x < (1u << d); ++x) {
        const uint32_t y = round_image(x, z, d);
        CHECK_FALSE(hit[y]);
        hit[y] = true;
      }
    }
}

TEST_CASE("the two images of a position differ in the top bit") {
  for (int d = 1; d <= 8; ++d)
    for (uint32_t x = 0; x < (1u << d); ++x)
      CHECK((round_image(x, 0, d) ^ round_image(x, 1, d)) == (1u << (d - 1)));
}

TEST_CASE("rank/unrank examples") {
  CHECK(perm_rank(Permutation::identity(4)) == 0);
  CHECK(perm_unrank(23, 4).locs == std::vector<uint32_t>{3, 2, 1, 0});
  CHECK_THROWS_AS(perm_unrank(24, 4), std::out_of_range);
}

TEST_CASE("rank/unrank bijectivity by exhaustion") {
  for (uint32_t n : {2u, 4u, 8u})
    for (uint64_t r = 0; r < factorial(n); ++r) {
      const auto p = perm_unrank(r, n);
      CHECK(p.is_valid());
      CHECK(perm_rank(p) == r);
    }
}

TEST_CASE("unrank enumerates lexicographically") {
  auto prev = perm_unrank(0, 4);
  for (uint64_t r = 1; r < 24; ++r) {
    const auto cur = perm_unrank(r, 4);
    CHECK(prev.locs < cur.locs);
    prev = cur;
  }
}

TEST_CASE("permutation inverse and compose") {
  const auto p = perm_unrank(13, 4);
  CHECK(p.compose(p.inverse()) == Permutation::identity(4));
  CHECK(p.inverse().compose(p) == Permutation::identity(4));
}

TEST_CASE("seeded oracle is deterministic and roughly balanced") {
  const SeededOracle a(42), b(42), c(43);
  int ones = 0, diff = 0;
  for (uint32_t l = 0; l < 64; ++l)
    for (uint32_t t = 0; t < 64; ++t) {
      CHECK(a.bit(l, t) == b.bit(l, t));
      ones += a.bit(l, t);
      diff += a.bit(l, t) != c.bit(l, t);
    }
  CHECK(ones > 1600);
  CHECK(ones < 2500);
  CHECK(diff > 1600);  // different seeds decorrelate
}

TEST_CASE("keyed oracle is deterministic per key") {
  std::array<uint8_t, 16> k1{}, k2{};
  k2[0] = 1;
  const KeyedOracle a(k1), b(k1), c(k2);
  int diff = 0;
  for (uint32_t l = 0; l < 32; ++l)
    for (uint32_t t = 0; t < 32; ++t) {
      CHECK(a.bit(l, t) == b.bit(l, t));
      diff += a.bit(l, t) != c.bit(l, t);
    }
  CHECK(diff > 300);
}

TEST_CASE("tabular oracle rejects out-of-range queries") {
  TabularOracle z(3, 2);
  z.set(1, 1, 1);
  CHECK(z.bit(1, 1) == 1);
  CHECK_THROWS_AS(z.bit(4, 0), std::out_of_range);
  CHECK_THROWS_AS(z.bit(0, 2), std::out_of_range);
}

TEST_CASE("tabular from_code round-trips bit patterns") {
  for (uint64_t code = 0; code < 16; ++code) {
    const auto z = TabularOracle::from_code(2, 2, code);
    uint64_t back = 0;
    for (uint32_t t = 0; t < 2; ++t)
      for (uint32_t l = 0; l < 2; ++l)
        back |= static_cast<uint64_t>(z.bit(l, t)) << (t * 2 + l);
    CHECK(back == code);
  }
}
