#include "thorp/thorp.h"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"

TEST_CASE("version and error text") {
  CHECK(std::string(thorp_version()) == "0.1.0");
}

TEST_CASE("position helpers") {
  uint32_t l = 0, y = 0;
  int r = 0;
  REQUIRE(thorp_split_position(5, 3, &l, &r) == THORP_OK);
  CHECK(l == 2);
  CHECK(r == 1);
  CHECK(thorp_split_position(8, 3, &l, &r) == THORP_ERR_DOMAIN);
  CHECK(std::strlen(thorp_last_error()) > 0);
  REQUIRE(thorp_round_image(3, 1, 2, &y) == THORP_OK);
  CHECK(y == 1);
  CHECK(thorp_round_image(3, 1, 0, &y) == THORP_ERR_DOMAIN);
  CHECK(thorp_round_image(3, 1, 2, nullptr) == THORP_ERR_ARG);
}

TEST_CASE("rank/unrank through the C surface") {
  uint32_t locs[4];
  REQUIRE(thorp_perm_unrank(23, 4, locs) == THORP_OK);
  CHECK(locs[0] == 3);
  CHECK(locs[3] == 0);
  uint64_t rank = 99;
  REQUIRE(thorp_perm_rank(locs, 4, &rank) == THORP_OK);
  CHECK(rank == 23);
  locs[0] = locs[1];  // not a bijection
  CHECK(thorp_perm_rank(locs, 4, &rank) == THORP_ERR_DOMAIN);
}

TEST_CASE("round application through the C surface") {
  uint32_t id[4] = {0, 1, 2, 3};
  uint32_t out[4];
  const int coins[2] = {0, 0};
  REQUIRE(thorp_forward_round(id, 4, coins, out) == THORP_OK);
  // All-zero coins interleave bottom/top halves.
  CHECK(out[0] == 0);
  CHECK(out[2] == 1);
  REQUIRE(thorp_reverse_round_seeded(id, 4, 0, 42, out) == THORP_OK);
  uint32_t seen = 0;
  for (uint32_t v : out) seen |= 1u << v;
  CHECK(seen == 0xF);  // still a bijection
}

TEST_CASE("oracle handles") {
  thorp_oracle* z = nullptr;
  REQUIRE(thorp_oracle_seeded(7, &z) == THORP_OK);
  int b1 = -1, b2 = -1;
  REQUIRE(thorp_oracle_bit(z, 3, 5, &b1) == THORP_OK);
  REQUIRE(thorp_oracle_bit(z, 3, 5, &b2) == THORP_OK);
  CHECK(b1 == b2);
  thorp_oracle_free(z);

  const uint8_t bits[4] = {1, 0, 0, 1};
  REQUIRE(thorp_oracle_tabular(2, 2, bits, &z) == THORP_OK);
  REQUIRE(thorp_oracle_bit(z, 0, 0, &b1) == THORP_OK);
  CHECK(b1 == 1);
  CHECK(thorp_oracle_bit(z, 2, 0, &b1) == THORP_ERR_DOMAIN);
  thorp_oracle_free(z);

  uint8_t key[16] = {};
  REQUIRE(thorp_oracle_keyed(key, &z) == THORP_OK);
  REQUIRE(thorp_oracle_bit(z, 0, 0, &b1) == THORP_OK);
  thorp_oracle_free(z);
}

TEST_CASE("distribution handles: step, entropy, l1") {
  thorp_dist* mu = nullptr;
  thorp_dist* u = nullptr;
  REQUIRE(thorp_dist_point_mass(2, 0, &mu) == THORP_OK);
  REQUIRE(thorp_dist_uniform(2, &u) == THORP_OK);
  double ent = -1;
  REQUIRE(thorp_dist_entropy(mu, &ent) == THORP_OK);
  CHECK(ent == doctest::Approx(std::log(24.0)));
  double l1 = -1;
  REQUIRE(thorp_dist_l1(mu, u, &l1) == THORP_OK);
  CHECK(l1 == doctest::Approx(23.0 / 12));
  // Entropy never increases along the chain.
  double prev = ent;
  for (int t = 0; t < 8; ++t) {
    REQUIRE(thorp_dist_step(mu) == THORP_OK);
    REQUIRE(thorp_dist_entropy(mu, &ent) == THORP_OK);
    CHECK(ent <= prev + 1e-12);
    prev = ent;
  }
  thorp_dist_free(mu);
  thorp_dist_free(u);

  CHECK(thorp_dist_uniform(4, &u) == THORP_ERR_CAPACITY);
}

TEST_CASE("distribution JSON round-trip through the C surface") {
  thorp_dist* mu = nullptr;
  REQUIRE(thorp_dist_point_mass(2, 11, &mu) == THORP_OK);
  char* text = nullptr;
  REQUIRE(thorp_dist_to_json(mu, &text) == THORP_OK);
  CHECK(std::string(text).find("L1-unhalved") != std::string::npos);
  thorp_dist* back = nullptr;
  REQUIRE(thorp_dist_from_json(text, &back) == THORP_OK);
  uint64_t len = 0;
  REQUIRE(thorp_dist_len(back, &len) == THORP_OK);
  CHECK(len == 24);
  std::vector<double> probs(len);
  REQUIRE(thorp_dist_probs(back, probs.data(), len) == THORP_OK);
  CHECK(probs[11] == 1.0);
  thorp_string_free(text);
  thorp_dist_free(mu);
  thorp_dist_free(back);
}

TEST_CASE("scalar and mixing entry points") {
  double v = -1;
  REQUIRE(thorp_d_scalar(1, 0, &v) == THORP_OK);
  CHECK(v == doctest::Approx(std::log(2.0) / 2));
  CHECK(thorp_d_scalar(-1, 0, &v) == THORP_ERR_DOMAIN);
  uint32_t t = 99;
  REQUIRE(thorp_mixing_time(1, 0.25, &t) == THORP_OK);
  CHECK(t == 1);
  CHECK(thorp_mixing_time(9, 0.25, &t) == THORP_ERR_CAPACITY);
  REQUIRE(thorp_pair_mixing_time(1, 0.25, &t) == THORP_OK);
  CHECK(t == 1);
  CHECK(thorp_pair_mixing_time(7, 0.25, &t) == THORP_ERR_CAPACITY);
}

TEST_CASE("experiment runner produces documents and errors") {
  char* doc = nullptr;
  REQUIRE(thorp_experiment_run(R"({"command":"mix","d":1,"threshold":0.25})",
                               &doc) == THORP_OK);
  const std::string text(doc);
  CHECK(text.find("\"mixing_time\": 1") != std::string::npos);
  CHECK(text.find("\"l1_convention\": \"L1-unhalved\"") != std::string::npos);
  thorp_string_free(doc);

  REQUIRE(thorp_experiment_run(
              R"({"command":"lemmas","trials":50,"seed":1,"format":"csv"})",
              &doc) == THORP_OK);
  CHECK(std::string(doc).rfind("suite,trials,violations", 0) == 0);
  thorp_string_free(doc);

  CHECK(thorp_experiment_run(R"({"command":"mix","d":9})", &doc) ==
        THORP_ERR_CAPACITY);
  CHECK(thorp_experiment_run("{not json", &doc) == THORP_ERR_ARG);
  CHECK(thorp_experiment_run(R"({"command":"nope"})", &doc) ==
        THORP_ERR_DOMAIN);
}

TEST_CASE("experiment runner is deterministic per config") {
  const char* cfg = R"({"command":"contract","d":2,"samples":9,"seed":5})";
  char* a = nullptr;
  char* b = nullptr;
  REQUIRE(thorp_experiment_run(cfg, &a) == THORP_OK);
  REQUIRE(thorp_experiment_run(cfg, &b) == THORP_OK);
  CHECK(std::string(a) == std::string(b));
  thorp_string_free(a);
  thorp_string_free(b);
}
