#include "thorp/thorp.h"

#include <cstring>
#include <memory>
#include <string>

#include "analysis.hpp"
#include "coupling.hpp"
#include "core.hpp"
#include "experiments.hpp"
#include "json.hpp"
#include "jsonio.hpp"
#include "shuffle.hpp"

namespace {

thread_local std::string g_last_error;

template <typename Fn>
thorp_status guarded(Fn&& fn) {
  try {
    fn();
    return THORP_OK;
  } catch (const thorp::CapacityError& e) {
    g_last_error = e.what();
    return THORP_ERR_CAPACITY;
  } catch (const thorp::InvariantViolation& e) {
    g_last_error = e.what();
    return THORP_ERR_INVARIANT;
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return THORP_ERR_ARG;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return THORP_ERR_DOMAIN;
  }
}

thorp_status arg_error(const char* msg) {
  g_last_error = msg;
  return THORP_ERR_ARG;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

thorp::Permutation to_perm(const uint32_t* locs, uint32_t n) {
  thorp::Permutation p(std::vector<uint32_t>(locs, locs + n));
  if (!p.is_valid())
    throw std::invalid_argument("locs is not a bijection on [0, n)");
  return p;
}

}  // namespace

struct thorp_oracle {
  std::unique_ptr<thorp::BitOracle> impl;
};

struct thorp_dist {
  thorp::PermDistribution mu;
  // Step tables are built lazily and reused across steps.
  std::shared_ptr<const thorp::StepOperator> op;
};

extern "C" {

const char* thorp_version(void) { return thorp::kToolVersion; }

const char* thorp_last_error(void) { return g_last_error.c_str(); }

void thorp_string_free(char* s) { delete[] s; }

thorp_status thorp_split_position(uint32_t x, int d, uint32_t* l_out,
                                  int* r_out) {
  if (!l_out || !r_out) return arg_error("null output pointer");
  return guarded([&] {
    auto [l, r] = thorp::split_position(x, d);
    *l_out = l;
    *r_out = r;
  });
}

thorp_status thorp_round_image(uint32_t x, int z, int d, uint32_t* out) {
  if (!out) return arg_error("null output pointer");
  return guarded([&] { *out = thorp::round_image(x, z, d); });
}

thorp_status thorp_perm_rank(const uint32_t* locs, uint32_t n, uint64_t* out) {
  if (!locs || !out) return arg_error("null pointer");
  return guarded([&] { *out = thorp::perm_rank(to_perm(locs, n)); });
}

thorp_status thorp_perm_unrank(uint64_t rank, uint32_t n, uint32_t* locs_out) {
  if (!locs_out) return arg_error("null pointer");
  return guarded([&] {
    const auto p = thorp::perm_unrank(rank, n);
    std::memcpy(locs_out, p.locs.data(), n * sizeof(uint32_t));
  });
}

thorp_status thorp_reverse_round_seeded(const uint32_t* locs, uint32_t n,
                                        uint32_t t, uint64_t seed,
                                        uint32_t* locs_out) {
  if (!locs || !locs_out) return arg_error("null pointer");
  return guarded([&] {
    const thorp::SeededOracle z(seed);
    const auto next = thorp::reverse_round(to_perm(locs, n), t, z);
    std::memcpy(locs_out, next.locs.data(), n * sizeof(uint32_t));
  });
}

thorp_status thorp_forward_round(const uint32_t* locs, uint32_t n,
                                 const int* coins, uint32_t* locs_out) {
  if (!locs || !coins || !locs_out) return arg_error("null pointer");
  return guarded([&] {
    const std::vector<int> c(coins, coins + n / 2);
    const auto next = thorp::forward_round(to_perm(locs, n), c);
    std::memcpy(locs_out, next.locs.data(), n * sizeof(uint32_t));
  });
}

thorp_status thorp_oracle_seeded(uint64_t seed, thorp_oracle** out) {
  if (!out) return arg_error("null output pointer");
  return guarded([&] {
    *out = new thorp_oracle{std::make_unique<thorp::SeededOracle>(seed)};
  });
}

thorp_status thorp_oracle_keyed(const uint8_t* key, thorp_oracle** out) {
  if (!key || !out) return arg_error("null pointer");
  return guarded([&] {
    std::array<uint8_t, 16> k;
    std::memcpy(k.data(), key, 16);
    *out = new thorp_oracle{std::make_unique<thorp::KeyedOracle>(k)};
  });
}

thorp_status thorp_oracle_tabular(int d, uint32_t rounds, const uint8_t* bits,
                                  thorp_oracle** out) {
  if (!bits || !out) return arg_error("null pointer");
  return guarded([&] {
    auto z = std::make_unique<thorp::TabularOracle>(d, rounds);
    for (uint32_t t = 0; t < rounds; ++t)
      for (uint32_t l = 0; l < z->rows(); ++l)
        z->set(l, t, bits[t * z->rows() + l]);
    *out = new thorp_oracle{std::move(z)};
  });
}

thorp_status thorp_oracle_bit(const thorp_oracle* z, uint32_t l, uint32_t t,
                              int* out) {
  if (!z || !out) return arg_error("null pointer");
  return guarded([&] { *out = z->impl->bit(l, t); });
}

void thorp_oracle_free(thorp_oracle* z) { delete z; }

thorp_status thorp_dist_uniform(int d, thorp_dist** out) {
  if (!out) return arg_error("null output pointer");
  return guarded([&] { *out = new thorp_dist{thorp::uniform_dist(d), nullptr}; });
}

thorp_status thorp_dist_point_mass(int d, uint64_t rank, thorp_dist** out) {
  if (!out) return arg_error("null output pointer");
  return guarded(
      [&] { *out = new thorp_dist{thorp::point_mass(d, rank), nullptr}; });
}

thorp_status thorp_dist_from_probs(int d, const double* probs, uint64_t len,
                                   thorp_dist** out) {
  if (!probs || !out) return arg_error("null pointer");
  return guarded([&] {
    thorp::PermDistribution mu{d, std::vector<double>(probs, probs + len)};
    if (!thorp::is_distribution(mu))
      throw std::invalid_argument("probs is not a distribution over S_n");
    *out = new thorp_dist{std::move(mu), nullptr};
  });
}

thorp_status thorp_dist_len(const thorp_dist* mu, uint64_t* out) {
  if (!mu || !out) return arg_error("null pointer");
  *out = mu->mu.probs.size();
  return THORP_OK;
}

thorp_status thorp_dist_probs(const thorp_dist* mu, double* out, uint64_t len) {
  if (!mu || !out) return arg_error("null pointer");
  if (len != mu->mu.probs.size()) return arg_error("wrong buffer length");
  std::memcpy(out, mu->mu.probs.data(), len * sizeof(double));
  return THORP_OK;
}

thorp_status thorp_dist_step(thorp_dist* mu) {
  if (!mu) return arg_error("null distribution");
  return guarded([&] {
    if (!mu->op) mu->op = std::make_shared<const thorp::StepOperator>(mu->mu.d);
    mu->mu = mu->op->step(mu->mu);
  });
}

thorp_status thorp_dist_entropy(const thorp_dist* mu, double* out) {
  if (!mu || !out) return arg_error("null pointer");
  return guarded([&] { *out = thorp::relative_entropy(mu->mu); });
}

thorp_status thorp_dist_l1(const thorp_dist* p, const thorp_dist* q,
                           double* out) {
  if (!p || !q || !out) return arg_error("null pointer");
  return guarded([&] { *out = thorp::l1_distance(p->mu, q->mu); });
}

thorp_status thorp_dist_to_json(const thorp_dist* mu, char** out) {
  if (!mu || !out) return arg_error("null pointer");
  return guarded([&] { *out = dup_string(thorp::dist_to_json(mu->mu)); });
}

thorp_status thorp_dist_from_json(const char* text, thorp_dist** out) {
  if (!text || !out) return arg_error("null pointer");
  return guarded([&] {
    auto mu = thorp::dist_from_json(text);
    if (!thorp::is_distribution(mu))
      throw std::invalid_argument("document is not a distribution");
    *out = new thorp_dist{std::move(mu), nullptr};
  });
}

void thorp_dist_free(thorp_dist* mu) { delete mu; }

thorp_status thorp_d_scalar(double p, double q, double* out) {
  if (!out) return arg_error("null output pointer");
  return guarded([&] { *out = thorp::d_scalar(p, q); });
}

thorp_status thorp_mixing_time(int d, double threshold, uint32_t* out) {
  if (!out) return arg_error("null output pointer");
  return guarded([&] { *out = thorp::mixing_time(d, threshold); });
}

thorp_status thorp_pair_mixing_time(int d, double threshold, uint32_t* out) {
  if (!out) return arg_error("null output pointer");
  return guarded([&] {
    *out = thorp::pair_mixing_time(thorp::pair_chain_build(d), threshold);
  });
}

thorp_status thorp_experiment_run(const char* config_json, char** out_doc) {
  if (!config_json || !out_doc) return arg_error("null pointer");
  return guarded([&] {
    const auto cfg = nlohmann::json::parse(config_json);
    const std::string command = cfg.at("command").get<std::string>();
    const std::string format = cfg.value("format", std::string("json"));
    thorp::Document doc;
    if (command == "mix") {
      doc = thorp::run_mix(cfg.at("d").get<int>(),
                           cfg.value("threshold", 0.25));
    } else if (command == "entropy-decay") {
      doc = thorp::run_entropy_decay(cfg.at("d").get<int>(),
                                     cfg.value("rounds", 16u));
    } else if (command == "contract") {
      doc = thorp::run_contract(cfg.at("d").get<int>(),
                                cfg.value("samples", 50u),
                                cfg.value("seed", 0ull),
                                cfg.value("max_support", 256u));
    } else if (command == "pair") {
      doc = thorp::run_pair(cfg.at("d").get<int>(),
                            cfg.value("threshold", 0.25));
    } else if (command == "couple") {
      doc = thorp::run_couple(cfg.at("d").get<int>(), cfg.value("T", 1),
                              cfg.value("geometric", false),
                              cfg.value("seed", 0ull),
                              cfg.value("exhaustive", false));
    } else if (command == "lemmas") {
      doc = thorp::run_lemmas(cfg.value("trials", 1000ull),
                              cfg.value("seed", 0ull));
    } else {
      throw std::invalid_argument("unknown command: " + command);
    }
    *out_doc = dup_string(doc.render(format));
  });
}

}  // extern "C"
