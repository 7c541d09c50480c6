#pragma once

// Batch experiment engines behind the CLI subcommands. Each returns a
// machine-readable document (JSON tree plus a flat record table for
// CSV) and is deterministic given its config.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "jsonio.hpp"

namespace thorp {

inline constexpr const char* kToolName = "thorp";
inline constexpr const char* kToolVersion = "0.1.0";

struct Document {
  JsonValue root = JsonValue::object();
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string to_json() const;
  std::string to_csv() const;
  std::string render(const std::string& format) const;  // "json" | "csv"
};

// Exit-code-1 condition: an internal invariant failed during a run.
struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Document run_mix(int d, double threshold);
Document run_entropy_decay(int d, uint32_t rounds);
Document run_contract(int d, uint32_t samples, uint64_t seed, uint32_t max_support);
Document run_pair(int d, double threshold);
Document run_couple(int d, int t_param, bool geometric, uint64_t seed,
                    bool exhaustive);
Document run_lemmas(uint64_t trials, uint64_t seed);

// Simplex point from i.i.d. exponentials; deterministic in rng state.
std::vector<double> random_simplex(std::mt19937_64& rng, size_t n);
// Child seed for trial i under a master seed.
uint64_t child_seed(uint64_t master, uint64_t trial);

}  // namespace thorp
