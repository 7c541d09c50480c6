#pragma once

// Exact distribution evolution over S_n, the entropy and distance
// functionals, numerical lemma checks, mixing times, the entropy
// contraction experiment, and the two-card pair chain.

#include <cstdint>
#include <span>
#include <vector>

#include "core.hpp"
#include "shuffle.hpp"

namespace thorp {

// Full-group exact work is capped at n! <= 40320, i.e. d <= 3.
inline constexpr int kMaxExactD = 3;
// Pair chain capped at n(n-1) <= 4032 states, i.e. d <= 6.
inline constexpr int kMaxPairD = 6;

struct PermDistribution {
  int d = 1;
  std::vector<double> probs;  // length n!, indexed by Lehmer rank

  uint32_t n() const { return 1u << d; }
  uint64_t size() const { return probs.size(); }
};

PermDistribution uniform_dist(int d);
PermDistribution point_mass(int d, uint64_t rank);
// Sum within tol of 1, entries >= 0, length n!.
bool is_distribution(const PermDistribution& mu, double tol = 1e-12);

// One shuffle round applied to a distribution, averaged exactly over
// all 2^(n/2) oracle bit patterns. Caches the rank-composition tables,
// so keep one evolver per d when stepping repeatedly.
class StepOperator {
 public:
  explicit StepOperator(int d);  // CapacityError for d > 3

  PermDistribution step(const PermDistribution& mu) const;
  PermDistribution steps(PermDistribution mu, uint32_t rounds) const;

  int d() const { return d_; }
  uint64_t group_order() const { return nf_; }
  const Permutation& perm(uint64_t rank) const { return perms_[rank]; }

 private:
  int d_;
  uint32_t n_, patterns_;
  uint64_t nf_;
  std::vector<Permutation> perms_;  // all of S_n by rank
  std::vector<uint32_t> dest_;      // dest_[p * nf_ + r] = rank(nu_p o pi_r)
};

// Paper-convention (unhalved) L1: sum |p_i - q_i|, in [0, 2].
double l1_distance(const PermDistribution& p, const PermDistribution& q);
double l1_distance(std::span<const double> p, std::span<const double> q);
// Conventional total variation, half the above.
double halved_tv(const PermDistribution& p, const PermDistribution& q);

// ENT(p) = sum p_i log(|V| p_i), natural log, 0 log 0 = 0.
double relative_entropy(std::span<const double> p);
double relative_entropy(const PermDistribution& p);

struct PinskerResult {
  double lhs = 0;         // unhalved L1 distance to uniform
  double rhs = 0;         // sqrt(ENT / 2)
  bool ok_unhalved = false;  // lhs <= rhs (the bound as printed; fails)
  bool ok_halved = false;    // lhs / 2 <= rhs (standard Pinsker; holds)
};
PinskerResult pinsker_check(const PermDistribution& p);

// d(p, q) = p/2 log p + q/2 log q - (p+q)/2 log((p+q)/2), for scalars.
double d_scalar(double p, double q);
// Coordinatewise sum of d_scalar over two equal-length distributions.
double d_distance(std::span<const double> p, std::span<const double> q);

struct EntropyDecomposition {
  double residual = 0;             // E(ENT(pi | F_cut))
  std::vector<double> per_location;  // ENT(pi, k), k = cut .. n-1

  double total() const;
};
// Chain-rule split of ENT(mu) at `cut`: residual + sum(per_location)
// equals relative_entropy(mu). Location k conditions on the cards
// occupying positions k+1..n-1.
EntropyDecomposition chain_rule_decompose(const PermDistribution& mu, uint32_t cut);

struct ProjectionResult {
  double dpq = 0;  // d(p, q) on the original space
  double dPQ = 0;  // d of the pushforwards under g
  bool ok = false;
};
ProjectionResult projection_check(std::span<const double> p,
                                  std::span<const double> q,
                                  std::span<const uint32_t> g,
                                  uint32_t image_size);

// d(mu, U) * log|V| / ENT(mu); throws for uniform mu (ENT == 0).
double dent_ratio(std::span<const double> mu);

// Convexity of d(p, .) at one interpolation point.
bool convexity_check(double p, double q1, double q2, double lambda);

// Smallest t with || step^t(point mass at id) - U || <= threshold,
// unhalved convention. Exact evolution; d <= 3.
uint32_t mixing_time(int d, double threshold);
// Per-round distance curve from the identity start, rounds 0..len-1.
std::vector<double> mixing_curve(int d, uint32_t len);

// Exact law of X_t (t rounds from the identity), as a distribution.
PermDistribution shuffle_law(int d, uint32_t rounds);
// law(X o mu) for X ~ `law` and independent mu; exact convolution over
// the support of mu.
PermDistribution convolve(const StepOperator& op, const PermDistribution& law,
                          const PermDistribution& mu);

struct ContractionSample {
  std::string kind;      // "point", "sparse", "dense"
  double ent_before = 0;
  double ent_after = 0;
  double ratio = 0;      // ent_after / ent_before
};
struct ContractionReport {
  int d = 1;
  std::vector<ContractionSample> samples;
  double max_ratio = 0;
  double fitted_c = 0;   // d * (1 - max_ratio)
};
// ENT contraction of the d-round shuffle over sampled non-uniform mu.
// For d = 3, sampled mu have support <= max_support.
ContractionReport contraction_experiment(int d, uint32_t samples, uint64_t seed,
                                         uint32_t max_support = 256);

// Markov chain on the n(n-1) ordered pairs of distinct positions
// induced by one reverse-shuffle round: positions sharing L consume
// one shared bit, others two independent bits.
struct PairChain {
  int d = 1;
  uint32_t n = 2;
  uint32_t states = 2;
  // Sparse rows: succ[row] lists (state, probability).
  std::vector<std::vector<std::pair<uint32_t, double>>> succ;

  uint32_t index(uint32_t a, uint32_t b) const;  // a != b
  std::pair<uint32_t, uint32_t> pair_of(uint32_t idx) const;
};
PairChain pair_chain_build(int d);  // CapacityError for d > 6
uint32_t pair_mixing_time(const PairChain& chain, double threshold);

}  // namespace thorp
