#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

namespace thorp {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void require_exact_d(int d) {
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  if (d > kMaxExactD)
    throw CapacityError("exact S_n work limited to d <= 3 (n! <= 40320)");
}

}  // namespace

PermDistribution uniform_dist(int d) {
  require_exact_d(d);
  const uint64_t nf = factorial(1u << d);
  PermDistribution mu{d, std::vector<double>(nf, 1.0 / static_cast<double>(nf))};
  return mu;
}

PermDistribution point_mass(int d, uint64_t rank) {
  require_exact_d(d);
  const uint64_t nf = factorial(1u << d);
  if (rank >= nf) throw std::out_of_range("point_mass: rank >= n!");
  PermDistribution mu{d, std::vector<double>(nf, 0.0)};
  mu.probs[rank] = 1.0;
  return mu;
}

bool is_distribution(const PermDistribution& mu, double tol) {
  if (mu.probs.size() != factorial(mu.n())) return false;
  double s = 0.0;
  for (double p : mu.probs) {
    if (p < 0.0) return false;
    s += p;
  }
  return std::abs(s - 1.0) <= tol;
}

StepOperator::StepOperator(int d) : d_(d) {
  require_exact_d(d);
  n_ = 1u << d;
  nf_ = factorial(n_);
  patterns_ = 1u << (n_ / 2);
  perms_.resize(nf_);
  for (uint64_t r = 0; r < nf_; ++r) perms_[r] = perm_unrank(r, n_);
  dest_.resize(static_cast<size_t>(patterns_) * nf_);
  std::vector<uint32_t> nu(n_);
  Permutation scratch{std::vector<uint32_t>(n_)};
  for (uint32_t p = 0; p < patterns_; ++p) {
    for (uint32_t x = 0; x < n_; ++x)
      nu[x] = round_image(x, (p >> (x >> 1)) & 1, d_);
    for (uint64_t r = 0; r < nf_; ++r) {
      for (uint32_t i = 0; i < n_; ++i)
        scratch.locs[i] = nu[perms_[r].locs[i]];
      dest_[static_cast<size_t>(p) * nf_ + r] =
          static_cast<uint32_t>(perm_rank(scratch));
    }
  }
}

PermDistribution StepOperator::step(const PermDistribution& mu) const {
  if (mu.d != d_ || mu.probs.size() != nf_)
    throw std::invalid_argument("StepOperator: distribution d mismatch");
  PermDistribution out{d_, std::vector<double>(nf_, 0.0)};
  const double w = 1.0 / patterns_;
  for (uint32_t p = 0; p < patterns_; ++p) {
    const uint32_t* dest = dest_.data() + static_cast<size_t>(p) * nf_;
    for (uint64_t r = 0; r < nf_; ++r)
      if (mu.probs[r] != 0.0) out.probs[dest[r]] += mu.probs[r] * w;
  }
  return out;
}

PermDistribution StepOperator::steps(PermDistribution mu, uint32_t rounds) const {
  for (uint32_t t = 0; t < rounds; ++t) mu = step(mu);
  return mu;
}

double l1_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size())
    throw std::invalid_argument("l1_distance: length mismatch");
  double s = 0.0;
  for (size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return s;
}

double l1_distance(const PermDistribution& p, const PermDistribution& q) {
  if (p.d != q.d) throw std::invalid_argument("l1_distance: d mismatch");
  return l1_distance(std::span<const double>(p.probs),
                     std::span<const double>(q.probs));
}

double halved_tv(const PermDistribution& p, const PermDistribution& q) {
  return 0.5 * l1_distance(p, q);
}

double relative_entropy(std::span<const double> p) {
  const double v = static_cast<double>(p.size());
  double s = 0.0;
  for (double pi : p)
    if (pi > 0.0) s += pi * std::log(v * pi);
  return s;
}

double relative_entropy(const PermDistribution& p) {
  return relative_entropy(std::span<const double>(p.probs));
}

PinskerResult pinsker_check(const PermDistribution& p) {
  PinskerResult r;
  r.lhs = l1_distance(p, uniform_dist(p.d));
  r.rhs = std::sqrt(0.5 * relative_entropy(p));
  r.ok_unhalved = r.lhs <= r.rhs + 1e-12;
  r.ok_halved = 0.5 * r.lhs <= r.rhs + 1e-12;
  return r;
}

double d_scalar(double p, double q) {
  if (p < 0.0 || q < 0.0) throw std::domain_error("d_scalar: negative input");
  return 0.5 * xlogx(p) + 0.5 * xlogx(q) - xlogx(0.5 * (p + q));
}

double d_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size())
    throw std::invalid_argument("d_distance: length mismatch");
  double s = 0.0;
  for (size_t i = 0; i < p.size(); ++i) s += d_scalar(p[i], q[i]);
  return s;
}

double EntropyDecomposition::total() const {
  double s = residual;
  for (double v : per_location) s += v;
  return s;
}

EntropyDecomposition chain_rule_decompose(const PermDistribution& mu, uint32_t cut) {
  const uint32_t n = mu.n();
  if (cut > n - 1) throw std::out_of_range("chain_rule_decompose: cut > n-1");
  const uint64_t nf = factorial(n);
  if (mu.probs.size() != nf)
    throw std::invalid_argument("chain_rule_decompose: bad distribution");

  // Precompute the card occupying each position, per permutation.
  std::vector<std::vector<uint32_t>> inv(nf);
  for (uint64_t r = 0; r < nf; ++r) {
    if (mu.probs[r] == 0.0) continue;
    inv[r] = perm_unrank(r, n).inverse().locs;
  }
  // Cards fit in 4 bits; suffix keys pack positions k..n-1.
  auto suffix_key = [&](const std::vector<uint32_t>& v, uint32_t from) {
    uint64_t key = 1;  // sentinel so empty suffix != position-0 card 0
    for (uint32_t k = from; k < n; ++k) key = (key << 4) | v[k];
    return key;
  };

  EntropyDecomposition dec;
  // Per-location terms: ENT(card at position k | cards above k).
  for (uint32_t k = cut; k < n; ++k) {
    std::unordered_map<uint64_t, std::vector<double>> groups;
    for (uint64_t r = 0; r < nf; ++r) {
      if (mu.probs[r] == 0.0) continue;
      auto& acc = groups[suffix_key(inv[r], k + 1)];
      if (acc.empty()) acc.assign(n, 0.0);
      acc[inv[r][k]] += mu.probs[r];
    }
    const double support = static_cast<double>(k + 1);
    double term = 0.0;
    for (const auto& [key, acc] : groups) {
      double w = 0.0;
      for (double v : acc) w += v;
      if (w <= 0.0) continue;
      double ent = 0.0;
      for (double v : acc)
        if (v > 0.0) ent += (v / w) * std::log(support * v / w);
      term += w * ent;
    }
    dec.per_location.push_back(term);
  }

  // Residual: E(ENT(pi | positions cut..n-1)), over the cut! orderings
  // of the remaining cards.
  if (cut >= 2) {
    std::unordered_map<uint64_t, std::unordered_map<uint64_t, double>> groups;
    for (uint64_t r = 0; r < nf; ++r) {
      if (mu.probs[r] == 0.0) continue;
      uint64_t prefix = 1;
      for (uint32_t k = 0; k < cut; ++k) prefix = (prefix << 4) | inv[r][k];
      groups[suffix_key(inv[r], cut)][prefix] += mu.probs[r];
    }
    const double support = static_cast<double>(factorial(cut));
    for (const auto& [key, arrangements] : groups) {
      double w = 0.0;
      for (const auto& [a, v] : arrangements) w += v;
      double ent = 0.0;
      for (const auto& [a, v] : arrangements)
        if (v > 0.0) ent += (v / w) * std::log(support * v / w);
      dec.residual += w * ent;
    }
  }
  return dec;
}

ProjectionResult projection_check(std::span<const double> p,
                                  std::span<const double> q,
                                  std::span<const uint32_t> g,
                                  uint32_t image_size) {
  if (p.size() != q.size() || g.size() != p.size())
    throw std::invalid_argument("projection_check: length mismatch");
  std::vector<double> bigP(image_size, 0.0), bigQ(image_size, 0.0);
  for (size_t i = 0; i < p.size(); ++i) {
    if (g[i] >= image_size) throw std::out_of_range("projection_check: g out of range");
    bigP[g[i]] += p[i];
    bigQ[g[i]] += q[i];
  }
  ProjectionResult r;
  r.dpq = d_distance(p, q);
  r.dPQ = d_distance(bigP, bigQ);
  r.ok = r.dpq >= r.dPQ - 1e-12;
  return r;
}

double dent_ratio(std::span<const double> mu) {
  const double ent = relative_entropy(mu);
  if (ent <= 0.0)
    throw std::domain_error("dent_ratio: undefined for the uniform distribution");
  const double v = static_cast<double>(mu.size());
  std::vector<double> u(mu.size(), 1.0 / v);
  return d_distance(mu, u) * std::log(v) / ent;
}

bool convexity_check(double p, double q1, double q2, double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::domain_error("convexity_check: lambda outside [0, 1]");
  const double lhs = d_scalar(p, lambda * q1 + (1.0 - lambda) * q2);
  const double rhs = lambda * d_scalar(p, q1) + (1.0 - lambda) * d_scalar(p, q2);
  return lhs <= rhs + 1e-12;
}

uint32_t mixing_time(int d, double threshold) {
  if (threshold <= 0.0 || threshold > 2.0)
    throw std::domain_error("mixing_time: threshold outside (0, 2]");
  const StepOperator op(d);
  const PermDistribution u = uniform_dist(d);
  PermDistribution mu = point_mass(d, 0);
  constexpr uint32_t kCap = 10000;
  for (uint32_t t = 0; t <= kCap; ++t) {
    if (l1_distance(mu, u) <= threshold) return t;
    mu = op.step(mu);
  }
  throw std::runtime_error("mixing_time: did not mix within 10000 rounds");
}

std::vector<double> mixing_curve(int d, uint32_t len) {
  const StepOperator op(d);
  const PermDistribution u = uniform_dist(d);
  PermDistribution mu = point_mass(d, 0);
  std::vector<double> curve;
  curve.reserve(len);
  for (uint32_t t = 0; t < len; ++t) {
    curve.push_back(l1_distance(mu, u));
    if (t + 1 < len) mu = op.step(mu);
  }
  return curve;
}

PermDistribution shuffle_law(int d, uint32_t rounds) {
  const StepOperator op(d);
  return op.steps(point_mass(d, 0), rounds);
}

PermDistribution convolve(const StepOperator& op, const PermDistribution& law,
                          const PermDistribution& mu) {
  if (law.d != op.d() || mu.d != op.d())
    throw std::invalid_argument("convolve: d mismatch");
  const uint64_t nf = op.group_order();
  PermDistribution out{op.d(), std::vector<double>(nf, 0.0)};
  const uint32_t n = 1u << op.d();
  Permutation scratch{std::vector<uint32_t>(n)};
  for (uint64_t s = 0; s < nf; ++s) {
    const double ws = mu.probs[s];
    if (ws == 0.0) continue;
    const Permutation& sigma = op.perm(s);
    for (uint64_t r = 0; r < nf; ++r) {
      if (law.probs[r] == 0.0) continue;
      for (uint32_t i = 0; i < n; ++i)
        scratch.locs[i] = op.perm(r).locs[sigma.locs[i]];
      out.probs[perm_rank(scratch)] += law.probs[r] * ws;
    }
  }
  return out;
}

ContractionReport contraction_experiment(int d, uint32_t samples, uint64_t seed,
                                         uint32_t max_support) {
  require_exact_d(d);
  const StepOperator op(d);
  const PermDistribution law = shuffle_law(d, static_cast<uint32_t>(d));
  const uint64_t nf = op.group_order();
  ContractionReport rep;
  rep.d = d;

  std::mt19937_64 rng(mix64(seed));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto rand_rank = [&] { return static_cast<uint64_t>(rng() % nf); };

  for (uint32_t i = 0; i < samples; ++i) {
    ContractionSample smp;
    PermDistribution mu{d, std::vector<double>(nf, 0.0)};
    switch (i % 3) {
      case 0: {
        smp.kind = "point";
        mu.probs[rand_rank()] = 1.0;
        break;
      }
      case 1: {
        smp.kind = "sparse";
        const uint32_t cap = std::min<uint64_t>(max_support, nf);
        const uint32_t support = 2 + static_cast<uint32_t>(rng() % (cap - 1));
        double total = 0.0;
        for (uint32_t k = 0; k < support; ++k) {
          const double w = -std::log(1.0 - unit(rng));
          mu.probs[rand_rank()] += w;
          total += w;
        }
        for (double& p : mu.probs) p /= total;
        break;
      }
      default: {
        // Full-dimension mu only where n! is small; otherwise sparse.
        if (d <= 2) {
          smp.kind = "dense";
          double total = 0.0;
          for (double& p : mu.probs) {
            p = -std::log(1.0 - unit(rng));
            total += p;
          }
          for (double& p : mu.probs) p /= total;
        } else {
          smp.kind = "sparse";
          double total = 0.0;
          for (uint32_t k = 0; k < max_support; ++k) {
            const double w = unit(rng);
            mu.probs[rand_rank()] += w;
            total += w;
          }
          for (double& p : mu.probs) p /= total;
        }
        break;
      }
    }
    smp.ent_before = relative_entropy(mu);
    if (smp.ent_before <= 0.0) continue;  // uniform mu carries no signal
    smp.ent_after = relative_entropy(convolve(op, law, mu));
    smp.ratio = smp.ent_after / smp.ent_before;
    rep.samples.push_back(smp);
  }
  rep.max_ratio = 0.0;
  for (const auto& s : rep.samples) rep.max_ratio = std::max(rep.max_ratio, s.ratio);
  rep.fitted_c = d * (1.0 - rep.max_ratio);
  return rep;
}

uint32_t PairChain::index(uint32_t a, uint32_t b) const {
  if (a == b || a >= n || b >= n)
    throw std::invalid_argument("PairChain::index: need distinct positions");
  return a * (n - 1) + b - (b > a ? 1 : 0);
}

std::pair<uint32_t, uint32_t> PairChain::pair_of(uint32_t idx) const {
  const uint32_t a = idx / (n - 1);
  uint32_t b = idx % (n - 1);
  if (b >= a) ++b;
  return {a, b};
}

PairChain pair_chain_build(int d) {
  if (d < 1) throw std::invalid_argument("pair_chain_build: d < 1");
  if (d > kMaxPairD)
    throw CapacityError("pair chain limited to d <= 6 (4032 states)");
  PairChain chain;
  chain.d = d;
  chain.n = 1u << d;
  chain.states = chain.n * (chain.n - 1);
  chain.succ.resize(chain.states);
  for (uint32_t idx = 0; idx < chain.states; ++idx) {
    const auto [a, b] = chain.pair_of(idx);
    auto& row = chain.succ[idx];
    if ((a >> 1) == (b >> 1)) {
      for (int z = 0; z < 2; ++z)
        row.emplace_back(chain.index(round_image(a, z, d), round_image(b, z, d)), 0.5);
    } else {
      for (int za = 0; za < 2; ++za)
        for (int zb = 0; zb < 2; ++zb)
          row.emplace_back(chain.index(round_image(a, za, d), round_image(b, zb, d)),
                           0.25);
    }
  }
  return chain;
}

uint32_t pair_mixing_time(const PairChain& chain, double threshold) {
  if (threshold <= 0.0 || threshold > 2.0)
    throw std::domain_error("pair_mixing_time: threshold outside (0, 2]");
  const uint32_t s = chain.states;
  const double u = 1.0 / s;
  constexpr uint32_t kCap = 1000;
  uint32_t worst = 0;
  std::vector<double> cur(s), next(s);
  for (uint32_t start = 0; start < s; ++start) {
    std::fill(cur.begin(), cur.end(), 0.0);
    cur[start] = 1.0;
    uint32_t t = 0;
    for (;; ++t) {
      double dist = 0.0;
      for (double p : cur) dist += std::abs(p - u);
      if (dist <= threshold) break;
      if (t >= kCap)
        throw std::runtime_error("pair_mixing_time: no mixing within 1000 rounds");
      std::fill(next.begin(), next.end(), 0.0);
      for (uint32_t i = 0; i < s; ++i) {
        if (cur[i] == 0.0) continue;
        for (const auto& [j, p] : chain.succ[i]) next[j] += cur[i] * p;
      }
      cur.swap(next);
    }
    worst = std::max(worst, t);
  }
  return worst;
}

}  // namespace thorp
