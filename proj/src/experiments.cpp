#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace thorp {

std::string Document::to_json() const { return root.dump(2) + "\n"; }

std::string Document::to_csv() const {
  std::string out;
  for (size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

std::string Document::render(const std::string& format) const {
  if (format == "json") return to_json();
  if (format == "csv") return to_csv();
  throw std::invalid_argument("unknown output format: " + format);
}

std::vector<double> random_simplex(std::mt19937_64& rng, size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (double& v : p) {
    v = -std::log(1.0 - unit(rng));
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

uint64_t child_seed(uint64_t master, uint64_t trial) {
  return mix64(master ^ mix64(trial + 0x5851f42d4c957f2dull));
}

namespace {

JsonValue envelope(const std::string& command) {
  JsonValue doc = JsonValue::object();
  doc["tool"] = kToolName;
  doc["version"] = kToolVersion;
  doc["command"] = command;
  doc["l1_convention"] = "L1-unhalved";
  doc["log_convention"] = "log-natural";
  return doc;
}

}  // namespace

Document run_mix(int d, double threshold) {
  Document doc;
  doc.root = envelope("mix");
  JsonValue cfg = JsonValue::object();
  cfg["d"] = d;
  cfg["threshold"] = threshold;
  doc.root["config"] = std::move(cfg);

  const uint32_t tmix = mixing_time(d, threshold);
  const auto curve = mixing_curve(d, tmix + 2);
  doc.root["mixing_time"] = tmix;
  doc.columns = {"round", "l1_to_uniform"};
  JsonValue records = JsonValue::array();
  for (uint32_t t = 0; t < curve.size(); ++t) {
    JsonValue rec = JsonValue::object();
    rec["round"] = t;
    rec["l1_to_uniform"] = curve[t];
    records.push_back(std::move(rec));
    doc.rows.push_back({std::to_string(t), format_double(curve[t])});
  }
  doc.root["records"] = std::move(records);
  return doc;
}

Document run_entropy_decay(int d, uint32_t rounds) {
  Document doc;
  doc.root = envelope("entropy-decay");
  JsonValue cfg = JsonValue::object();
  cfg["d"] = d;
  cfg["rounds"] = rounds;
  doc.root["config"] = std::move(cfg);

  const StepOperator op(d);
  const PermDistribution u = uniform_dist(d);
  PermDistribution mu = point_mass(d, 0);
  doc.columns = {"round", "ent", "l1_to_uniform"};
  JsonValue records = JsonValue::array();
  double prev_ent = -1.0;
  for (uint32_t t = 0; t <= rounds; ++t) {
    const double ent = relative_entropy(mu);
    const double l1 = l1_distance(mu, u);
    if (prev_ent >= 0.0 && ent > prev_ent + 1e-9)
      throw InvariantViolation("entropy increased between rounds");
    prev_ent = ent;
    JsonValue rec = JsonValue::object();
    rec["round"] = t;
    rec["ent"] = ent;
    rec["l1_to_uniform"] = l1;
    records.push_back(std::move(rec));
    doc.rows.push_back({std::to_string(t), format_double(ent), format_double(l1)});
    if (t < rounds) mu = op.step(mu);
  }
  doc.root["records"] = std::move(records);
  return doc;
}

Document run_contract(int d, uint32_t samples, uint64_t seed, uint32_t max_support) {
  Document doc;
  doc.root = envelope("contract");
  JsonValue cfg = JsonValue::object();
  cfg["d"] = d;
  cfg["samples"] = samples;
  cfg["seed"] = static_cast<int64_t>(seed);
  cfg["max_support"] = max_support;
  doc.root["config"] = std::move(cfg);

  const ContractionReport rep = contraction_experiment(d, samples, seed, max_support);
  doc.root["max_ratio"] = rep.max_ratio;
  doc.root["fitted_c"] = rep.fitted_c;
  doc.columns = {"sample", "kind", "ent_before", "ent_after", "ratio"};
  JsonValue records = JsonValue::array();
  for (size_t i = 0; i < rep.samples.size(); ++i) {
    const auto& s = rep.samples[i];
    if (s.ratio >= 1.0)
      throw InvariantViolation("contraction failed: ratio >= 1");
    JsonValue rec = JsonValue::object();
    rec["sample"] = static_cast<int64_t>(i);
    rec["kind"] = s.kind;
    rec["ent_before"] = s.ent_before;
    rec["ent_after"] = s.ent_after;
    rec["ratio"] = s.ratio;
    records.push_back(std::move(rec));
    doc.rows.push_back({std::to_string(i), s.kind, format_double(s.ent_before),
                        format_double(s.ent_after), format_double(s.ratio)});
  }
  doc.root["records"] = std::move(records);
  return doc;
}

Document run_pair(int d, double threshold) {
  Document doc;
  doc.root = envelope("pair");
  JsonValue cfg = JsonValue::object();
  cfg["d"] = d;
  cfg["threshold"] = threshold;
  doc.root["config"] = std::move(cfg);

  const PairChain chain = pair_chain_build(d);
  // Sanity on the rows before trusting the mixing loop.
  for (const auto& row : chain.succ) {
    double s = 0.0;
    for (const auto& [j, p] : row) s += p;
    if (std::abs(s - 1.0) > 1e-12)
      throw InvariantViolation("pair chain row not stochastic");
  }
  const uint32_t tmix = pair_mixing_time(chain, threshold);
  doc.root["states"] = chain.states;
  doc.root["pair_mixing_time"] = tmix;
  doc.columns = {"d", "states", "pair_mixing_time"};
  JsonValue records = JsonValue::array();
  JsonValue rec = JsonValue::object();
  rec["d"] = d;
  rec["states"] = chain.states;
  rec["pair_mixing_time"] = tmix;
  records.push_back(std::move(rec));
  doc.root["records"] = std::move(records);
  doc.rows.push_back({std::to_string(d), std::to_string(chain.states),
                      std::to_string(tmix)});
  return doc;
}

Document run_couple(int d, int t_param, bool geometric, uint64_t seed,
                    bool exhaustive) {
  Document doc;
  doc.root = envelope("couple");
  JsonValue cfg = JsonValue::object();
  cfg["d"] = d;
  cfg["T"] = t_param;
  cfg["geometric"] = geometric;
  cfg["seed"] = static_cast<int64_t>(seed);
  cfg["exhaustive"] = exhaustive;
  doc.root["config"] = std::move(cfg);

  const uint32_t rounds = static_cast<uint32_t>(d);
  const Permutation id = Permutation::identity(1u << d);

  if (exhaustive) {
    if (d > 3) throw CapacityError("exhaustive couple sweep limited to d <= 3");
    TabularOracle probe(d, rounds);
    const uint32_t nbits = probe.bit_count();
    const uint64_t tables = 1ull << nbits;
    const FlipSchedule schedule = FlipSchedule::fixed(d, t_param);
    std::vector<uint64_t> x_final, xt_final;
    uint64_t valid = 0, involutions = 0;
    for (uint64_t code = 0; code < tables; ++code) {
      const TabularOracle z = TabularOracle::from_code(d, rounds, code);
      const CouplingTrace trace = coupled_run(id, z, schedule);
      // Independent replay of X~ under Z~.
      const Trajectory replay = simulate(id, rounds, trace.z_tilde);
      if (replay.states == trace.x_tilde.states) ++valid;
      const FlipResult twice =
          flip_oracle(trace.z_tilde, trace.x, schedule);
      if (twice.z_tilde == z) ++involutions;
      x_final.push_back(perm_rank(trace.x.states.back()));
      xt_final.push_back(perm_rank(trace.x_tilde.states.back()));
    }
    std::sort(x_final.begin(), x_final.end());
    std::sort(xt_final.begin(), xt_final.end());
    const bool multiset_equal = x_final == xt_final;
    if (valid != tables)
      throw InvariantViolation("coupled replay mismatch in exhaustive sweep");
    doc.root["tables"] = static_cast<int64_t>(tables);
    doc.root["valid_replays"] = static_cast<int64_t>(valid);
    doc.root["involution_ok"] = involutions == tables;
    doc.root["final_multiset_equal"] = multiset_equal;
    doc.columns = {"tables", "valid_replays", "involution_ok", "final_multiset_equal"};
    doc.rows.push_back({std::to_string(tables), std::to_string(valid),
                        involutions == tables ? "true" : "false",
                        multiset_equal ? "true" : "false"});
    return doc;
  }

  const TabularOracle z = TabularOracle::sample(d, rounds, child_seed(seed, 0));
  const FlipSchedule schedule =
      geometric ? FlipSchedule::geometric_half(d, child_seed(seed, 1))
                : FlipSchedule::fixed(d, t_param);
  const CouplingTrace trace = coupled_run(id, z, schedule);
  doc.root["trace"] = trace_to_json(trace);
  doc.columns = {"j", "T_j", "partner", "gamma_x", "gamma_x_tilde"};
  for (uint32_t j = 0; j < trace.params.n; ++j) {
    auto join = [](const std::vector<uint32_t>& v) {
      std::string s;
      for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(v[i]);
      }
      return s;
    };
    doc.rows.push_back({std::to_string(j), std::to_string(schedule.times[j]),
                        trace.partners[j] ? std::to_string(*trace.partners[j]) : "",
                        join(trace.gamma(j, false)), join(trace.gamma(j, true))});
  }
  return doc;
}

Document run_lemmas(uint64_t trials, uint64_t seed) {
  Document doc;
  doc.root = envelope("lemmas");
  JsonValue cfg = JsonValue::object();
  cfg["trials"] = static_cast<int64_t>(trials);
  cfg["seed"] = static_cast<int64_t>(seed);
  doc.root["config"] = std::move(cfg);

  uint64_t projection_bad = 0, convexity_bad = 0, pinsker_bad = 0;
  uint64_t pinsker_unhalved_bad = 0, identity_bad = 0;
  double dent_min_ratio = std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(child_seed(seed, 0));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (uint64_t i = 0; i < trials; ++i) {
    // Projection: random p, q on 24 points into 5 buckets.
    {
      const auto p = random_simplex(rng, 24);
      const auto q = random_simplex(rng, 24);
      std::vector<uint32_t> g(24);
      for (auto& v : g) v = static_cast<uint32_t>(rng() % 5);
      if (!projection_check(p, q, g, 5).ok) ++projection_bad;
    }
    // Convexity of d(p, .).
    {
      const double p = 4.0 * unit(rng);
      const double q1 = 4.0 * unit(rng);
      const double q2 = 4.0 * unit(rng);
      if (!convexity_check(p, q1, q2, unit(rng))) ++convexity_bad;
    }
    // Entropy-vs-L1 bound and the mixture-entropy identity, on S_4.
    {
      PermDistribution mu{2, random_simplex(rng, 24)};
      const auto pr = pinsker_check(mu);
      if (!pr.ok_halved) ++pinsker_bad;
      if (!pr.ok_unhalved) ++pinsker_unhalved_bad;

      PermDistribution nu{2, random_simplex(rng, 24)};
      std::vector<double> mix(24);
      for (size_t k = 0; k < 24; ++k) mix[k] = 0.5 * (mu.probs[k] + nu.probs[k]);
      const double lhs = d_distance(mu.probs, nu.probs);
      const double rhs = 0.5 * relative_entropy(mu) + 0.5 * relative_entropy(nu) -
                         relative_entropy(mix);
      if (std::abs(lhs - rhs) > 1e-12) ++identity_bad;
      dent_min_ratio = std::min(dent_min_ratio, dent_ratio(mu.probs));
    }
  }

  // Chain rule identity on random S_4 distributions, fewer trials.
  uint64_t chain_bad = 0;
  const uint64_t chain_trials = std::min<uint64_t>(trials, 200);
  for (uint64_t i = 0; i < chain_trials; ++i) {
    PermDistribution mu{2, random_simplex(rng, 24)};
    const auto dec = chain_rule_decompose(mu, 0);
    if (std::abs(dec.total() - relative_entropy(mu)) > 1e-9) ++chain_bad;
  }

  doc.root["trials"] = static_cast<int64_t>(trials);
  doc.root["chain_rule_trials"] = static_cast<int64_t>(chain_trials);
  doc.root["dent_min_ratio"] = dent_min_ratio;
  JsonValue records = JsonValue::array();
  doc.columns = {"suite", "trials", "violations"};
  auto add = [&](const std::string& name, uint64_t n, uint64_t bad) {
    JsonValue rec = JsonValue::object();
    rec["suite"] = name;
    rec["trials"] = static_cast<int64_t>(n);
    rec["violations"] = static_cast<int64_t>(bad);
    records.push_back(std::move(rec));
    doc.rows.push_back({name, std::to_string(n), std::to_string(bad)});
  };
  add("projection", trials, projection_bad);
  add("convexity", trials, convexity_bad);
  add("pinsker_halved", trials, pinsker_bad);
  add("pinsker_unhalved_as_printed", trials, pinsker_unhalved_bad);
  add("mixture_entropy_identity", trials, identity_bad);
  add("chain_rule", chain_trials, chain_bad);
  doc.root["records"] = std::move(records);
  const uint64_t hard_bad =
      projection_bad + convexity_bad + pinsker_bad + identity_bad + chain_bad;
  doc.root["violations"] = static_cast<int64_t>(hard_bad);
  if (hard_bad > 0) throw InvariantViolation("lemma suite recorded violations");
  return doc;
}

}  // namespace thorp
