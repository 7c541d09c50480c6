#include "analysis.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "jsonio.hpp"

using namespace thorp;

namespace {

std::vector<double> simplex(std::mt19937_64& rng, size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> p(n);
  double s = 0;
  for (double& v : p) s += (v = -std::log(1.0 - unit(rng)));
  for (double& v : p) v /= s;
  return p;
}

}  // namespace

TEST_CASE("step_distribution fixes uniform and spreads point masses") {
  const StepOperator op(2);
  const auto u = uniform_dist(2);
  const auto su = op.step(u);
  for (uint64_t r = 0; r < 24; ++r)
    CHECK(su.probs[r] == doctest::Approx(1.0 / 24).epsilon(1e-15));

  // d=1: one round exactly uniformizes S_2.
  const auto s1 = StepOperator(1).step(point_mass(1, 0));
  CHECK(s1.probs == std::vector<double>{0.5, 0.5});

  // d=2: one round from the identity spreads over the 4 one-round
  // permutations, each 1/4.
  const auto s2 = op.step(point_mass(2, 0));
  int quarter = 0, zero = 0;
  for (double p : s2.probs) {
    if (p == 0.25) ++quarter;
    if (p == 0.0) ++zero;
  }
  CHECK(quarter == 4);
  CHECK(zero == 20);
}

TEST_CASE("step_distribution preserves the simplex") {
  std::mt19937_64 rng(5);
  const StepOperator op(2);
  for (int i = 0; i < 20; ++i) {
    PermDistribution mu{2, simplex(rng, 24)};
    const auto out = op.step(mu);
    CHECK(is_distribution(out));
    CHECK(relative_entropy(out) <= relative_entropy(mu) + 1e-12);
  }
}

TEST_CASE("capacity limit is a hard error") {
  CHECK_THROWS_AS(StepOperator(4), CapacityError);
  CHECK_THROWS_AS(uniform_dist(4), CapacityError);
  CHECK_THROWS_AS(mixing_time(4, 0.25), CapacityError);
}

TEST_CASE("l1_distance examples") {
  const auto u = uniform_dist(2);
  const auto p = point_mass(2, 7);
  CHECK(l1_distance(p, p) == 0.0);
  CHECK(l1_distance(p, u) == doctest::Approx(23.0 / 12).epsilon(1e-15));
  CHECK(l1_distance(p, u) == l1_distance(u, p));
  CHECK(halved_tv(p, u) == doctest::Approx(23.0 / 24).epsilon(1e-15));
}

TEST_CASE("relative_entropy examples") {
  CHECK(relative_entropy(uniform_dist(2)) == 0.0);
  CHECK(relative_entropy(point_mass(2, 3)) ==
        doctest::Approx(std::log(24.0)).epsilon(1e-15));
  PermDistribution mix{2, std::vector<double>(24, 0.0)};
  mix.probs[1] = mix.probs[17] = 0.5;
  CHECK(relative_entropy(mix) == doctest::Approx(std::log(12.0)).epsilon(1e-15));
}

TEST_CASE("pinsker_check: the unhalved form fails on a point mass") {
  const auto r = pinsker_check(point_mass(2, 0));
  CHECK(r.lhs == doctest::Approx(23.0 / 12).epsilon(1e-15));
  CHECK(r.rhs == doctest::Approx(std::sqrt(std::log(24.0) / 2)).epsilon(1e-12));
  // The bound as printed, with the unhalved L1 convention, is violated
  // here; the halved (standard Pinsker) form holds.
  CHECK_FALSE(r.ok_unhalved);
  CHECK(r.ok_halved);

  const auto ru = pinsker_check(uniform_dist(2));
  CHECK(ru.lhs == 0.0);
  CHECK(ru.rhs == 0.0);
  CHECK(ru.ok_unhalved);
}

TEST_CASE("d_scalar examples") {
  CHECK(d_scalar(0.3, 0.3) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(d_scalar(1, 0) == doctest::Approx(std::log(2.0) / 2).epsilon(1e-15));
  CHECK(d_scalar(2, 0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(d_scalar(-0.1, 0.5), std::domain_error);
}

TEST_CASE("d_distance examples and mixture-entropy identity") {
  std::mt19937_64 rng(11);
  const auto p = simplex(rng, 24);
  CHECK(d_distance(p, p) == doctest::Approx(0.0).epsilon(1e-15));

  std::vector<double> pm1(24, 0.0), pm2(24, 0.0);
  pm1[3] = 1.0;
  pm2[19] = 1.0;
  CHECK(d_distance(pm1, pm2) == doctest::Approx(std::log(2.0)).epsilon(1e-15));

  for (int i = 0; i < 50; ++i) {
    const auto a = simplex(rng, 24);
    const auto b = simplex(rng, 24);
    std::vector<double> mix(24);
    for (size_t k = 0; k < 24; ++k) mix[k] = 0.5 * (a[k] + b[k]);
    const double rhs = 0.5 * relative_entropy(a) + 0.5 * relative_entropy(b) -
                       relative_entropy(mix);
    CHECK(d_distance(a, b) == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("chain rule: point mass decomposition") {
  const auto dec = chain_rule_decompose(point_mass(2, 13), 0);
  REQUIRE(dec.per_location.size() == 4);
  CHECK(dec.residual == 0.0);
  for (uint32_t k = 0; k < 4; ++k)
    CHECK(dec.per_location[k] ==
          doctest::Approx(std::log(static_cast<double>(k + 1))).epsilon(1e-12));
  CHECK(dec.total() == doctest::Approx(std::log(24.0)).epsilon(1e-12));
}

TEST_CASE("chain rule identity on random distributions") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    PermDistribution mu{2, simplex(rng, 24)};
    for (uint32_t cut = 0; cut < 4; ++cut) {
      const auto dec = chain_rule_decompose(mu, cut);
      CHECK(dec.total() ==
            doctest::Approx(relative_entropy(mu)).epsilon(1e-9));
      CHECK(dec.residual >= -1e-12);
      for (double v : dec.per_location) CHECK(v >= -1e-12);
    }
  }
}

TEST_CASE("chain rule identity on sparse distributions over S_8") {
  std::mt19937_64 rng(22);
  const uint64_t nf = factorial(8);
  for (int i = 0; i < 5; ++i) {
    PermDistribution mu{3, std::vector<double>(nf, 0.0)};
    const auto w = simplex(rng, 32);
    for (size_t k = 0; k < 32; ++k) mu.probs[rng() % nf] += w[k];
    const auto dec = chain_rule_decompose(mu, 0);
    CHECK(dec.total() ==
          doctest::Approx(relative_entropy(mu)).epsilon(1e-9));
  }
}

TEST_CASE("projection_check edge cases") {
  std::mt19937_64 rng(31);
  const auto p = simplex(rng, 24);
  const auto q = simplex(rng, 24);
  std::vector<uint32_t> constant(24, 0);
  const auto rc = projection_check(p, q, constant, 1);
  CHECK(rc.dPQ == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(rc.ok);

  std::vector<uint32_t> identity(24);
  for (uint32_t i = 0; i < 24; ++i) identity[i] = i;
  const auto ri = projection_check(p, q, identity, 24);
  CHECK(ri.dPQ == doctest::Approx(ri.dpq).epsilon(1e-15));
}

TEST_CASE("dent_ratio positivity") {
  std::mt19937_64 rng(41);
  for (size_t v : {6u, 24u, 120u}) {
    double min_ratio = 1e9;
    for (int i = 0; i < 500; ++i)
      min_ratio = std::min(min_ratio, dent_ratio(simplex(rng, v)));
    CHECK(min_ratio > 0.0);
  }
  // Point mass: ratio equals d(point, uniform), since ENT = log|V|.
  std::vector<double> pm(24, 0.0);
  pm[0] = 1.0;
  std::vector<double> u(24, 1.0 / 24);
  CHECK(dent_ratio(pm) == doctest::Approx(d_distance(pm, u)).epsilon(1e-12));
  CHECK_THROWS_AS(dent_ratio(std::vector<double>(24, 1.0 / 24)), std::domain_error);
}

TEST_CASE("dent_ratio stays bounded away from zero near uniform") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> mu(24, 1.0 / 24);
    // Small random perturbation, renormalized.
    double s = 0;
    for (double& v : mu) s += (v += 1e-3 * unit(rng));
    for (double& v : mu) v /= s;
    if (relative_entropy(mu) < 1e-6) continue;
    CHECK(dent_ratio(mu) > 0.05);
  }
}

TEST_CASE("convexity_check edge cases") {
  CHECK(convexity_check(0.7, 1.3, 0.2, 0.0));
  CHECK(convexity_check(0.7, 1.3, 0.2, 1.0));
  CHECK(convexity_check(0.7, 0.9, 0.9, 0.35));
}

TEST_CASE("mixing_time small cases") {
  CHECK(mixing_time(1, 0.25) == 1);
  CHECK(mixing_time(1, 2.0) == 0);
  CHECK(mixing_time(2, 2.0) == 0);
}

TEST_CASE("mixing distance curve is nonincreasing") {
  for (int d : {1, 2}) {
    const auto curve = mixing_curve(d, 12);
    for (size_t t = 1; t < curve.size(); ++t)
      CHECK(curve[t] <= curve[t - 1] + 1e-12);
  }
}

TEST_CASE("convolution agrees with iterated stepping") {
  std::mt19937_64 rng(51);
  const StepOperator op(2);
  const auto law = shuffle_law(2, 2);
  for (int i = 0; i < 10; ++i) {
    PermDistribution mu{2, simplex(rng, 24)};
    const auto via_conv = convolve(op, law, mu);
    const auto via_step = op.steps(mu, 2);
    for (uint64_t r = 0; r < 24; ++r)
      CHECK(via_conv.probs[r] ==
            doctest::Approx(via_step.probs[r]).epsilon(1e-12));
  }
}

TEST_CASE("convolution is right-translation on point masses") {
  const StepOperator op(2);
  const auto law = shuffle_law(2, 2);
  for (uint64_t s : {0ull, 5ull, 13ull, 23ull}) {
    const auto out = convolve(op, law, point_mass(2, s));
    const auto& sigma = op.perm(s);
    for (uint64_t r = 0; r < 24; ++r) {
      const auto composed = op.perm(r).compose(sigma);
      CHECK(out.probs[perm_rank(composed)] ==
            doctest::Approx(law.probs[r]).epsilon(1e-12));
    }
  }
}

TEST_CASE("contraction experiment at d=1 kills all entropy") {
  const auto rep = contraction_experiment(1, 10, 3);
  REQUIRE(!rep.samples.empty());
  for (const auto& s : rep.samples)
    CHECK(s.ent_after == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rep.fitted_c == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("pair chain structure, d=1") {
  const auto chain = pair_chain_build(1);
  CHECK(chain.states == 2);
  // Adjacent pair with a shared bit: uniform over both states in one step.
  for (uint32_t i = 0; i < 2; ++i) {
    double to[2] = {0, 0};
    for (const auto& [j, p] : chain.succ[i]) to[j] += p;
    CHECK(to[0] == 0.5);
    CHECK(to[1] == 0.5);
  }
  CHECK(pair_mixing_time(chain, 0.25) == 1);
}

TEST_CASE("pair chain rows stochastic and uniform stationary") {
  for (int d = 1; d <= 5; ++d) {
    const auto chain = pair_chain_build(d);
    std::vector<double> image(chain.states, 0.0);
    const double u = 1.0 / chain.states;
    for (uint32_t i = 0; i < chain.states; ++i) {
      double row = 0;
      for (const auto& [j, p] : chain.succ[i]) {
        row += p;
        image[j] += u * p;
      }
      CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (double v : image) CHECK(v == doctest::Approx(u).epsilon(1e-12));
  }
  CHECK_THROWS_AS(pair_chain_build(7), CapacityError);
}

TEST_CASE("distribution JSON round-trip") {
  std::mt19937_64 rng(61);
  PermDistribution mu{2, simplex(rng, 24)};
  const auto text = dist_to_json(mu);
  const auto back = dist_from_json(text);
  CHECK(back.d == 2);
  CHECK(back.probs == mu.probs);  // %.17g round-trips doubles exactly
}

TEST_CASE("distribution binary round-trip") {
  std::mt19937_64 rng(62);
  PermDistribution mu{2, simplex(rng, 24)};
  const auto bytes = dist_to_binary(mu);
  const auto back = dist_from_binary(bytes);
  CHECK(back.d == 2);
  CHECK(back.probs == mu.probs);
  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(dist_from_binary(bad), std::invalid_argument);
}
