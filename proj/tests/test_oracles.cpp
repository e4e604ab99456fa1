#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "dnfl/oracles.hpp"
#include "dnfl/spectrum.hpp"
#include "oracles_naive.hpp"

using namespace dnfl;

TEST_CASE("membership oracle counts queries and enforces its budget") {
  const auto f = DnfFormula::parse("n=3; 0&1");
  MembershipOracle mq(f.as_function(), 10);
  CHECK(mq.query(0b011) == 1.0);
  CHECK(mq.query(Point(3, 0b001)) == -1.0);
  CHECK(mq.query_count() == 2);
  CHECK(mq.full_table().size() == 8);
  CHECK(mq.query_count() == 10);
  mq.full_table();
  CHECK(mq.query_count() == 10);
  CHECK_THROWS_AS(mq.query(0), BudgetExhausted);
}

TEST_CASE("example oracle is deterministic per seed") {
  const auto f = random_dnf(8, 3, 3, false, 2);
  const ProductDistribution mu({0.1, 0.2, 0.3, -0.1, -0.2, -0.3, 0.0, 0.5});
  ExampleOracle a(f.as_function(), mu, 77), b(f.as_function(), mu, 77);
  for (int k = 0; k < 100; ++k) {
    const auto ea = a.draw(), eb = b.draw();
    CHECK(ea.x == eb.x);
    CHECK(ea.y == f(ea.x));
  }
  CHECK(a.sample_count() == 100);
  auto c = a.clone_with_seed(78);
  CHECK(c.sample_count() == 0);
  ExampleOracle capped(f.as_function(), mu, 1, 3);
  capped.draw();
  capped.draw();
  capped.draw();
  CHECK_THROWS_AS(capped.draw(), BudgetExhausted);
}

TEST_CASE("sample size formulas") {
  CHECK(hoeffding_samples(1.0, 0.1, 0.05) ==
        static_cast<std::uint64_t>(std::ceil(2.0 * std::log(40.0) / 0.01)));
  CHECK(hoeffding_samples(2.0, 0.1, 0.05) ==
        static_cast<std::uint64_t>(std::ceil(8.0 * std::log(40.0) / 0.01)));
  const auto base = static_cast<std::uint64_t>(std::ceil(2.0 * std::log(40.0) / 0.01));
  CHECK(coefficient_samples(0.5, 2, 0.1, 0.05, false) == base * 16);
  CHECK(coefficient_samples(0.5, 2, 0.1, 0.05, true) ==
        static_cast<std::uint64_t>(std::ceil(8.0 * std::log(40.0) / 0.01)));
}

TEST_CASE("coefficient estimates land within eta") {
  const auto f = random_dnf(6, 2, 2, false, 4);
  const ProductDistribution mu({0.2, -0.3, 0.1, 0.0, 0.4, -0.1});
  const auto exact = exact_mu_transform(f.as_function(), mu);
  ExampleOracle ex(f.as_function(), mu, 5);
  for (Mask a : {Mask{0}, Mask{0b1}, Mask{0b11}, Mask{0b100100}}) {
    const double est = estimate_coefficient(ex, mu, a, 0.05, 0.01);
    CHECK(std::abs(est - exact[a]) <= 0.05);
  }
}

TEST_CASE("exact influence matches the definition") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + trial % 6;
    const auto t = naive::random_boolean_table(n, rng);
    const auto mu = naive::random_mu(n, 0.3, rng);
    BoolFunction f{n, [&t](Mask x) { return t[x]; }};
    const auto all = exact_influences(f, mu);
    for (int i = 0; i < n; ++i) {
      CHECK(exact_influence(f, mu, i) == doctest::Approx(naive::influence(t, mu, i)));
      CHECK(all[i] == doctest::Approx(naive::influence(t, mu, i)));
    }
  }
}

TEST_CASE("influence identity: I_i (1 - mu_i^2) equals the S_i spectral weight") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 7;
    const auto t = naive::random_monotone_table(n, rng);
    const auto mu = naive::random_mu(n, 0.1, rng);
    const auto coeffs = naive::mu_transform(t, mu);
    for (int i = 0; i < n; ++i) {
      double w = 0.0;
      for (Mask a = 0; a < coeffs.size(); ++a) {
        if ((a >> i) & 1) w += coeffs[a] * coeffs[a];
      }
      const double I = naive::influence(t, mu, i);
      CHECK(std::abs(I * influence_identity_factor(mu.mu(i)) - w) <= 1e-9);
    }
  }
  CHECK(influence_identity_factor(0.0) == 1.0);
  CHECK(influence_identity_factor(0.5) == doctest::Approx(0.75));
}

TEST_CASE("sampled influence estimates meet their accuracy") {
  const auto f = DnfFormula::parse("n=6; 0&1|2|3&4&5");
  const ProductDistribution mu({0.3, -0.2, 0.0, 0.4, 0.1, -0.4});
  const auto exact = exact_influences(f.as_function(), mu);
  ExampleOracle ex(f.as_function(), mu, 8);
  const std::vector<double> eta(6, 0.03);
  const auto est = estimate_influences(ex, full_mask(6), eta, 0.01);
  for (int i = 0; i < 6; ++i) CHECK(std::abs(est[i] - exact[i]) <= 0.03);
  ExampleOracle ex2(f.as_function(), mu, 9);
  CHECK(std::abs(estimate_influence(ex2, 2, 0.03, 0.01) - exact[2]) <= 0.03);
}

TEST_CASE("influence estimation respects the example budget") {
  const auto f = DnfFormula::parse("n=4; 0|1");
  ExampleOracle ex(f.as_function(), ProductDistribution::uniform(4), 1, 100);
  CHECK_THROWS_AS(estimate_influence(ex, 0, 0.01, 0.05), BudgetExhausted);
}
