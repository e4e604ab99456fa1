#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "dnfl/approx.hpp"
#include "dnfl/structural.hpp"
#include "oracles_naive.hpp"

using namespace dnfl;

TEST_CASE("degree formula") {
  CHECK(bound_degree(4, 0.02, 1.0) == 7);      // floor(log2 200)
  CHECK(bound_degree(8, 1.0, 1.0) == 3);       // exact power of two
  CHECK(bound_degree(1, 2.0, 1.0) == 0);       // clamped
  CHECK(bound_degree(2, 0.1, 0.5) ==
        static_cast<int>(std::floor(std::log(20.0) / std::log(2.0 / 1.5))));
  CHECK_THROWS(bound_degree(2, 0.1, 1.5));
}

TEST_CASE("sign polynomial 1-sign-represents the DNF") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 4 + seed % 7;
    const auto f = random_dnf(n, 1 + seed % 5, 4, false, seed);
    const auto p = dnf_sign_polynomial(f);
    for (Mask x = 0; x < (Mask{1} << n); ++x) {
      const double v = p.evaluate(x);
      CHECK(std::abs(v) >= 1.0 - 1e-12);
      CHECK(sign_of(v) == f(x));
    }
    CHECK(norms(p).l1 <= 2.0 * f.size() + 1.0 + 1e-9);
  }
}

TEST_CASE("single literal gives p = x") {
  const auto f = DnfFormula::parse("n=3; 1");
  const auto p = dnf_sign_polynomial(f);
  CHECK(p.size() == 1);
  CHECK(p[0b010] == doctest::Approx(1.0));
  CHECK(norms(p).l1 == doctest::Approx(1.0));
}

TEST_CASE("term L1 norms") {
  std::mt19937_64 rng(4);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = random_dnf(8, 3, 6, false, seed);
    for (const auto& t : f.terms()) {
      CHECK(norms(term_polynomial(8, t)).l1 == doctest::Approx(1.0));
      const auto u = term_mu_l1(t, ProductDistribution::uniform(8));
      CHECK(u.l1 == doctest::Approx(1.0));
      CHECK(u.holds());
      const auto mu = naive::random_mu(8, 0.25, rng);
      const auto r = term_mu_l1(t, mu);
      CHECK(r.holds());
      // Parseval on the indicator
      double sq = 0.0;
      const auto tp = term_polynomial(8, t, mu);
      for (const auto& [a, c] : tp.entries()) sq += c * c;
      double pr = 0.0;
      for (Mask x = 0; x < 256; ++x) {
        if (t.satisfied(x)) pr += point_weight(mu, x);
      }
      CHECK(sq == doctest::Approx(pr));
    }
  }
  const ProductDistribution half({0.5, -0.5, 0.0});
  CHECK(term_mu_l1(Term(0b011, 0), half).bound == doctest::Approx(1.5));
  CHECK(term_mu_l1(Term(0b011, 0), half).holds());
  CHECK(term_mu_l1(Term{}, half).l1 == doctest::Approx(1.0));
}

TEST_CASE("DNF truncation") {
  const auto mu = ProductDistribution(std::vector<double>(8, 0.25));
  const auto short_f = DnfFormula::parse("n=8; 0&1|2");
  const auto same = truncated_dnf_polynomial(short_f, mu, 3);
  CHECK(same.dropped.empty());
  CHECK(same.error == 0.0);
  CHECK(same.poly == dnf_sign_polynomial(short_f, mu));

  const auto long_f = DnfFormula::parse("n=8; 0&1&2&3|4");
  const auto cut = truncated_dnf_polynomial(long_f, mu, 3);
  REQUIRE(cut.dropped.size() == 1);
  const double c = mu.c_bound();
  CHECK(cut.error <= 2.0 * std::pow(1.0 - c / 2.0, 4) + 1e-12);
  CHECK(cut.holds());

  std::mt19937_64 rng(6);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = naive::random_mu(9, 0.5, rng);
    const auto f = random_dnf(9, 4, 6, false, 40 + seed);
    CHECK(truncated_dnf_polynomial(f, m, bound_degree(4, 0.1, 0.5)).holds());
  }
}

TEST_CASE("term threshold truncation") {
  const auto mu = ProductDistribution(std::vector<double>(6, 0.3));
  TermThresholdFunction single{6, {Term(0b11, 0)}, {1.0}, 0.0};
  const auto r1 = threshold_truncated_polynomial(single, mu, 4);
  for (Mask x = 0; x < 64; ++x) CHECK(std::abs(r1.poly.evaluate(x)) == doctest::Approx(1.0));

  TermThresholdFunction maj{6, {Term(0b11, 0), Term(0b1100, 0), Term(0b110000, 0)},
                            {1.0, 1.0, 1.0}, 0.0};
  const auto r2 = threshold_truncated_polynomial(maj, mu, 6);
  CHECK(r2.dropped.empty());
  CHECK(r2.error == doctest::Approx(0.0));
  CHECK(r2.holds());
  CHECK(threshold_truncated_polynomial(maj, mu, 1).holds());

  // DNF written as a threshold: w = 1, w0 = s - 1
  const auto f = random_dnf(6, 3, 3, false, 8);
  TermThresholdFunction enc{6, f.terms(), {1.0, 1.0, 1.0}, 2.0};
  const auto r3 = threshold_truncated_polynomial(enc, mu, 6);
  for (Mask x = 0; x < 64; ++x) {
    CHECK(sign_of(r3.poly.evaluate(x)) == f(x));
    CHECK(std::abs(r3.poly.evaluate(x)) >= 1.0 - 1e-9);
  }
  CHECK(norms(r3.poly).l1 <= enc.total_weight() * (2 * term_l1_factor(mu.c_bound(), 6) + 1));

  TermThresholdFunction bad{6, {Term(0b11, 0)}, {1.0}, 1.0};
  CHECK_THROWS(threshold_truncated_polynomial(bad, mu, 3));
}

TEST_CASE("error bound reports") {
  const auto f = DnfFormula::parse("n=4; 0|1");
  const auto uni = ProductDistribution::uniform(4);
  const auto ff = f.as_function();
  const BoolFunction zero{4, [](Mask) { return 0.0; }};

  const auto same = verify_error_bound(ff, ff, uni, UniformDnfBound{2});
  CHECK(same.lhs == 0.0);
  CHECK(same.passed());

  const auto r = verify_error_bound(ff, zero, uni, UniformDnfBound{2});
  CHECK(r.lhs == doctest::Approx(1.0));
  CHECK(r.gap == doctest::Approx(0.5));
  CHECK(r.rhs == doctest::Approx(2.5));
  CHECK(r.passed());

  const BoolFunction neg{4, [&](Mask x) { return -f(x); }};
  const auto adv = verify_error_bound(ff, neg, uni, DnfBound{2, 1.0, 0.1});
  CHECK(adv.lhs == doctest::Approx(2.0));
  CHECK(adv.passed());

  const auto sp = verify_error_bound(ff, zero, uni, SignPolyBound{dnf_sign_polynomial(f), {}});
  CHECK(sp.passed());
  CHECK_THROWS(verify_error_bound(ff, zero, uni, SignPolyBound{SparsePolynomial(4), {}}));
  CHECK_THROWS(verify_error_bound(ff, zero, ProductDistribution(std::vector<double>(4, 0.2)),
                                  UniformDnfBound{2}));
}

TEST_CASE("bounds hold for random chains") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<Mask> mask(0, 255);
  for (int k = 0; k < 40; ++k) {
    const double c = k % 2 ? 0.5 : 1.0;
    const auto mu = c == 1.0 ? ProductDistribution::uniform(8) : naive::random_mu(8, c, rng);
    const auto f = random_dnf(8, 3, 5, false, 500 + k);
    ClippedChain g(8, mu);
    for (int t = 0; t < 6; ++t) g.append(mask(rng) & 0b10101011, coef(rng));
    const auto gf = g.as_function();
    const auto ff = f.as_function();
    CHECK(verify_error_bound(ff, gf, mu, DnfBound{3, c, 0.1}).passed());
    const auto p = dnf_sign_polynomial(f, mu);
    const auto cut = truncated_dnf_polynomial(f, mu, 2).poly;
    CHECK(verify_error_bound(ff, gf, mu, SignPolyBound{p, cut}).passed());
  }
}

TEST_CASE("csv rows") {
  BoundReport r;
  r.family = "dnf";
  r.lhs = 0.5;
  r.rhs = 1.0;
  r.slack = 0.5;
  CHECK(bound_csv_header() == "family,n,s,c,d,eps,gap,lhs,rhs,slack,pass");
  CHECK(bound_csv_row(r).rfind("dnf,0,", 0) == 0);
  CHECK(bound_csv_row(r).back() == '1');
}
