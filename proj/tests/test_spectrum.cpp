#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "dnfl/spectrum.hpp"
#include "oracles_naive.hpp"

using namespace dnfl;

TEST_CASE("fwht equals the naive transform") {
  std::mt19937_64 rng(10);
  for (int n = 1; n <= 9; ++n) {
    const auto t = naive::random_boolean_table(n, rng);
    const auto fast = fwht(t);
    const auto slow = naive::uniform_transform(t);
    for (Mask a = 0; a < t.size(); ++a) CHECK(std::abs(fast[a] - slow[a]) <= 1e-12);
  }
}

TEST_CASE("product transform equals the naive transform") {
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 7; ++n) {
    const auto t = naive::random_boolean_table(n, rng);
    const auto mu = naive::random_mu(n, 0.3, rng);
    const auto fast = mu_transform_dense(t, mu);
    const auto slow = naive::mu_transform(t, mu);
    for (Mask a = 0; a < t.size(); ++a) CHECK(std::abs(fast[a] - slow[a]) <= 1e-12);
  }
}

TEST_CASE("inverse transforms reproduce the table") {
  std::mt19937_64 rng(12);
  const auto t = naive::random_boolean_table(8, rng);
  const auto back = inverse_fwht(fwht(t));
  for (Mask x = 0; x < t.size(); ++x) CHECK(back[x] == doctest::Approx(t[x]));
  const auto mu = naive::random_mu(8, 0.5, rng);
  const auto back_mu = inverse_mu_transform_dense(mu_transform_dense(t, mu), mu);
  for (Mask x = 0; x < t.size(); ++x) CHECK(back_mu[x] == doctest::Approx(t[x]));
}

TEST_CASE("Parseval in both bases") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 9;
    const auto t = naive::random_boolean_table(n, rng);
    const auto mu = naive::random_mu(n, 0.5, rng);
    double u = 0.0, p = 0.0;
    for (double v : fwht(t).values) u += v * v;
    for (double v : mu_transform_dense(t, mu)) p += v * v;
    CHECK(std::abs(u - 1.0) <= 1e-9);
    CHECK(std::abs(p - 1.0) <= 1e-9);
  }
}

TEST_CASE("spectrum of x0 or x1") {
  const auto f = DnfFormula::parse("n=2; 0|1");
  const auto s = exact_uniform_transform(f.as_function());
  CHECK(s.size() == 4);
  CHECK(s[0b00] == doctest::Approx(0.5));
  CHECK(s[0b01] == doctest::Approx(0.5));
  CHECK(s[0b10] == doctest::Approx(0.5));
  CHECK(s[0b11] == doctest::Approx(-0.5));
  CHECK(norms(s).linf == doctest::Approx(0.5));
  CHECK(norms(s).l1 == doctest::Approx(2.0));
}

TEST_CASE("mu = 0 product transform agrees with the parity transform") {
  const auto f = random_dnf(6, 3, 3, false, 5);
  const auto u = exact_uniform_transform(f.as_function());
  const auto p = exact_mu_transform(f.as_function(), ProductDistribution::uniform(6));
  CHECK(p.basis().has_value());
  CHECK(u.size() == p.size());
  for (const auto& [a, c] : u.entries()) CHECK(p[a] == doctest::Approx(c));
}

TEST_CASE("sparse evaluation reproduces the function") {
  std::mt19937_64 rng(14);
  const auto mu = naive::random_mu(5, 0.4, rng);
  const auto f = random_dnf(5, 2, 3, false, 3);
  const auto s = exact_mu_transform(f.as_function(), mu);
  for (Mask x = 0; x < 32; ++x) {
    CHECK(s.evaluate(x) == doctest::Approx(f(x)));
    CHECK(eval_sparse_poly(s, Point(5, x), &mu) == doctest::Approx(f(x)));
  }
  CHECK_THROWS(eval_sparse_poly(s, Point(5, 0)));
  CHECK_THROWS(diff_inf_norm(s, SparseSpectrum(5)));
}

TEST_CASE("restrict, heavy and diff norms") {
  SparseSpectrum v(4);
  v.set(0b0001, 0.5);
  v.set(0b0011, -0.25);
  v.set(0b0111, 0.05);
  v.set(0b1000, 0.0);  // erased
  CHECK(v.size() == 3);
  CHECK(restrict(v, {.degree_cap = 1}).size() == 1);
  CHECK(restrict(v, {.within = Mask{0b0011}}).size() == 2);
  CHECK(restrict(v, {.must_include = Mask{0b0100}}).size() == 1);
  CHECK(heavy_coefficients(v, 0.2).size() == 2);
  SparseSpectrum w(4);
  w.set(0b0001, 0.4);
  CHECK(diff_inf_norm(v, w) == doctest::Approx(0.25));
  CHECK(diff_inf_norm(v, w, 1) == doctest::Approx(0.1));
  CHECK(v.support_variables() == 0b0111);
}

TEST_CASE("spectrum text round trip is exact") {
  std::mt19937_64 rng(15);
  const auto mu = naive::random_mu(6, 0.3, rng);
  const auto s = exact_mu_transform(random_dnf(6, 3, 3, false, 9).as_function(), mu);
  const auto back = read_spectrum(write_spectrum(s));
  CHECK(back == s);
  const auto u = exact_uniform_transform(DnfFormula::parse("n=3; 0&1").as_function());
  CHECK(read_spectrum(write_spectrum(u)) == u);
  CHECK_THROWS(read_spectrum("spectrum weird n=3\n"));
  CHECK_THROWS(read_spectrum("spectrum uniform n=3\nzz 1\n"));
}

TEST_CASE("dense tables need power-of-two length") {
  std::vector<double> bad(6, 1.0);
  CHECK_THROWS_AS(fwht(bad), DimensionError);
}
