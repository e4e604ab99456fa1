#include "dnfl/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dnfl {

MembershipOracle::MembershipOracle(BoolFunction target, std::uint64_t budget)
    : target_(std::move(target)), budget_(budget) {
  check_dim(target_.n);
}

void MembershipOracle::charge(std::uint64_t q) {
  if (budget_ && count_ + q > budget_) {
    throw BudgetExhausted("membership oracle budget of " +
                          std::to_string(budget_) + " queries exhausted");
  }
  count_ += q;
}

double MembershipOracle::query(Mask x) {
  charge(1);
  return table_ ? (*table_)[x] : target_(x);
}

double MembershipOracle::query(const Point& x) {
  if (x.n != n()) throw DimensionError("query point dimension mismatch");
  return query(x.bits);
}

const std::vector<double>& MembershipOracle::full_table() {
  if (!table_) {
    if (n() > kMaxExactDim) throw DimensionError("full_table: n > 24");
    charge(std::uint64_t{1} << n());
    table_ = tabulate(target_);
  }
  return *table_;
}

ExampleOracle::ExampleOracle(BoolFunction target, ProductDistribution mu,
                             std::uint64_t seed, std::uint64_t budget)
    : target_(std::move(target)), mu_(std::move(mu)), rng_(seed), budget_(budget) {
  if (target_.n != mu_.n()) throw DimensionError("example oracle: dimension mismatch");
}

Example ExampleOracle::draw() {
  if (budget_ && count_ >= budget_) {
    throw BudgetExhausted("example oracle budget of " + std::to_string(budget_) +
                          " samples exhausted");
  }
  ++count_;
  const Mask x = sample_bits(mu_, rng_);
  return {x, target_(x)};
}

ExampleOracle ExampleOracle::clone_with_seed(std::uint64_t seed) const {
  return ExampleOracle(target_, mu_, seed, budget_);
}

namespace {

void check_accuracy(double eta, double delta) {
  if (!(eta > 0.0 && eta < 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("accuracy and confidence must lie in (0, 1)");
  }
}

}  // namespace

std::uint64_t hoeffding_samples(double bound, double eta, double delta) {
  check_accuracy(eta, delta);
  return static_cast<std::uint64_t>(
      std::ceil(bound * bound * 2.0 * std::log(2.0 / delta) / (eta * eta)));
}

std::uint64_t coefficient_samples(double c, int degree, double eta, double delta,
                                  bool refined) {
  check_accuracy(eta, delta);
  if (refined) {
    return static_cast<std::uint64_t>(
        std::ceil(8.0 * std::log(2.0 / delta) / (eta * eta)));
  }
  const double base = std::ceil(2.0 * std::log(2.0 / delta) / (eta * eta));
  return static_cast<std::uint64_t>(std::ceil(base * std::pow(2.0 / c, degree)));
}

double estimate_expectation(ExampleOracle& src, const Statistic& statistic,
                            double bound, double eta, double delta) {
  const std::uint64_t n = hoeffding_samples(bound, eta, delta);
  double sum = 0.0;
  for (std::uint64_t k = 0; k < n; ++k) sum += statistic(src.draw());
  return sum / static_cast<double>(n);
}

double estimate_coefficient(ExampleOracle& src, const ProductDistribution& basis,
                            Mask a, double eta, double delta, bool refined) {
  if (basis.n() != src.n()) throw DimensionError("estimate_coefficient: dimension");
  const std::uint64_t n =
      coefficient_samples(basis.c_bound(), popcount(a), eta, delta, refined);
  double sum = 0.0;
  for (std::uint64_t k = 0; k < n; ++k) {
    const Example e = src.draw();
    sum += e.y * basis_value(basis, a, e.x);
  }
  return sum / static_cast<double>(n);
}

std::uint64_t influence_side_samples(double eta, double delta) {
  check_accuracy(eta, delta);
  // each side: f in [-1,1], failure delta/2
  return static_cast<std::uint64_t>(
      std::ceil(2.0 * std::log(4.0 / delta) / (eta * eta)));
}

std::vector<double> estimate_influences(ExampleOracle& src, Mask vars,
                                        const std::vector<double>& eta,
                                        double delta) {
  const int n = src.n();
  const auto& mu = src.distribution();
  std::vector<std::uint64_t> need(n, 0), have_plus(n, 0), have_minus(n, 0);
  std::vector<double> sum_plus(n, 0.0), sum_minus(n, 0.0);
  double max_draws = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!((vars >> i) & 1)) continue;
    need[i] = influence_side_samples(eta.at(i), delta);
    // the rarer side arrives at rate (1 - |mu_i|)/2; allow twice the mean
    max_draws = std::max(
        max_draws, 4.0 * static_cast<double>(need[i]) / (1.0 - std::abs(mu.mu(i))) + 64.0);
  }
  auto done = [&] {
    for (int i = 0; i < n; ++i) {
      if (have_plus[i] < need[i] || have_minus[i] < need[i]) return false;
    }
    return true;
  };
  std::uint64_t draws = 0;
  while (!done()) {
    if (static_cast<double>(draws) >= max_draws) {
      throw BudgetExhausted("influence estimation: too few conditioned samples");
    }
    const Example e = src.draw();
    ++draws;
    for (int i = 0; i < n; ++i) {
      if (!need[i]) continue;
      if ((e.x >> i) & 1) {
        if (have_plus[i] < need[i]) {
          sum_plus[i] += e.y;
          ++have_plus[i];
        }
      } else if (have_minus[i] < need[i]) {
        sum_minus[i] += e.y;
        ++have_minus[i];
      }
    }
  }
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (!need[i]) continue;
    const double k = static_cast<double>(need[i]);
    out[i] = (sum_plus[i] / k - sum_minus[i] / k) / 2.0;
  }
  return out;
}

double estimate_influence(ExampleOracle& src, int i, double eta, double delta) {
  if (i < 0 || i >= src.n()) throw DimensionError("estimate_influence: bad variable");
  std::vector<double> etas(src.n(), eta);
  return estimate_influences(src, Mask{1} << i, etas, delta)[i];
}

double exact_influence(const BoolFunction& f, const ProductDistribution& mu,
                       int i) {
  if (f.n != mu.n()) throw DimensionError("exact_influence: dimension mismatch");
  if (i < 0 || i >= f.n) throw DimensionError("exact_influence: bad variable");
  const auto table = tabulate(f);
  const auto prob = probability_table(mu);
  const Mask bit = Mask{1} << i;
  double total = 0.0;
  for (Mask x = 0; x < table.size(); ++x) {
    if (table[x | bit] != table[x & ~bit]) total += prob[x];
  }
  return total;
}

std::vector<double> exact_influences(const BoolFunction& f,
                                     const ProductDistribution& mu) {
  if (f.n != mu.n()) throw DimensionError("exact_influences: dimension mismatch");
  const auto table = tabulate(f);
  const auto prob = probability_table(mu);
  std::vector<double> out(f.n, 0.0);
  for (int i = 0; i < f.n; ++i) {
    const Mask bit = Mask{1} << i;
    for (Mask x = 0; x < table.size(); ++x) {
      if (table[x | bit] != table[x & ~bit]) out[i] += prob[x];
    }
  }
  return out;
}

double influence_identity_factor(double mu_i) { return 1.0 - mu_i * mu_i; }

}  // namespace dnfl
