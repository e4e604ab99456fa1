#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dnfl/boolcore.hpp"
#include "dnfl/dist.hpp"
#include "dnfl/rng.hpp"

namespace dnfl {

/// Query access to f at any chosen point. Counts every answered query.
class MembershipOracle {
 public:
  explicit MembershipOracle(BoolFunction target, std::uint64_t budget = 0);

  int n() const { return target_.n; }
  double query(Mask x);
  double query(const Point& x);
  /// Queries every point once (2^n queries) and keeps the table for reuse.
  const std::vector<double>& full_table();
  bool has_full_table() const { return table_.has_value(); }

  std::uint64_t query_count() const { return count_; }
  std::uint64_t budget() const { return budget_; }

 private:
  void charge(std::uint64_t q);

  BoolFunction target_;
  std::uint64_t budget_;
  std::uint64_t count_ = 0;
  std::optional<std::vector<double>> table_;
};

struct Example {
  Mask x = 0;
  double y = 0.0;
};

/// EX(D_mu, f): i.i.d. labelled examples.
class ExampleOracle {
 public:
  ExampleOracle(BoolFunction target, ProductDistribution mu, std::uint64_t seed,
                std::uint64_t budget = 0);

  int n() const { return target_.n; }
  Example draw();
  std::uint64_t sample_count() const { return count_; }
  std::uint64_t budget() const { return budget_; }

  /// Same target and distribution, fresh counter, independent stream.
  ExampleOracle clone_with_seed(std::uint64_t seed) const;

  /// Simulation-side access used only by exact-oracle backends and by
  /// measurement code; learners on the sampled path never call these.
  const BoolFunction& target() const { return target_; }
  const ProductDistribution& distribution() const { return mu_; }

 private:
  BoolFunction target_;
  ProductDistribution mu_;
  Rng rng_;
  std::uint64_t budget_;
  std::uint64_t count_ = 0;
};

/// Hoeffding sample size for a statistic in [-bound, bound]:
/// ceil(bound^2 * 2 ln(2/delta) / eta^2).
std::uint64_t hoeffding_samples(double bound, double eta, double delta);

/// Samples for a single mu-coefficient of degree `degree`. Worst case:
/// ceil(2 ln(2/delta)/eta^2) * (2/c)^degree; refined: ceil(8 ln(2/delta)/eta^2).
std::uint64_t coefficient_samples(double c, int degree, double eta, double delta,
                                  bool refined);

using Statistic = std::function<double(const Example&)>;

double estimate_expectation(ExampleOracle& src, const Statistic& statistic,
                            double bound, double eta, double delta);

/// Empirical mean of f(x) phi_{basis,a}(x). `basis` is the distribution the
/// learner believes in (possibly estimated).
double estimate_coefficient(ExampleOracle& src, const ProductDistribution& basis,
                            Mask a, double eta, double delta,
                            bool refined = false);

/// Examples needed per side (x_i = +1 / x_i = -1) for accuracy eta.
std::uint64_t influence_side_samples(double eta, double delta);

/// Influence of variable i on a monotone target via conditioned means.
double estimate_influence(ExampleOracle& src, int i, double eta, double delta);

/// Influences of several variables from one example stream. `eta[i]` is
/// the accuracy for variable i (ignored when i is not in `vars`); `delta`
/// is the per-variable failure probability.
std::vector<double> estimate_influences(ExampleOracle& src, Mask vars,
                                        const std::vector<double>& eta,
                                        double delta);

/// Pr_mu[f(x with x_i=1) != f(x with x_i=-1)], by enumeration.
double exact_influence(const BoolFunction& f, const ProductDistribution& mu,
                       int i);
std::vector<double> exact_influences(const BoolFunction& f,
                                     const ProductDistribution& mu);

/// kappa(mu_i) in I_{mu,i}(f) * kappa = ||f_mu(S_i)||_2^2 for boolean
/// monotone f. Equal to 1 - mu_i^2 (established by exhaustive check in the
/// test suite); 1 under the uniform distribution.
double influence_identity_factor(double mu_i);

}  // namespace dnfl
