#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dnfl/approx.hpp"
#include "dnfl/boolcore.hpp"
#include "dnfl/dist.hpp"
#include "dnfl/oracles.hpp"
#include "dnfl/recovery.hpp"

namespace dnfl {

struct LearnerConfig {
  int s = 1;
  double epsilon = 0.1;
  double delta = 0.25;
  double c = 1.0;
  /// Coefficient collection (EKM / GFC / influences + low degree).
  Backend backend = Backend::exact;
  /// Chain spectrum inside the construction phase.
  Backend construct_backend = Backend::exact;
  /// Oracle budget, 0 = unlimited.
  std::uint64_t budget = 0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

struct DerivedParams {
  double eps_prime = 0.0;  // epsilon / 9
  int d_formula = 0;       // floor(log(s/eps') / log(2/(2-c)))
  int d = 0;               // min(d_formula, n)
  double gamma = 0.0;      // eps' / (2 (2-c)^(d/2) s + 1)
};

DerivedParams derive_params(int s, double epsilon, double c, int n);

struct Provenance {
  std::string learner;
  DerivedParams params;
  std::uint64_t seed = 0;
  Mask variables = ~Mask{0};    // M for the monotone learners, else all
  std::size_t coefficients = 0; // |f~|
  std::uint64_t oracle_queries = 0;
  std::uint64_t construct_steps = 0;
  std::uint64_t construct_queries = 0;
  double construct_gap = 0.0;
  std::vector<double> influences;  // monotone learners
  std::vector<double> kappa;       // influence identity factor per variable
  std::optional<std::vector<double>> mu_used;  // basis the learner worked in
};

using Chain = std::variant<ClippedChain, ProperChain>;

struct Hypothesis {
  Chain chain;
  Provenance provenance;

  int n() const;
  double real_value(Mask x) const;
  int operator()(Mask x) const { return sign_of(real_value(x)); }
  /// The +-1 classifier.
  BoolFunction as_function() const;
  /// Classifier values on all 2^n points; evaluates the chain only on the
  /// subcube of variables it touches.
  std::vector<double> classifier_table() const;
};

Hypothesis learn_dnf_mq_prod(MembershipOracle& mq, const ProductDistribution& mu,
                             const LearnerConfig& cfg);

/// mu is unknown: estimated from examples on the sampled backend, read off
/// the simulator on the exact backend.
Hypothesis learn_dnf_smoothed(ExampleOracle& ex, const LearnerConfig& cfg);

Hypothesis learn_mdnf_uniform(ExampleOracle& ex, const LearnerConfig& cfg);
Hypothesis learn_mdnf_prod(ExampleOracle& ex, const ProductDistribution& mu,
                           const LearnerConfig& cfg);

/// Accuracy gamma^2 / (3 kappa_i) for the influence of variable i.
double influence_accuracy(double mu_i, double gamma);
/// Variables whose influence estimate is at least 2 gamma^2 / (3 kappa_i).
Mask eliminate_variables(const std::vector<double>& influence_estimates,
                         const ProductDistribution& mu, double gamma);
/// s log(3s/gamma^2) / log(2/(2-c)).
double mdnf_variable_bound(int s, double gamma, double c);
/// Samples used to estimate mu: target accuracy gamma^2/(8n) per coordinate.
std::uint64_t mu_estimation_samples(int n, double gamma, double delta);

struct ErrorMeasurement {
  double error = 0.0;
  double band = 0.0;  // 0 when exact, 3/sqrt(N) when sampled
  bool exact = true;
};

ErrorMeasurement measure_error(const Hypothesis& h, const BoolFunction& f,
                               const ProductDistribution& mu);
ErrorMeasurement measure_error(const Hypothesis& h, const BoolFunction& f,
                               const ProductDistribution& mu, std::uint64_t samples,
                               std::uint64_t seed);

struct Amplified {
  Hypothesis hypothesis;
  int attempts = 0;
  std::vector<double> measured;
  bool accepted = false;
};

/// Runs `learner` with seeds split from `seed` up to ceil(log2(1/delta))
/// times; returns the first hypothesis whose validated error is at most
/// `threshold`, else the best one seen.
Amplified amplify(const std::function<Hypothesis(std::uint64_t)>& learner,
                  const std::function<double(const Hypothesis&)>& validate,
                  double threshold, double delta, std::uint64_t seed);

}  // namespace dnfl
