#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dnfl/boolcore.hpp"
#include "dnfl/dist.hpp"
#include "dnfl/learners.hpp"
#include "dnfl/structural.hpp"
#include "json.hpp"

namespace dnfl {

struct DistSpec {
  std::string mode = "uniform";  // uniform | explicit | smoothed
  std::vector<double> mu;        // explicit
  std::vector<double> mu_bar;    // smoothed; empty means 0^n
  double c = 0.25;               // smoothed perturbation radius
};

struct BoundSweep {
  int count = 100;
  int n = 10;
  int s = 3;
  double eps = 0.1;
  std::vector<double> cs{1.0, 0.5, 0.25};
};

struct ExperimentSpec {
  std::string command = "learn";
  std::string learner = "mq";  // mq | smoothed | mdnf-uniform | mdnf-prod
  int n = 10;
  int s = 2;
  int max_len = 3;
  bool monotone = false;
  int count = 1;
  /// Fixed target in DNF text form; random targets when empty.
  std::string target;
  DistSpec dist;
  LearnerConfig config;
  std::string error_mode = "exact";  // exact | sampled
  std::uint64_t error_samples = 1000000;
  BoundSweep bounds;
  std::uint64_t seed = 0;

  void validate() const;
};

nlohmann::json to_json(const ExperimentSpec& spec);
/// Missing keys keep their defaults; unknown keys are rejected.
ExperimentSpec spec_from_json(const nlohmann::json& j);

/// Per-trial seeds: split_seed(split_seed(master, trial), stream).
enum class SeedStream : std::uint64_t {
  target = 1,
  distribution = 2,
  learner = 3,
  oracle = 4,
  measurement = 5,
};
std::uint64_t trial_seed(std::uint64_t master, int trial, SeedStream stream);

/// `n=4; 0&!2|1` (DNF) or `truth n=3` followed by 2^n values indexed by
/// point bits.
struct LoadedFunction {
  BoolFunction f;
  std::optional<DnfFormula> dnf;
};
LoadedFunction load_function(std::string_view text);
std::string write_truth_table(const std::vector<double>& table);

/// Exact spectrum of a function file; product basis when `mu` is given.
std::string cmd_transform(std::string_view function_text,
                          const std::optional<std::vector<double>>& mu,
                          std::optional<int> degree_cap);

struct LearnOutcome {
  nlohmann::json manifest;
  std::vector<std::string> hypotheses;  // chain text per trial
  int successes = 0;
};
LearnOutcome cmd_learn(const ExperimentSpec& spec);

/// Random (f, g, mu) tuples; every tuple is checked against each bound
/// family that applies to it.
std::vector<BoundReport> cmd_verify_bounds(const BoundSweep& sweep, std::uint64_t seed);
std::string bounds_csv(const std::vector<BoundReport>& reports);

/// One DNF per line.
std::vector<std::string> cmd_gen(const ExperimentSpec& spec);

/// Pr_mu[f != sign(chain)], exact or sampled.
ErrorMeasurement cmd_eval(std::string_view function_text, std::string_view chain_text,
                          const std::optional<std::vector<double>>& mu,
                          std::optional<std::uint64_t> samples, std::uint64_t seed);

}  // namespace dnfl
