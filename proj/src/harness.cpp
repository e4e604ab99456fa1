#include "dnfl/harness.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "dnfl/approx.hpp"
#include "dnfl/rng.hpp"
#include "dnfl/spectrum.hpp"

namespace dnfl {

using nlohmann::json;

void ExperimentSpec::validate() const {
  if (n < 1 || n > kMaxDim) throw std::invalid_argument("spec: n out of range");
  if (s < 1) throw std::invalid_argument("spec: s must be >= 1");
  if (max_len < 1 || max_len > n) throw std::invalid_argument("spec: max_len must be in [1, n]");
  if (count < 0) throw std::invalid_argument("spec: count must be >= 0");
  if (learner != "mq" && learner != "smoothed" && learner != "mdnf-uniform" &&
      learner != "mdnf-prod") {
    throw std::invalid_argument("spec: unknown learner '" + learner + "'");
  }
  if (dist.mode == "explicit") {
    if (static_cast<int>(dist.mu.size()) != n) {
      throw std::invalid_argument("spec: explicit mu needs n entries");
    }
    ProductDistribution check(dist.mu);
  } else if (dist.mode == "smoothed") {
    if (!(dist.c > 0.0 && dist.c <= 0.5)) {
      throw std::invalid_argument("spec: smoothed c must be in (0, 1/2]");
    }
    if (!dist.mu_bar.empty() && static_cast<int>(dist.mu_bar.size()) != n) {
      throw std::invalid_argument("spec: mu_bar needs n entries");
    }
  } else if (dist.mode != "uniform") {
    throw std::invalid_argument("spec: unknown distribution mode '" + dist.mode + "'");
  }
  if (error_mode != "exact" && error_mode != "sampled") {
    throw std::invalid_argument("spec: error_mode must be exact or sampled");
  }
  if (error_mode == "exact" && n > kMaxExactDim) {
    throw std::invalid_argument("spec: exact error needs n <= 24");
  }
  if (learner == "mdnf-uniform" && dist.mode != "uniform") {
    throw std::invalid_argument("spec: mdnf-uniform needs the uniform distribution");
  }
  config.validate();
}

json to_json(const ExperimentSpec& spec) {
  const auto& c = spec.config;
  return {
      {"command", spec.command},
      {"learner", spec.learner},
      {"n", spec.n},
      {"s", spec.s},
      {"max_len", spec.max_len},
      {"monotone", spec.monotone},
      {"count", spec.count},
      {"target", spec.target},
      {"dist", {{"mode", spec.dist.mode}, {"mu", spec.dist.mu},
                {"mu_bar", spec.dist.mu_bar}, {"c", spec.dist.c}}},
      {"config", {{"epsilon", c.epsilon}, {"delta", c.delta}, {"c", c.c},
                  {"backend", to_string(c.backend)},
                  {"construct_backend", to_string(c.construct_backend)},
                  {"budget", c.budget}}},
      {"error_mode", spec.error_mode},
      {"error_samples", spec.error_samples},
      {"bounds", {{"count", spec.bounds.count}, {"n", spec.bounds.n},
                  {"s", spec.bounds.s}, {"eps", spec.bounds.eps},
                  {"cs", spec.bounds.cs}}},
      {"seed", spec.seed},
  };
}

namespace {

void check_keys(const json& j, std::initializer_list<const char*> keys,
                const char* where) {
  if (!j.is_object()) throw std::invalid_argument(std::string(where) + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw std::invalid_argument(std::string(where) + ": unknown key '" + k + "'");
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ExperimentSpec spec_from_json(const json& j) {
  check_keys(j, {"command", "learner", "n", "s", "max_len", "monotone", "count",
                 "target", "dist", "config", "error_mode", "error_samples",
                 "bounds", "seed"},
             "spec");
  ExperimentSpec spec;
  read(j, "command", spec.command);
  read(j, "learner", spec.learner);
  read(j, "n", spec.n);
  read(j, "s", spec.s);
  read(j, "max_len", spec.max_len);
  read(j, "monotone", spec.monotone);
  read(j, "count", spec.count);
  read(j, "target", spec.target);
  read(j, "error_mode", spec.error_mode);
  read(j, "error_samples", spec.error_samples);
  read(j, "seed", spec.seed);
  if (j.contains("dist")) {
    const auto& d = j.at("dist");
    check_keys(d, {"mode", "mu", "mu_bar", "c"}, "dist");
    read(d, "mode", spec.dist.mode);
    read(d, "mu", spec.dist.mu);
    read(d, "mu_bar", spec.dist.mu_bar);
    read(d, "c", spec.dist.c);
  }
  if (j.contains("config")) {
    const auto& c = j.at("config");
    check_keys(c, {"epsilon", "delta", "c", "backend", "construct_backend", "budget"},
               "config");
    read(c, "epsilon", spec.config.epsilon);
    read(c, "delta", spec.config.delta);
    read(c, "c", spec.config.c);
    read(c, "budget", spec.config.budget);
    if (c.contains("backend")) spec.config.backend = parse_backend(c.at("backend").get<std::string>());
    if (c.contains("construct_backend")) {
      spec.config.construct_backend = parse_backend(c.at("construct_backend").get<std::string>());
    }
  }
  if (j.contains("bounds")) {
    const auto& b = j.at("bounds");
    check_keys(b, {"count", "n", "s", "eps", "cs"}, "bounds");
    read(b, "count", spec.bounds.count);
    read(b, "n", spec.bounds.n);
    read(b, "s", spec.bounds.s);
    read(b, "eps", spec.bounds.eps);
    read(b, "cs", spec.bounds.cs);
  }
  spec.config.s = spec.s;
  spec.config.seed = spec.seed;
  return spec;
}

std::uint64_t trial_seed(std::uint64_t master, int trial, SeedStream stream) {
  return split_seed(split_seed(master, static_cast<std::uint64_t>(trial)),
                    static_cast<std::uint64_t>(stream));
}

LoadedFunction load_function(std::string_view text) {
  std::string s(text);
  const auto start = s.find_first_not_of(" \t\r\n");
  if (start == std::string::npos) throw std::invalid_argument("empty function file");
  s = s.substr(start);
  if (s.rfind("truth", 0) != 0) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    auto dnf = DnfFormula::parse(s);
    return {dnf.as_function(), dnf};
  }
  std::istringstream in(s);
  std::string magic, ntok;
  in >> magic >> ntok;
  if (ntok.rfind("n=", 0) != 0) throw std::invalid_argument("truth table needs n=");
  const int n = std::stoi(ntok.substr(2));
  check_dim(n);
  if (n > kMaxExactDim) throw DimensionError("truth table needs n <= 24");
  auto table = std::make_shared<std::vector<double>>();
  std::string tok;
  while (in >> tok) table->push_back(parse_reals(tok).at(0));
  if (table->size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("truth table needs 2^n values");
  }
  return {BoolFunction{n, [table](Mask x) { return (*table)[x]; }}, std::nullopt};
}

std::string write_truth_table(const std::vector<double>& table) {
  int n = 0;
  while ((std::size_t{1} << n) < table.size()) ++n;
  std::string out = "truth n=" + std::to_string(n) + "\n";
  for (std::size_t x = 0; x < table.size(); ++x) {
    out += format_real(table[x]);
    out += (x + 1) % 16 == 0 || x + 1 == table.size() ? '\n' : ' ';
  }
  return out;
}

std::string cmd_transform(std::string_view function_text,
                          const std::optional<std::vector<double>>& mu,
                          std::optional<int> degree_cap) {
  const auto loaded = load_function(function_text);
  if (loaded.f.n > kMaxExactDim) throw DimensionError("transform needs n <= 24");
  if (mu) {
    return write_spectrum(exact_mu_transform(loaded.f, ProductDistribution(*mu), degree_cap));
  }
  return write_spectrum(exact_uniform_transform(loaded.f, degree_cap));
}

namespace {

ProductDistribution trial_distribution(const ExperimentSpec& spec, int trial) {
  if (spec.dist.mode == "uniform") return ProductDistribution::uniform(spec.n);
  if (spec.dist.mode == "explicit") return ProductDistribution(spec.dist.mu);
  const std::vector<double> bar =
      spec.dist.mu_bar.empty() ? std::vector<double>(spec.n, 0.0) : spec.dist.mu_bar;
  Rng rng(trial_seed(spec.seed, trial, SeedStream::distribution));
  return perturb(bar, spec.dist.c, rng);
}

DnfFormula trial_target(const ExperimentSpec& spec, int trial) {
  if (!spec.target.empty()) {
    auto f = DnfFormula::parse(spec.target);
    if (f.n() != spec.n) throw std::invalid_argument("spec: target n differs from spec n");
    return f;
  }
  return random_dnf(spec.n, spec.s, spec.max_len, spec.monotone,
                    trial_seed(spec.seed, trial, SeedStream::target));
}

Hypothesis run_learner(const ExperimentSpec& spec, const DnfFormula& f,
                       const ProductDistribution& mu, int trial) {
  LearnerConfig cfg = spec.config;
  cfg.s = spec.s;
  cfg.seed = trial_seed(spec.seed, trial, SeedStream::learner);
  const std::uint64_t oracle_seed = trial_seed(spec.seed, trial, SeedStream::oracle);
  if (spec.learner == "mq") {
    MembershipOracle mq(f.as_function(), cfg.budget);
    return learn_dnf_mq_prod(mq, mu, cfg);
  }
  ExampleOracle ex(f.as_function(), mu, oracle_seed, cfg.budget);
  if (spec.learner == "smoothed") return learn_dnf_smoothed(ex, cfg);
  if (!f.monotone()) throw std::invalid_argument("monotone learners need a monotone target");
  if (spec.learner == "mdnf-uniform") return learn_mdnf_uniform(ex, cfg);
  return learn_mdnf_prod(ex, mu, cfg);
}

std::string chain_text(const Chain& c) {
  return std::visit([](const auto& ch) { return write_chain(ch); }, c);
}

std::size_t chain_size(const Chain& c) {
  return std::visit([](const auto& ch) { return ch.size(); }, c);
}

}  // namespace

LearnOutcome cmd_learn(const ExperimentSpec& spec) {
  spec.validate();
  LearnOutcome out;
  json trials = json::array();
  double max_error = 0.0;
  for (int t = 0; t < spec.count; ++t) {
    const auto start = std::chrono::steady_clock::now();
    const auto f = trial_target(spec, t);
    const auto mu = trial_distribution(spec, t);
    const auto h = run_learner(spec, f, mu, t);
    const auto err = spec.error_mode == "exact"
                         ? measure_error(h, f.as_function(), mu)
                         : measure_error(h, f.as_function(), mu, spec.error_samples,
                                         trial_seed(spec.seed, t, SeedStream::measurement));
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto& p = h.provenance;
    const bool ok = err.error <= spec.config.epsilon;
    out.successes += ok;
    max_error = std::max(max_error, err.error);
    json trial = {
        {"trial", t},
        {"target", f.to_string()},
        {"mu", mu.mu()},
        {"learner", p.learner},
        {"params", {{"eps_prime", p.params.eps_prime}, {"d_formula", p.params.d_formula},
                    {"d", p.params.d}, {"gamma", p.params.gamma}}},
        {"coefficients", p.coefficients},
        {"oracle_queries", p.oracle_queries},
        {"construct_steps", p.construct_steps},
        {"construct_queries", p.construct_queries},
        {"construct_gap", p.construct_gap},
        {"chain_length", chain_size(h.chain)},
        {"error", err.error},
        {"error_band", err.band},
        {"error_exact", err.exact},
        {"success", ok},
        {"wall_time_s", wall},
    };
    if (!p.influences.empty()) {
      trial["variables"] = p.variables;
      trial["variable_count"] = popcount(p.variables);
      trial["influences"] = p.influences;
      trial["kappa"] = p.kappa;
    }
    trials.push_back(std::move(trial));
    out.hypotheses.push_back(chain_text(h.chain));
  }
  out.manifest = {
      {"spec", to_json(spec)},
      {"seed_rule", "split_seed(split_seed(master, trial), stream)"},
      {"influence_identity", "I_i * (1 - mu_i^2) = sum over a with a_i = 1 of f_mu(a)^2"},
      {"trials", std::move(trials)},
      {"summary", {{"count", spec.count}, {"successes", out.successes},
                   {"max_error", max_error}}},
  };
  return out;
}

namespace {

ProductDistribution random_c_bounded(int n, double c, Rng& rng) {
  if (c >= 1.0) return ProductDistribution::uniform(n);
  std::uniform_real_distribution<double> u(-1.0 + c, 1.0 - c);
  std::vector<double> mu(n);
  for (auto& m : mu) m = u(rng);
  return ProductDistribution(std::move(mu));
}

ClippedChain random_chain(int n, const ProductDistribution& mu, Rng& rng) {
  std::uniform_int_distribution<int> len(0, 8);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> var(0, n - 1);
  std::uniform_int_distribution<int> deg(0, 3);
  ClippedChain g(n, mu);
  const int T = len(rng);
  for (int t = 0; t < T; ++t) {
    Mask a = 0;
    for (int k = deg(rng); k > 0; --k) a |= Mask{1} << var(rng);
    g.append(a, coef(rng));
  }
  return g;
}

/// Random threshold of terms with integer weights whose linear form is
/// odd-valued, hence 1-sign-representing.
TermThresholdFunction random_threshold(int n, int s, int max_len, Rng& rng) {
  const auto base = random_dnf(n, s, max_len, false, rng());
  std::uniform_int_distribution<int> w(1, 2);
  std::bernoulli_distribution neg(0.5);
  TermThresholdFunction F;
  F.n = n;
  F.terms = base.terms();
  long long sum = 0;
  for (int i = 0; i < s; ++i) {
    const int v = neg(rng) ? -w(rng) : w(rng);
    F.weights.push_back(v);
    sum += v;
  }
  std::uniform_int_distribution<int> b(-2, 2);
  long long bias = b(rng);
  if ((sum + bias) % 2 == 0) bias += 1;
  F.bias = static_cast<double>(bias);
  return F;
}

}  // namespace

std::vector<BoundReport> cmd_verify_bounds(const BoundSweep& sweep, std::uint64_t seed) {
  if (sweep.count < 0 || sweep.n < 1 || sweep.n > 20 || sweep.s < 1) {
    throw std::invalid_argument("verify-bounds: need count >= 0, 1 <= n <= 20, s >= 1");
  }
  if (sweep.cs.empty() && sweep.count > 0) throw std::invalid_argument("verify-bounds: no c values");
  std::vector<BoundReport> out;
  for (int k = 0; k < sweep.count; ++k) {
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(k)));
    const double c = sweep.cs[static_cast<std::size_t>(k) % sweep.cs.size()];
    const auto mu = random_c_bounded(sweep.n, c, rng);
    const auto f = random_dnf(sweep.n, sweep.s, std::min(sweep.n, 6), false, rng());
    const auto g = random_chain(sweep.n, mu, rng).as_function();
    const auto ff = f.as_function();

    const auto p = dnf_sign_polynomial(f, mu);
    out.push_back(verify_error_bound(ff, g, mu, SignPolyBound{p, std::nullopt}));
    const int d = bound_degree(sweep.s, sweep.eps, c);
    out.push_back(verify_error_bound(
        ff, g, mu, SignPolyBound{p, truncated_dnf_polynomial(f, mu, d).poly}));
    out.push_back(verify_error_bound(ff, g, mu, DnfBound{sweep.s, c, sweep.eps}));
    if (mu.is_uniform()) out.push_back(verify_error_bound(ff, g, mu, UniformDnfBound{sweep.s}));

    const auto F = random_threshold(sweep.n, sweep.s, std::min(sweep.n, 6), rng);
    out.push_back(verify_error_bound(F.as_function(), g, mu,
                                     LtfBound{F.total_weight(), c, sweep.eps}));
  }
  return out;
}

std::string bounds_csv(const std::vector<BoundReport>& reports) {
  std::string s = bound_csv_header() + "\n";
  for (const auto& r : reports) s += bound_csv_row(r) + "\n";
  return s;
}

std::vector<std::string> cmd_gen(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<std::string> out;
  for (int t = 0; t < spec.count; ++t) out.push_back(trial_target(spec, t).to_string());
  return out;
}

ErrorMeasurement cmd_eval(std::string_view function_text, std::string_view chain_text,
                          const std::optional<std::vector<double>>& mu,
                          std::optional<std::uint64_t> samples, std::uint64_t seed) {
  const auto loaded = load_function(function_text);
  Hypothesis h{read_chain(chain_text), {}};
  if (h.n() != loaded.f.n) throw DimensionError("eval: chain and function dimensions differ");
  const auto dist = mu ? ProductDistribution(*mu) : ProductDistribution::uniform(loaded.f.n);
  if (samples) return measure_error(h, loaded.f, dist, *samples, seed);
  return measure_error(h, loaded.f, dist);
}

}  // namespace dnfl
