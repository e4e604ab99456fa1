#include "dnfl/learners.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dnfl/rng.hpp"
#include "dnfl/structural.hpp"

namespace dnfl {

void LearnerConfig::validate() const {
  if (s < 1) throw std::invalid_argument("config: s must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("config: epsilon must be in (0, 1)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("config: delta must be in (0, 1)");
  }
  if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("config: c must be in (0, 1]");
}

DerivedParams derive_params(int s, double epsilon, double c, int n) {
  DerivedParams p;
  p.eps_prime = epsilon / 9.0;
  p.d_formula = bound_degree(s, p.eps_prime, c);
  // past n every term is short, so the bound holds with d = n
  p.d = std::min(p.d_formula, n);
  p.gamma = p.eps_prime / (2.0 * term_l1_factor(c, p.d) * s + 1.0);
  return p;
}

namespace {

enum Stream : std::uint64_t {
  kCollect = 1,
  kConstruct = 2,
  kMu = 3,
  kAmplify = 100,
};

Mask chain_support(const Chain& chain) {
  Mask m = 0;
  if (const auto* c = std::get_if<ClippedChain>(&chain)) {
    for (const auto& [a, v] : c->updates()) m |= a;
  } else {
    for (const auto& [a, w] : std::get<ProperChain>(chain).integer_weights()) m |= a;
  }
  return m;
}

/// Values of a function that depends only on `vars`, stored on that subcube.
struct SubcubeTable {
  std::vector<int> idx;
  std::vector<double> values;

  Mask compress(Mask x) const {
    Mask c = 0;
    for (std::size_t j = 0; j < idx.size(); ++j) c |= ((x >> idx[j]) & 1) << j;
    return c;
  }
  double operator()(Mask x) const { return values[compress(x)]; }
};

SubcubeTable classifier_subcube(const Hypothesis& h) {
  SubcubeTable t;
  const Mask vars = chain_support(h.chain);
  for (int i = 0; i < 64; ++i) {
    if ((vars >> i) & 1) t.idx.push_back(i);
  }
  if (t.idx.size() > static_cast<std::size_t>(kMaxExactDim)) {
    throw DimensionError("hypothesis touches more than 24 variables");
  }
  t.values.resize(std::size_t{1} << t.idx.size());
  for (Mask c = 0; c < t.values.size(); ++c) {
    Mask x = 0;
    for (std::size_t j = 0; j < t.idx.size(); ++j) x |= ((c >> j) & 1) << t.idx[j];
    t.values[c] = h(x);
  }
  return t;
}

SparseSpectrum to_parity(const SparseSpectrum& v) {
  SparseSpectrum out(v.n());
  for (const auto& [a, c] : v.entries()) out.set(a, c);
  return out;
}

void check_c_bounded(const ProductDistribution& mu, double c) {
  if (mu.c_bound() < c - 1e-12) {
    throw std::invalid_argument("distribution is not c-bounded for the configured c");
  }
}

Provenance base_provenance(const char* name, const DerivedParams& dp,
                           const LearnerConfig& cfg) {
  Provenance p;
  p.learner = name;
  p.params = dp;
  p.seed = cfg.seed;
  return p;
}

void record_construction(Provenance& p, const ConstructTrace& t) {
  p.construct_steps = t.steps.size();
  p.construct_queries = t.oracle_queries;
  p.construct_gap = t.final_gap;
}

}  // namespace

int Hypothesis::n() const {
  return std::visit([](const auto& c) { return c.n(); }, chain);
}

double Hypothesis::real_value(Mask x) const {
  return std::visit([x](const auto& c) { return c.evaluate(x); }, chain);
}

BoolFunction Hypothesis::as_function() const {
  return {n(), [h = *this](Mask x) { return static_cast<double>(h(x)); }};
}

std::vector<double> Hypothesis::classifier_table() const {
  if (n() > kMaxExactDim) throw DimensionError("classifier_table: n > 24");
  const auto sub = classifier_subcube(*this);
  std::vector<double> out(std::size_t{1} << n());
  for (Mask x = 0; x < out.size(); ++x) out[x] = sub(x);
  return out;
}

Hypothesis learn_dnf_mq_prod(MembershipOracle& mq, const ProductDistribution& mu,
                             const LearnerConfig& cfg) {
  cfg.validate();
  const int n = mq.n();
  if (mu.n() != n) throw DimensionError("learn_dnf_mq_prod: distribution dimension");
  check_c_bounded(mu, cfg.c);
  const auto dp = derive_params(cfg.s, cfg.epsilon, cfg.c, n);

  RecoveryParams rp;
  rp.theta = dp.gamma;
  rp.delta = 0.25;
  rp.degree_cap = dp.d;
  rp.backend = cfg.backend;
  rp.seed = split_seed(cfg.seed, kCollect);
  const ConstructParams cp{dp.gamma, 0.25, dp.d, cfg.construct_backend,
                           split_seed(cfg.seed, kConstruct)};

  Provenance prov = base_provenance("dnf-mq-prod", dp, cfg);
  prov.mu_used = mu.mu();
  if (mu.is_uniform()) {
    const auto found = km_uniform(mq, rp);
    prov.coefficients = found.spectrum.size();
    prov.oracle_queries = found.report.queries;
    auto built = ptf_approx(found.spectrum, cp);
    record_construction(prov, built.trace);
    return {std::move(built.chain), std::move(prov)};
  }
  const auto found = ekm_product(mq, mu, rp);
  prov.coefficients = found.spectrum.size();
  prov.oracle_queries = found.report.queries;
  auto built = ptf_approx_prod(found.spectrum, mu, cp);
  record_construction(prov, built.trace);
  return {std::move(built.chain), std::move(prov)};
}

std::uint64_t mu_estimation_samples(int n, double gamma, double delta) {
  const double eta = gamma * gamma / (8.0 * n);
  return hoeffding_samples(1.0, eta, delta / n);
}

Hypothesis learn_dnf_smoothed(ExampleOracle& ex, const LearnerConfig& cfg) {
  cfg.validate();
  const int n = ex.n();
  const auto dp = derive_params(cfg.s, cfg.epsilon, cfg.c, n);
  Provenance prov = base_provenance("dnf-smoothed", dp, cfg);
  const std::uint64_t before = ex.sample_count();

  std::optional<ProductDistribution> mu;
  if (cfg.backend == Backend::exact) {
    mu = ex.distribution();
  } else {
    const std::uint64_t need = mu_estimation_samples(n, dp.gamma, cfg.delta / 3.0);
    if (cfg.budget && need > cfg.budget) {
      throw BudgetExhausted("estimating mu needs " + std::to_string(need) +
                            " examples, budget is " + std::to_string(cfg.budget));
    }
    std::vector<Mask> xs(need);
    for (auto& x : xs) x = ex.draw().x;
    mu = estimate_distribution(xs, n);
  }
  prov.mu_used = mu->mu();

  RecoveryParams rp;
  rp.theta = dp.gamma;
  rp.delta = cfg.delta / 3.0;
  rp.degree_cap = dp.d;
  rp.backend = cfg.backend;
  rp.seed = split_seed(cfg.seed, kCollect);
  const auto found = gfc(ex, *mu, rp);
  prov.coefficients = found.spectrum.size();
  prov.oracle_queries = ex.sample_count() - before;

  const ConstructParams cp{dp.gamma, cfg.delta / 3.0, dp.d, cfg.construct_backend,
                           split_seed(cfg.seed, kConstruct)};
  auto built = ptf_approx_prod(found.spectrum, *mu, cp);
  record_construction(prov, built.trace);
  return {std::move(built.chain), std::move(prov)};
}

double influence_accuracy(double mu_i, double gamma) {
  return gamma * gamma / (3.0 * influence_identity_factor(mu_i));
}

Mask eliminate_variables(const std::vector<double>& influence_estimates,
                         const ProductDistribution& mu, double gamma) {
  if (static_cast<int>(influence_estimates.size()) != mu.n()) {
    throw DimensionError("eliminate_variables: one estimate per variable");
  }
  Mask keep = 0;
  for (int i = 0; i < mu.n(); ++i) {
    if (influence_estimates[i] >= 2.0 * influence_accuracy(mu.mu(i), gamma)) {
      keep |= Mask{1} << i;
    }
  }
  return keep;
}

double mdnf_variable_bound(int s, double gamma, double c) {
  return s * std::log(3.0 * s / (gamma * gamma)) / std::log(2.0 / (2.0 - c));
}

namespace {

Hypothesis learn_mdnf(ExampleOracle& ex, const ProductDistribution& mu,
                      const LearnerConfig& cfg, bool uniform) {
  cfg.validate();
  const int n = ex.n();
  if (mu.n() != n) throw DimensionError("learn_mdnf: distribution dimension");
  const double c = uniform ? 1.0 : cfg.c;
  if (uniform && !mu.is_uniform()) throw std::invalid_argument("learn_mdnf_uniform: mu != 0");
  check_c_bounded(mu, c);
  const auto dp = derive_params(cfg.s, cfg.epsilon, c, n);
  Provenance prov = base_provenance(uniform ? "mdnf-uniform" : "mdnf-prod", dp, cfg);
  prov.mu_used = mu.mu();
  const std::uint64_t before = ex.sample_count();

  for (int i = 0; i < n; ++i) prov.kappa.push_back(influence_identity_factor(mu.mu(i)));
  if (cfg.backend == Backend::exact) {
    if (!(ex.distribution() == mu)) {
      throw std::invalid_argument("exact backend needs the oracle's distribution");
    }
    prov.influences = exact_influences(ex.target(), mu);
  } else {
    std::vector<double> eta(n);
    for (int i = 0; i < n; ++i) eta[i] = influence_accuracy(mu.mu(i), dp.gamma);
    prov.influences = estimate_influences(ex, full_mask(n), eta, cfg.delta / (3.0 * n));
  }
  const Mask m = eliminate_variables(prov.influences, mu, dp.gamma);
  prov.variables = m;
  const double bound = mdnf_variable_bound(cfg.s, dp.gamma, c);
  if (popcount(m) > bound) {
    throw ContractViolation(std::to_string(popcount(m)) +
                            " variables survived elimination, bound is " +
                            std::to_string(bound));
  }

  RecoveryParams rp;
  rp.theta = dp.gamma;
  rp.delta = cfg.delta / 3.0;
  rp.degree_cap = dp.d;
  rp.variable_set = m;
  rp.backend = cfg.backend;
  rp.seed = split_seed(cfg.seed, kCollect);
  const auto found = low_degree(ex, mu, rp);
  prov.coefficients = found.spectrum.size();
  prov.oracle_queries = ex.sample_count() - before;

  const ConstructParams cp{dp.gamma, cfg.delta / 3.0, dp.d, cfg.construct_backend,
                           split_seed(cfg.seed, kConstruct)};
  if (uniform) {
    auto built = ptf_approx(to_parity(found.spectrum), cp);
    record_construction(prov, built.trace);
    return {std::move(built.chain), std::move(prov)};
  }
  auto built = ptf_approx_prod(found.spectrum, mu, cp);
  record_construction(prov, built.trace);
  return {std::move(built.chain), std::move(prov)};
}

}  // namespace

Hypothesis learn_mdnf_uniform(ExampleOracle& ex, const LearnerConfig& cfg) {
  return learn_mdnf(ex, ProductDistribution::uniform(ex.n()), cfg, true);
}

Hypothesis learn_mdnf_prod(ExampleOracle& ex, const ProductDistribution& mu,
                           const LearnerConfig& cfg) {
  return learn_mdnf(ex, mu, cfg, false);
}

ErrorMeasurement measure_error(const Hypothesis& h, const BoolFunction& f,
                               const ProductDistribution& mu) {
  if (h.n() != f.n || mu.n() != f.n) throw DimensionError("measure_error: dimension mismatch");
  if (f.n > kMaxExactDim) throw DimensionError("measure_error: exact mode needs n <= 24");
  const auto sub = classifier_subcube(h);
  const auto prob = probability_table(mu);
  const auto ft = tabulate(f);
  double e = 0.0;
  for (Mask x = 0; x < ft.size(); ++x) {
    if (sign_of(ft[x]) != sign_of(sub(x))) e += prob[x];
  }
  return {e, 0.0, true};
}

ErrorMeasurement measure_error(const Hypothesis& h, const BoolFunction& f,
                               const ProductDistribution& mu, std::uint64_t samples,
                               std::uint64_t seed) {
  if (h.n() != f.n || mu.n() != f.n) throw DimensionError("measure_error: dimension mismatch");
  if (samples == 0) throw std::invalid_argument("measure_error: zero samples");
  const auto sub = classifier_subcube(h);
  Rng rng(seed);
  std::uint64_t wrong = 0;
  for (std::uint64_t k = 0; k < samples; ++k) {
    const Mask x = sample_bits(mu, rng);
    if (sign_of(f(x)) != sign_of(sub(x))) ++wrong;
  }
  const double N = static_cast<double>(samples);
  return {static_cast<double>(wrong) / N, 3.0 / std::sqrt(N), false};
}

Amplified amplify(const std::function<Hypothesis(std::uint64_t)>& learner,
                  const std::function<double(const Hypothesis&)>& validate,
                  double threshold, double delta, std::uint64_t seed) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("amplify: delta in (0, 1)");
  const int reps = std::max(1, static_cast<int>(std::ceil(std::log2(1.0 / delta))));
  std::optional<Amplified> best;
  double best_err = 0.0;
  for (int k = 0; k < reps; ++k) {
    Hypothesis h = learner(split_seed(seed, kAmplify + k));
    const double e = validate(h);
    if (!best) {
      best = Amplified{h, 0, {}, false};
      best_err = e;
    } else if (e < best_err) {
      best->hypothesis = h;
      best_err = e;
    }
    best->attempts = k + 1;
    best->measured.push_back(e);
    if (e <= threshold) {
      best->hypothesis = std::move(h);
      best->accepted = true;
      break;
    }
  }
  return std::move(*best);
}

}  // namespace dnfl
