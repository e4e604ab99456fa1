#include "dnfl/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace dnfl {

const char* to_string(Backend b) {
  return b == Backend::exact ? "exact" : "sampled";
}

Backend parse_backend(std::string_view s) {
  if (s == "exact") return Backend::exact;
  if (s == "sampled") return Backend::sampled;
  throw std::invalid_argument("unknown backend '" + std::string(s) + "'");
}

std::vector<std::vector<double>> bucket_weight_levels(
    const std::vector<double>& squared_coeffs, int n) {
  if (squared_coeffs.size() != (std::size_t{1} << n)) {
    throw DimensionError("bucket_weight_levels: table size is not 2^n");
  }
  std::vector<std::vector<double>> levels(n + 1);
  levels[n] = squared_coeffs;
  for (int k = n - 1; k >= 0; --k) {
    const std::size_t len = std::size_t{1} << k;
    levels[k].resize(len);
    for (std::size_t a = 0; a < len; ++a) {
      levels[k][a] = levels[k + 1][a] + levels[k + 1][a | len];
    }
  }
  return levels;
}

std::vector<Mask> masks_up_to_degree(Mask vars, int d) {
  std::vector<int> idx;
  for (int i = 0; i < 64; ++i) {
    if ((vars >> i) & 1) idx.push_back(i);
  }
  std::vector<Mask> out;
  // depth-first over subsets of idx with at most d elements
  auto rec = [&](auto&& self, std::size_t from, Mask cur, int deg) -> void {
    out.push_back(cur);
    if (deg == d) return;
    for (std::size_t j = from; j < idx.size(); ++j) {
      self(self, j + 1, cur | (Mask{1} << idx[j]), deg + 1);
    }
  };
  rec(rec, 0, 0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void check_params(const RecoveryParams& p) {
  if (!(p.theta > 0.0 && p.theta <= 1.0)) {
    throw std::invalid_argument("recovery: theta must be in (0, 1]");
  }
  if (!(p.delta > 0.0 && p.delta < 1.0)) {
    throw std::invalid_argument("recovery: delta must be in (0, 1)");
  }
}

std::vector<double> exact_coefficients(const std::vector<double>& table,
                                       const ProductDistribution& basis,
                                       bool uniform) {
  if (uniform) return fwht(table).values;
  return mu_transform_dense(table, basis);
}

struct Bucket {
  Mask mask;
  double weight;
};

RecoveryResult km_core(MembershipOracle& mq, const ProductDistribution* mu,
                       const RecoveryParams& p) {
  check_params(p);
  const int n = mq.n();
  if (mu && mu->n() != n) throw DimensionError("ekm: distribution dimension");
  const bool uniform = mu == nullptr;
  const ProductDistribution basis = uniform ? ProductDistribution::uniform(n) : *mu;
  const Mask allowed = p.variable_set.value_or(full_mask(n)) & full_mask(n);
  const int cap = std::min(p.degree_cap.value_or(n), n);
  const double theta = p.theta;
  const auto max_keep = static_cast<std::size_t>(std::floor(4.0 / (theta * theta)));
  const double delta_each =
      p.delta / static_cast<double>(2 * n * max_keep + max_keep);
  const double eta_bucket = theta * theta / 4.0;
  const double eta_coef = theta / 2.0;
  const std::uint64_t queries_before = mq.query_count();

  RecoveryResult result{SparseSpectrum(n, mu ? std::optional(*mu) : std::nullopt), {}};
  auto& report = result.report;

  bool use_table = p.backend == Backend::exact;
  if (!use_table && n <= kMaxExactDim) {
    // Two queries per pair sample; the cheapest bucket has sup|phi|^2 = 1.
    const std::uint64_t cheapest = 2 * hoeffding_samples(1.0, eta_bucket, delta_each);
    use_table = cheapest >= (std::uint64_t{1} << n);
    report.enumerated = use_table;
  }

  std::vector<double> coeffs;
  std::vector<std::vector<double>> levels;
  if (use_table) {
    coeffs = exact_coefficients(mq.full_table(), basis, uniform);
    std::vector<double> sq(coeffs.size(), 0.0);
    for (Mask a = 0; a < coeffs.size(); ++a) {
      if ((a & ~allowed) == 0 && popcount(a) <= cap) sq[a] = coeffs[a] * coeffs[a];
    }
    levels = bucket_weight_levels(sq, n);
  }

  Rng rng(p.seed);
  auto estimate_bucket = [&](Mask alpha, int prefix_len) {
    const Mask low = full_mask(prefix_len);
    const std::uint64_t samples =
        hoeffding_samples(basis.basis_sup_sq(alpha), eta_bucket, delta_each);
    double sum = 0.0;
    for (std::uint64_t s = 0; s < samples; ++s) {
      const Mask z = sample_bits(basis, rng) & ~low;
      const Mask y1 = sample_bits(basis, rng) & low;
      const Mask y2 = sample_bits(basis, rng) & low;
      sum += mq.query(y1 | z) * mq.query(y2 | z) *
             basis_value(basis, alpha, y1) * basis_value(basis, alpha, y2);
    }
    return sum / static_cast<double>(samples);
  };
  auto estimate_coef = [&](Mask alpha) {
    const std::uint64_t samples = hoeffding_samples(
        std::sqrt(basis.basis_sup_sq(alpha)), eta_coef, delta_each);
    double sum = 0.0;
    for (std::uint64_t s = 0; s < samples; ++s) {
      const Mask x = sample_bits(basis, rng);
      sum += mq.query(x) * basis_value(basis, alpha, x);
    }
    return sum / static_cast<double>(samples);
  };

  const double keep_threshold = theta * theta / 2.0;
  std::vector<Mask> candidates{0};
  for (int k = 0; k < n; ++k) {
    std::vector<Bucket> next;
    for (Mask alpha : candidates) {
      Mask children[2] = {alpha, alpha | (Mask{1} << k)};
      const bool can_extend = ((allowed >> k) & 1) && popcount(alpha) < cap;
      for (int c = 0; c < (can_extend ? 2 : 1); ++c) {
        const double w = use_table ? levels[k + 1][children[c]]
                                   : estimate_bucket(children[c], k + 1);
        ++report.estimates;
        ++report.candidates;
        // ties at exactly theta^2/2 keep the bucket
        if (w >= keep_threshold) next.push_back({children[c], w});
      }
    }
    if (next.size() > max_keep) {
      std::sort(next.begin(), next.end(), [](const Bucket& a, const Bucket& b) {
        return a.weight != b.weight ? a.weight > b.weight : a.mask < b.mask;
      });
      next.resize(max_keep);
    }
    candidates.clear();
    for (const auto& b : next) candidates.push_back(b.mask);
    std::sort(candidates.begin(), candidates.end());
    report.max_frontier = std::max(report.max_frontier, candidates.size());
    if (candidates.empty()) break;
  }
  for (Mask alpha : candidates) {
    const double v = use_table ? coeffs[alpha] : estimate_coef(alpha);
    ++report.estimates;
    if (std::abs(v) >= eta_coef) result.spectrum.set(alpha, v);
  }
  report.support = result.spectrum.size();
  report.queries = mq.query_count() - queries_before;
  return result;
}

void require_exact_basis(const ExampleOracle& ex, const ProductDistribution& basis) {
  if (!(ex.distribution() == basis)) {
    throw std::invalid_argument(
        "exact backend needs the basis to be the oracle's true distribution");
  }
  if (ex.n() > kMaxExactDim) throw DimensionError("exact backend needs n <= 24");
}

std::vector<double> exact_example_coefficients(const ExampleOracle& ex,
                                               const ProductDistribution& basis) {
  require_exact_basis(ex, basis);
  return mu_transform_dense(tabulate(ex.target()), basis);
}

}  // namespace

RecoveryResult km_uniform(MembershipOracle& mq, const RecoveryParams& p) {
  return km_core(mq, nullptr, p);
}

RecoveryResult ekm_product(MembershipOracle& mq, const ProductDistribution& mu,
                           const RecoveryParams& p) {
  return km_core(mq, &mu, p);
}

RecoveryResult low_degree(ExampleOracle& ex, const ProductDistribution& basis,
                          const RecoveryParams& p) {
  check_params(p);
  if (!p.degree_cap) throw std::invalid_argument("low_degree: degree cap required");
  const int n = ex.n();
  if (basis.n() != n) throw DimensionError("low_degree: basis dimension");
  const Mask vars = p.variable_set.value_or(full_mask(n)) & full_mask(n);
  const int d = std::min(*p.degree_cap, popcount(vars));
  const auto masks = masks_up_to_degree(vars, d);
  const double eta = p.theta / 2.0;
  const std::uint64_t before = ex.sample_count();

  RecoveryResult result{SparseSpectrum(n, basis), {}};
  result.report.candidates = masks.size();
  result.report.estimates = masks.size();
  if (p.backend == Backend::exact) {
    const auto coeffs = exact_example_coefficients(ex, basis);
    for (Mask a : masks) {
      if (std::abs(coeffs[a]) >= eta) result.spectrum.set(a, coeffs[a]);
    }
  } else {
    const double delta_each = p.delta / static_cast<double>(masks.size());
    const std::uint64_t samples = coefficient_samples(
        basis.c_bound(), d, eta, delta_each, p.refined_sampling);
    std::vector<double> sums(masks.size(), 0.0);
    for (std::uint64_t s = 0; s < samples; ++s) {
      const Example e = ex.draw();
      for (std::size_t j = 0; j < masks.size(); ++j) {
        sums[j] += e.y * basis_value(basis, masks[j], e.x);
      }
    }
    for (std::size_t j = 0; j < masks.size(); ++j) {
      const double v = sums[j] / static_cast<double>(samples);
      if (std::abs(v) >= eta) result.spectrum.set(masks[j], v);
    }
  }
  result.report.support = result.spectrum.size();
  result.report.queries = ex.sample_count() - before;
  return result;
}

RecoveryResult gfc(ExampleOracle& ex, const ProductDistribution& basis,
                   const RecoveryParams& p) {
  check_params(p);
  if (!p.degree_cap) throw std::invalid_argument("gfc: degree cap required");
  const int n = ex.n();
  if (basis.n() != n) throw DimensionError("gfc: basis dimension");
  const Mask vars = p.variable_set.value_or(full_mask(n)) & full_mask(n);
  const int d = std::min(*p.degree_cap, n);
  const double theta = p.theta;
  const double default_cap =
      std::min(16.0 * std::ldexp(1.0, d) / (theta * theta), 1e18);
  const std::uint64_t cap =
      p.frontier_cap.value_or(static_cast<std::uint64_t>(default_cap));
  const double delta_each = p.delta / static_cast<double>(cap);
  const std::uint64_t before = ex.sample_count();

  std::vector<double> exact;
  if (p.backend == Backend::exact) exact = exact_example_coefficients(ex, basis);

  RecoveryResult result{SparseSpectrum(n, basis), {}};
  auto& report = result.report;
  std::vector<Mask> frontier{0};
  std::uint64_t explored = 0;
  for (int k = 0; k <= d && !frontier.empty(); ++k) {
    explored += frontier.size();
    report.max_frontier = std::max(report.max_frontier, frontier.size());
    if (explored > cap) {
      throw FrontierExceeded("gfc explored " + std::to_string(explored) +
                             " candidates, cap is " + std::to_string(cap));
    }
    std::vector<double> est(frontier.size(), 0.0);
    if (p.backend == Backend::exact) {
      for (std::size_t j = 0; j < frontier.size(); ++j) est[j] = exact[frontier[j]];
    } else {
      const std::uint64_t samples = coefficient_samples(
          basis.c_bound(), k, theta / 4.0, delta_each, p.refined_sampling);
      for (std::uint64_t s = 0; s < samples; ++s) {
        const Example e = ex.draw();
        for (std::size_t j = 0; j < frontier.size(); ++j) {
          est[j] += e.y * basis_value(basis, frontier[j], e.x);
        }
      }
      for (double& v : est) v /= static_cast<double>(samples);
    }
    report.estimates += frontier.size();
    std::vector<Mask> survivors;
    for (std::size_t j = 0; j < frontier.size(); ++j) {
      const bool heavy = std::abs(est[j]) >= theta / 2.0;
      if (heavy) result.spectrum.set(frontier[j], est[j]);
      // the root always grows; a balanced target has a light constant term
      if (heavy || frontier[j] == 0) survivors.push_back(frontier[j]);
    }
    report.levels.push_back(survivors);
    if (k == d) break;
    // a grows only when every one-smaller subset survived
    const std::set<Mask> alive(survivors.begin(), survivors.end());
    std::set<Mask> next;
    for (Mask b : survivors) {
      for (int i = 0; i < n; ++i) {
        const Mask bit = Mask{1} << i;
        if ((b & bit) || !(vars & bit)) continue;
        const Mask a = b | bit;
        if (next.count(a)) continue;
        bool closed = true;
        for (Mask rest = a; rest && closed; rest &= rest - 1) {
          closed = alive.count(a & ~(rest & -rest)) > 0;
        }
        if (closed) next.insert(a);
      }
    }
    frontier.assign(next.begin(), next.end());
  }
  report.candidates = explored;
  report.support = result.spectrum.size();
  report.queries = ex.sample_count() - before;
  return result;
}

}  // namespace dnfl
