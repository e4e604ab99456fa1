#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dnfl/boolcore.hpp"
#include "dnfl/dist.hpp"
#include "dnfl/recovery.hpp"
#include "dnfl/spectrum.hpp"

namespace dnfl {

/// h_0 = 0, h_{t+1}(x) = P1(h_t(x) + c_t * basis_{a_t}(x)); value is h_T(x).
class ClippedChain {
 public:
  ClippedChain() = default;
  ClippedChain(int n, std::optional<ProductDistribution> basis);

  int n() const { return n_; }
  const std::optional<ProductDistribution>& basis() const { return basis_; }
  const std::vector<std::pair<Mask, double>>& updates() const { return updates_; }
  std::size_t size() const { return updates_.size(); }

  void append(Mask a, double c) { updates_.emplace_back(a, c); }
  double evaluate(Mask x) const;
  BoolFunction as_function() const;
  /// First t updates.
  ClippedChain prefix(std::size_t t) const;

 private:
  int n_ = 0;
  std::optional<ProductDistribution> basis_;
  std::vector<std::pair<Mask, double>> updates_;
};

/// g = P1(g') with g' = gamma * sum_t s_t basis_{a_t}, s_t in {-1, +1}.
class ProperChain {
 public:
  ProperChain() = default;
  ProperChain(int n, std::optional<ProductDistribution> basis, double gamma);

  int n() const { return n_; }
  double gamma() const { return gamma_; }
  const std::optional<ProductDistribution>& basis() const { return basis_; }
  const std::vector<std::pair<Mask, int>>& steps() const { return steps_; }
  std::size_t size() const { return steps_.size(); }

  void append(Mask a, int sign);
  /// Integer coefficient vector p with g' = gamma * p.
  const std::map<Mask, std::int64_t>& integer_weights() const { return weights_; }
  std::int64_t integer_l1() const;
  SparsePolynomial gprime() const;

  double gprime_value(Mask x) const;
  double evaluate(Mask x) const { return project_unit(gprime_value(x)); }
  BoolFunction as_function() const;
  ProperChain prefix(std::size_t t) const;

 private:
  int n_ = 0;
  std::optional<ProductDistribution> basis_;
  double gamma_ = 0.0;
  std::vector<std::pair<Mask, int>> steps_;
  std::map<Mask, std::int64_t> weights_;
};

struct ConstructParams {
  double gamma = 0.05;
  double delta = 0.05;
  int degree = 1;
  /// exact: transform the chain itself; sampled: KM/EKM on the chain as a
  /// membership oracle.
  Backend backend = Backend::exact;
  std::uint64_t seed = 0;
};

struct StepRecord {
  Mask mask = 0;
  double target = 0.0;    // f~(a)
  double estimate = 0.0;  // g~_t(a)
  double update = 0.0;    // coefficient added to the chain
};

struct ConstructTrace {
  std::vector<StepRecord> steps;
  double final_gap = 0.0;  // ||g~_T(B_d) - f~(B_d)||_inf at the stop check
  std::uint64_t step_cap = 0;
  std::uint64_t oracle_queries = 0;
  Mask active_variables = 0;
};

struct ApproxResult {
  ClippedChain chain;
  ConstructTrace trace;
};

struct ProperResult {
  ProperChain chain;
  ConstructTrace trace;
};

/// ceil(4 / (7 gamma^2)).
std::uint64_t approx_step_cap(double gamma);
/// ceil(1 / (2 gamma^2)).
std::uint64_t proper_step_cap(double gamma);

/// Target in the parity basis.
ApproxResult ptf_approx(const SparseSpectrum& target, const ConstructParams& p);
/// Target in the phi_{mu,.} basis of `mu`.
ApproxResult ptf_approx_prod(const SparseSpectrum& target,
                             const ProductDistribution& mu,
                             const ConstructParams& p);
/// Single final projection; integer-weight output.
ProperResult ptf_construct_prod(const SparseSpectrum& target,
                                const ProductDistribution& mu,
                                const ConstructParams& p);

/// E(t) = E_mu[(f - g_t)(f - 2 g'_t + g_t)], exact over 2^n points.
double potential(const BoolFunction& f, const ProperChain& chain,
                 const ProductDistribution& mu);

/// Chain files: header `chain clipped|proper <basis...> [gamma=<g>]`, then
/// one `mask-hex coefficient` line per update in order.
std::string write_chain(const ClippedChain& c);
std::string write_chain(const ProperChain& c);
std::variant<ClippedChain, ProperChain> read_chain(std::string_view text);

}  // namespace dnfl
