#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dnfl/boolcore.hpp"
#include "dnfl/dist.hpp"
#include "dnfl/oracles.hpp"
#include "dnfl/spectrum.hpp"

namespace dnfl {

enum class Backend { sampled, exact };

const char* to_string(Backend b);
Backend parse_backend(std::string_view s);

/// GFC explored more candidates than its cap allows; usually an unlucky
/// perturbation.
class FrontierExceeded : public BudgetExhausted {
 public:
  using BudgetExhausted::BudgetExhausted;
};

struct RecoveryParams {
  double theta = 0.1;
  double delta = 0.05;
  std::optional<int> degree_cap;
  std::optional<Mask> variable_set;
  Backend backend = Backend::sampled;
  /// d-independent sample sizes for coefficient estimates from examples.
  bool refined_sampling = false;
  /// Randomness for the sampled KM/EKM estimators (MQ side draws its own
  /// points).
  std::uint64_t seed = 0;
  /// GFC only; default 16 * 2^d / theta^2.
  std::optional<std::uint64_t> frontier_cap;
};

struct RecoveryReport {
  std::size_t support = 0;
  std::uint64_t queries = 0;        // membership queries or examples drawn
  std::uint64_t estimates = 0;      // bucket weights / coefficients estimated
  std::uint64_t candidates = 0;     // masks or buckets examined
  std::size_t max_frontier = 0;
  /// KM: the Hoeffding plan cost more than querying the whole cube, so
  /// bucket weights were computed from the full table.
  bool enumerated = false;
  /// GFC: surviving family at each level.
  std::vector<std::vector<Mask>> levels;
};

struct RecoveryResult {
  SparseSpectrum spectrum;
  RecoveryReport report;
};

/// Kushilevitz-Mansour heavy coefficient search over the parity basis.
RecoveryResult km_uniform(MembershipOracle& mq, const RecoveryParams& p);

/// Prefix-bucket search in the phi_{mu,a} basis.
RecoveryResult ekm_product(MembershipOracle& mq, const ProductDistribution& mu,
                           const RecoveryParams& p);

/// Every coefficient with mask inside `variable_set` and degree at most
/// `degree_cap`, estimated individually from examples. Estimates below
/// theta/2 are dropped.
RecoveryResult low_degree(ExampleOracle& ex, const ProductDistribution& basis,
                          const RecoveryParams& p);

/// Greedy feature construction: breadth-first growth of a downward-closed
/// candidate family.
RecoveryResult gfc(ExampleOracle& ex, const ProductDistribution& basis,
                   const RecoveryParams& p);

/// Exact bucket weights W_k(alpha) = sum of squared coefficients whose
/// restriction to variables [0, k) equals alpha, for every level k.
/// Entry [k] has 2^k values. Used by KM (exact path) and its tests.
std::vector<std::vector<double>> bucket_weight_levels(
    const std::vector<double>& squared_coeffs, int n);

/// Masks a within `vars` with popcount(a) <= d, in increasing order.
std::vector<Mask> masks_up_to_degree(Mask vars, int d);

}  // namespace dnfl
