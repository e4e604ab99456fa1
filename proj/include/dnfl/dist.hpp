#pragma once

#include <span>
#include <vector>

#include "dnfl/boolcore.hpp"
#include "dnfl/rng.hpp"

namespace dnfl {

/// Product distribution D_mu on {-1,1}^n with E[x_i] = mu_i.
class ProductDistribution {
 public:
  ProductDistribution(std::vector<double> mu);
  static ProductDistribution uniform(int n);

  int n() const { return static_cast<int>(mu_.size()); }
  const std::vector<double>& mu() const { return mu_; }
  double mu(int i) const { return mu_[i]; }
  /// Largest c with every mu_i in [-1+c, 1-c].
  double c_bound() const { return c_bound_; }
  bool is_uniform() const;

  /// (x_i - mu_i) / sqrt(1 - mu_i^2) for x_i = +1 and x_i = -1.
  double phi_plus(int i) const { return phi_plus_[i]; }
  double phi_minus(int i) const { return phi_minus_[i]; }
  /// sup_x |phi_{mu,a}(x)|^2.
  double basis_sup_sq(Mask a) const;

  friend bool operator==(const ProductDistribution& a,
                         const ProductDistribution& b) {
    return a.mu_ == b.mu_;
  }

 private:
  std::vector<double> mu_;
  std::vector<double> phi_plus_;
  std::vector<double> phi_minus_;
  double c_bound_ = 1.0;
};

Point sample_point(const ProductDistribution& mu, Rng& rng);
/// Raw-mask version used in hot loops.
Mask sample_bits(const ProductDistribution& mu, Rng& rng);

/// phi_{mu,a}(x) = prod_{i in a} (x_i - mu_i) / sqrt(1 - mu_i^2).
double basis_eval(const ProductDistribution& mu, const IndexMask& a,
                  const Point& x);
double basis_value(const ProductDistribution& mu, Mask a, Mask x);

/// prod_i (1 + mu_i x_i) / 2.
double point_probability(const ProductDistribution& mu, const Point& x);
double point_weight(const ProductDistribution& mu, Mask x);

/// All 2^n point probabilities (n <= 24).
std::vector<double> probability_table(const ProductDistribution& mu);

/// mu_i uniform in [mu_bar_i - c, mu_bar_i + c]; mu_bar must be 2c-bounded.
ProductDistribution perturb(std::span<const double> mu_bar, double c, Rng& rng);

/// Empirical coordinate means from `samples` points, clamped strictly
/// inside (-1, 1).
ProductDistribution estimate_distribution(std::span<const Mask> samples, int n);

}  // namespace dnfl
