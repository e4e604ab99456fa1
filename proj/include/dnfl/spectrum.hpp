#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dnfl/boolcore.hpp"
#include "dnfl/dist.hpp"

namespace dnfl {

/// Coefficients below this magnitude are dropped by exact transforms.
inline constexpr double kZeroDrop = 1e-12;

/// Succinct coefficient vector over the parity basis (no `mu`) or the
/// product basis phi_{mu,a}. Doubles as a sparse polynomial.
class SparseSpectrum {
 public:
  SparseSpectrum() = default;
  explicit SparseSpectrum(int n, std::optional<ProductDistribution> mu = {});

  int n() const { return n_; }
  const std::optional<ProductDistribution>& basis() const { return mu_; }
  bool is_uniform_basis() const { return !mu_.has_value(); }
  bool same_basis(const SparseSpectrum& other) const;

  const std::map<Mask, double>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  double operator[](Mask a) const;
  /// Stores v at a; v == 0 erases the entry.
  void set(Mask a, double v);
  void add(Mask a, double v);

  /// Basis function value at x in this spectrum's basis.
  double basis_value(Mask a, Mask x) const;
  /// sum_a p(a) * basis_a(x).
  double evaluate(Mask x) const;
  /// Union of all stored masks.
  Mask support_variables() const;

  friend bool operator==(const SparseSpectrum&, const SparseSpectrum&) = default;

 private:
  int n_ = 0;
  std::optional<ProductDistribution> mu_;
  std::map<Mask, double> entries_;
};

using SparsePolynomial = SparseSpectrum;

/// Evaluates p at x. `mu` must be present exactly when p is in a product
/// basis, and must match it.
double eval_sparse_poly(const SparsePolynomial& p, const Point& x,
                        const ProductDistribution* mu = nullptr);

struct DenseSpectrum {
  int n = 0;
  std::vector<double> values;  // indexed by mask, length 2^n

  double operator[](Mask a) const { return values[a]; }
};

/// Uniform-basis transform of a 2^n truth table, O(n 2^n).
DenseSpectrum fwht(std::span<const double> truth_table);
std::vector<double> inverse_fwht(const DenseSpectrum& spectrum);

/// All 2^n mu-coefficients E_mu[f phi_{mu,a}] of a table, O(n 2^n).
std::vector<double> mu_transform_dense(std::vector<double> table,
                                       const ProductDistribution& mu);
/// Inverse of mu_transform_dense: f(x) = sum_a c(a) phi_{mu,a}(x).
std::vector<double> inverse_mu_transform_dense(std::vector<double> coeffs,
                                               const ProductDistribution& mu);

/// Exact mu-spectrum in the product basis of `mu`; entries below kZeroDrop
/// are dropped.
SparseSpectrum exact_mu_transform(const BoolFunction& f,
                                  const ProductDistribution& mu,
                                  std::optional<int> degree_cap = {});
SparseSpectrum exact_mu_transform_table(std::vector<double> table,
                                        const ProductDistribution& mu,
                                        std::optional<int> degree_cap = {});
SparseSpectrum exact_uniform_transform(const BoolFunction& f,
                                       std::optional<int> degree_cap = {});

SparseSpectrum to_sparse(const DenseSpectrum& d, double drop = kZeroDrop);

struct Norms {
  std::size_t l0 = 0;
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

Norms norms(const SparseSpectrum& v);

/// max_a |u(a) - v(a)| over the union of supports, optionally only masks of
/// degree <= degree_cap. Absent entries read as 0.
double diff_inf_norm(const SparseSpectrum& u, const SparseSpectrum& v,
                     std::optional<int> degree_cap = {});

struct RestrictOptions {
  std::optional<int> degree_cap = std::nullopt;
  std::optional<Mask> within = std::nullopt;        // keep a with a subset of `within`
  std::optional<Mask> must_include = std::nullopt;  // keep a with a & must_include != 0
};

SparseSpectrum restrict(const SparseSpectrum& v, const RestrictOptions& opts);

SparseSpectrum heavy_coefficients(const SparseSpectrum& v, double theta);
SparseSpectrum heavy_coefficients(const DenseSpectrum& v, double theta);

/// Text form: header `spectrum uniform n=<n>` or
/// `spectrum product n=<n> mu=<m0>,<m1>,...`, then one `mask-hex value` line
/// per entry in mask order. Values use 17 significant digits.
std::string write_spectrum(const SparseSpectrum& v);
SparseSpectrum read_spectrum(std::string_view text);

/// Comma-separated `%.17g` list.
std::string format_reals(std::span<const double> v);
std::vector<double> parse_reals(std::string_view text);
std::string format_real(double v);

}  // namespace dnfl
