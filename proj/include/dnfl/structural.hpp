#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dnfl/boolcore.hpp"
#include "dnfl/dist.hpp"
#include "dnfl/spectrum.hpp"

namespace dnfl {

/// floor(log(w / eps) / log(2 / (2 - c))), clamped at 0. w is s for DNFs
/// and W_1^1(h) for term thresholds.
int bound_degree(double w, double eps, double c);

/// (2 - c)^(d/2).
double term_l1_factor(double c, int d);

/// {0,1} indicator of t expanded in the basis of `mu` (parity basis when
/// absent). Exact, 2^|t| coefficients.
SparsePolynomial term_polynomial(int n, const Term& t,
                                 const std::optional<ProductDistribution>& mu = {});

/// p = 2 sum_i t_i - 1, which 1-sign-represents f.
SparsePolynomial dnf_sign_polynomial(const DnfFormula& f,
                                     const std::optional<ProductDistribution>& mu = {});

struct TermL1 {
  double l1 = 0.0;
  double bound = 0.0;  // (2 - c)^(len/2)
  bool holds() const { return l1 <= bound + 1e-9; }
};

/// ||t_mu||_1 with c = mu.c_bound() unless given.
TermL1 term_mu_l1(const Term& t, const ProductDistribution& mu,
                  std::optional<double> c = {});

struct Truncation {
  SparsePolynomial poly;         // p'
  std::vector<int> dropped;      // indices of terms longer than d
  double l1 = 0.0;               // ||p'_mu(B_d)||_1
  double l1_bound = 0.0;
  double error = 0.0;            // E_mu[|p' - p|], exact
  double error_bound = 0.0;      // sum over dropped terms of 2|w_i|(1 - c/2)^(d+1)
  bool holds() const {
    return l1 <= l1_bound + 1e-9 && error <= error_bound + 1e-9;
  }
};

/// Terms longer than d removed from the sign polynomial. l1_bound is
/// 2 (2-c)^(d/2) s + 1.
Truncation truncated_dnf_polynomial(const DnfFormula& f,
                                    const ProductDistribution& mu, int d);

/// Each term longer than d replaced by the constant -1. l1_bound is
/// W (2 (2-c)^(d/2) + 1). Throws std::invalid_argument unless the weights
/// 1-sign-represent the threshold (n <= 24).
Truncation threshold_truncated_polynomial(const TermThresholdFunction& F,
                                          const ProductDistribution& mu, int d);

struct DnfBound {
  int s = 1;
  double c = 1.0;
  double eps = 0.1;
};
struct LtfBound {
  double w1 = 1.0;
  double c = 1.0;
  double eps = 0.1;
};
/// p 1-sign-represents f; p' (default p) any polynomial. Degree is p''s.
struct SignPolyBound {
  SparsePolynomial p;
  std::optional<SparsePolynomial> p_prime;
};
/// Uniform only: (2s + 1) ||f - g||_inf over the whole spectrum.
struct UniformDnfBound {
  int s = 1;
};

using BoundFamily = std::variant<DnfBound, LtfBound, SignPolyBound, UniformDnfBound>;

struct BoundReport {
  std::string family;
  int n = 0;
  double s = 0.0;     // s, or W_1 for the threshold family
  double c = 1.0;
  int d = 0;
  double eps = 0.0;
  double gap = 0.0;   // ||f_mu(B_d) - g_mu(B_d)||_inf
  double lhs = 0.0;   // E_mu[|f - g|]
  double rhs = 0.0;
  double slack = 0.0;
  bool passed() const { return slack >= -1e-9; }
};

/// Both sides computed exactly by enumeration (n <= 24).
BoundReport verify_error_bound(const BoolFunction& f, const BoolFunction& g,
                               const ProductDistribution& mu,
                               const BoundFamily& family);

std::string bound_csv_header();
std::string bound_csv_row(const BoundReport& r);

}  // namespace dnfl
