#include "dnfl/structural.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace dnfl {

int bound_degree(double w, double eps, double c) {
  if (!(eps > 0.0) || !(w > 0.0)) throw std::invalid_argument("bound_degree: w, eps > 0");
  if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("bound_degree: c in (0, 1]");
  const double r = std::log(w / eps) / std::log(2.0 / (2.0 - c));
  // guards against log(8)/log(2) = 2.9999999999999996
  return std::max(0, static_cast<int>(std::floor(r + 1e-9)));
}

double term_l1_factor(double c, int d) { return std::pow(2.0 - c, d / 2.0); }

SparsePolynomial term_polynomial(int n, const Term& t,
                                 const std::optional<ProductDistribution>& mu) {
  SparsePolynomial out(n, mu);
  // (1 +- x_j)/2 = (1 +- mu_j)/2 +- sqrt(1 - mu_j^2)/2 * phi_j
  std::vector<int> vars;
  std::vector<double> c0, c1;
  for (int j = 0; j < n; ++j) {
    if (!((t.variables() >> j) & 1)) continue;
    const double m = mu ? mu->mu(j) : 0.0;
    const double s = (t.positives >> j) & 1 ? 1.0 : -1.0;
    vars.push_back(j);
    c0.push_back((1.0 + s * m) / 2.0);
    c1.push_back(s * std::sqrt(1.0 - m * m) / 2.0);
  }
  const std::size_t k = vars.size();
  for (Mask sub = 0; sub < (Mask{1} << k); ++sub) {
    double v = 1.0;
    Mask a = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if ((sub >> j) & 1) {
        v *= c1[j];
        a |= Mask{1} << vars[j];
      } else {
        v *= c0[j];
      }
    }
    out.add(a, v);
  }
  return out;
}

namespace {

SparsePolynomial sum_terms(int n, const std::vector<Term>& terms,
                           const std::vector<double>& weights, double constant,
                           const std::optional<ProductDistribution>& mu) {
  SparsePolynomial p(n, mu);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto ti = term_polynomial(n, terms[i], mu);
    for (const auto& [a, v] : ti.entries()) {
      p.add(a, weights[i] * v);
    }
  }
  p.add(0, constant);
  return p;
}

/// Values of p on every point, through the inverse dense transform.
std::vector<double> poly_table(const SparsePolynomial& p) {
  if (p.n() > kMaxExactDim) throw DimensionError("polynomial table needs n <= 24");
  std::vector<double> coeffs(std::size_t{1} << p.n(), 0.0);
  for (const auto& [a, v] : p.entries()) coeffs[a] = v;
  if (p.basis()) return inverse_mu_transform_dense(std::move(coeffs), *p.basis());
  return inverse_fwht({p.n(), std::move(coeffs)});
}

double l1_upto(const std::vector<double>& coeffs, int d) {
  double s = 0.0;
  for (Mask a = 0; a < coeffs.size(); ++a) {
    if (popcount(a) <= d) s += std::abs(coeffs[a]);
  }
  return s;
}

double l1_upto(const SparsePolynomial& p, int d) {
  double s = 0.0;
  for (const auto& [a, v] : p.entries()) {
    if (popcount(a) <= d) s += std::abs(v);
  }
  return s;
}

double expect_abs_diff(const std::vector<double>& u, const std::vector<double>& v,
                       const std::vector<double>& prob) {
  double e = 0.0;
  for (std::size_t x = 0; x < u.size(); ++x) e += prob[x] * std::abs(u[x] - v[x]);
  return e;
}

int poly_degree(const SparsePolynomial& p) {
  int d = 0;
  for (const auto& [a, v] : p.entries()) d = std::max(d, popcount(a));
  return d;
}

}  // namespace

SparsePolynomial dnf_sign_polynomial(const DnfFormula& f,
                                     const std::optional<ProductDistribution>& mu) {
  return sum_terms(f.n(), f.terms(), std::vector<double>(f.terms().size(), 2.0),
                   -1.0, mu);
}

TermL1 term_mu_l1(const Term& t, const ProductDistribution& mu,
                  std::optional<double> c) {
  TermL1 r;
  r.l1 = norms(term_polynomial(mu.n(), t, mu)).l1;
  r.bound = term_l1_factor(c.value_or(mu.c_bound()), t.length());
  return r;
}

Truncation truncated_dnf_polynomial(const DnfFormula& f,
                                    const ProductDistribution& mu, int d) {
  const double c = mu.c_bound();
  std::vector<Term> kept;
  Truncation r;
  for (int i = 0; i < f.size(); ++i) {
    if (f.terms()[i].length() > d) {
      r.dropped.push_back(i);
    } else {
      kept.push_back(f.terms()[i]);
    }
  }
  r.poly = sum_terms(f.n(), kept, std::vector<double>(kept.size(), 2.0), -1.0, mu);
  r.l1 = l1_upto(r.poly, d);
  r.l1_bound = 2.0 * term_l1_factor(c, d) * f.size() + 1.0;
  const auto full = dnf_sign_polynomial(f, mu);
  r.error = expect_abs_diff(poly_table(r.poly), poly_table(full), probability_table(mu));
  r.error_bound = 2.0 * static_cast<double>(r.dropped.size()) *
                  std::pow(1.0 - c / 2.0, d + 1);
  return r;
}

Truncation threshold_truncated_polynomial(const TermThresholdFunction& F,
                                          const ProductDistribution& mu, int d) {
  if (F.weights.size() != F.terms.size()) {
    throw std::invalid_argument("threshold: one weight per term required");
  }
  if (!F.is_one_sign_representation()) {
    throw std::invalid_argument("threshold: weights do not 1-sign-represent h");
  }
  const double c = mu.c_bound();
  // u_i = 2 t_i - 1
  std::vector<Term> kept;
  std::vector<double> kept_w, all_w;
  double constant = F.bias, full_constant = F.bias, dropped_w = 0.0;
  Truncation r;
  for (std::size_t i = 0; i < F.terms.size(); ++i) {
    const double w = F.weights[i];
    all_w.push_back(2.0 * w);
    full_constant -= w;
    if (F.terms[i].length() > d) {
      r.dropped.push_back(static_cast<int>(i));
      constant -= w;
      dropped_w += std::abs(w);
    } else {
      kept.push_back(F.terms[i]);
      kept_w.push_back(2.0 * w);
      constant -= w;
    }
  }
  r.poly = sum_terms(F.n, kept, kept_w, constant, mu);
  r.l1 = l1_upto(r.poly, d);
  r.l1_bound = F.total_weight() * (2.0 * term_l1_factor(c, d) + 1.0);
  const auto full = sum_terms(F.n, F.terms, all_w, full_constant, mu);
  r.error = expect_abs_diff(poly_table(r.poly), poly_table(full), probability_table(mu));
  r.error_bound = 2.0 * dropped_w * std::pow(1.0 - c / 2.0, d + 1);
  return r;
}

namespace {

/// max |f_mu(a) - g_mu(a)| over a with popcount(a) <= d.
double spectral_gap(const std::vector<double>& f, const std::vector<double>& g,
                    const ProductDistribution& mu, int d) {
  std::vector<double> diff(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) diff[x] = f[x] - g[x];
  const auto coeffs = mu_transform_dense(std::move(diff), mu);
  double m = 0.0;
  for (Mask a = 0; a < coeffs.size(); ++a) {
    if (popcount(a) <= d) m = std::max(m, std::abs(coeffs[a]));
  }
  return m;
}

}  // namespace

BoundReport verify_error_bound(const BoolFunction& f, const BoolFunction& g,
                               const ProductDistribution& mu,
                               const BoundFamily& family) {
  if (f.n != g.n || f.n != mu.n()) throw DimensionError("verify_error_bound: dimension mismatch");
  if (f.n > kMaxExactDim) throw DimensionError("verify_error_bound: n > 24");
  const int n = f.n;
  const auto ft = tabulate(f);
  const auto gt = tabulate(g);
  const auto prob = probability_table(mu);

  BoundReport r;
  r.n = n;
  r.lhs = expect_abs_diff(ft, gt, prob);
  if (const auto* b = std::get_if<DnfBound>(&family)) {
    r.family = "dnf";
    r.s = b->s;
    r.c = b->c;
    r.eps = b->eps;
    r.d = bound_degree(b->s, b->eps, b->c);
    r.gap = spectral_gap(ft, gt, mu, r.d);
    r.rhs = (2.0 * term_l1_factor(b->c, r.d) * b->s + 1.0) * r.gap + 4.0 * b->eps;
  } else if (const auto* b = std::get_if<LtfBound>(&family)) {
    r.family = "ltf";
    r.s = b->w1;
    r.c = b->c;
    r.eps = b->eps;
    r.d = bound_degree(b->w1, b->eps, b->c);
    r.gap = spectral_gap(ft, gt, mu, r.d);
    r.rhs = (2.0 * term_l1_factor(b->c, r.d) + 1.0) * b->w1 * r.gap + 4.0 * b->eps;
  } else if (const auto* b = std::get_if<SignPolyBound>(&family)) {
    r.family = b->p_prime ? "sign-poly-approx" : "sign-poly";
    r.c = mu.c_bound();
    const auto pt = poly_table(b->p);
    for (std::size_t x = 0; x < pt.size(); ++x) {
      if (std::abs(pt[x]) < 1.0 - 1e-9 || sign_of(pt[x]) != sign_of(ft[x])) {
        throw std::invalid_argument("sign-poly: p does not 1-sign-represent f");
      }
    }
    const auto& pp = b->p_prime ? *b->p_prime : b->p;
    const auto ppt = poly_table(pp);
    r.d = poly_degree(pp);
    r.gap = spectral_gap(ft, gt, mu, r.d);
    const double l1 = l1_upto(mu_transform_dense(ppt, mu), r.d);
    r.rhs = r.gap * l1 + 2.0 * expect_abs_diff(ppt, pt, prob);
  } else {
    const auto& u = std::get<UniformDnfBound>(family);
    if (!mu.is_uniform()) throw std::invalid_argument("uniform-dnf bound needs mu = 0");
    r.family = "uniform-dnf";
    r.s = u.s;
    r.d = n;
    r.gap = spectral_gap(ft, gt, mu, n);
    r.rhs = (2.0 * u.s + 1.0) * r.gap;
  }
  r.slack = r.rhs - r.lhs;
  return r;
}

std::string bound_csv_header() { return "family,n,s,c,d,eps,gap,lhs,rhs,slack,pass"; }

std::string bound_csv_row(const BoundReport& r) {
  char buf[320];
  std::snprintf(buf, sizeof buf, "%s,%d,%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%d",
                r.family.c_str(), r.n, r.s, r.c, r.d, r.eps, r.gap, r.lhs, r.rhs,
                r.slack, r.passed() ? 1 : 0);
  return buf;
}

}  // namespace dnfl
