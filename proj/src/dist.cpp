#include "dnfl/dist.hpp"

#include <algorithm>
#include <cmath>

namespace dnfl {

ProductDistribution::ProductDistribution(std::vector<double> mu)
    : mu_(std::move(mu)) {
  check_dim(n());
  phi_plus_.resize(mu_.size());
  phi_minus_.resize(mu_.size());
  c_bound_ = 1.0;
  for (std::size_t i = 0; i < mu_.size(); ++i) {
    const double m = mu_[i];
    if (!(std::abs(m) < 1.0)) {
      throw std::invalid_argument("product distribution needs |mu_i| < 1");
    }
    const double sigma = std::sqrt(1.0 - m * m);
    phi_plus_[i] = (1.0 - m) / sigma;
    phi_minus_[i] = (-1.0 - m) / sigma;
    c_bound_ = std::min(c_bound_, 1.0 - std::abs(m));
  }
}

ProductDistribution ProductDistribution::uniform(int n) {
  check_dim(n);
  return ProductDistribution(std::vector<double>(n, 0.0));
}

bool ProductDistribution::is_uniform() const {
  return std::all_of(mu_.begin(), mu_.end(), [](double m) { return m == 0.0; });
}

double ProductDistribution::basis_sup_sq(Mask a) const {
  double b = 1.0;
  for (int i = 0; i < n(); ++i) {
    if ((a >> i) & 1) {
      const double m = std::abs(mu_[i]);
      b *= (1.0 + m) / (1.0 - m);
    }
  }
  return b;
}

Mask sample_bits(const ProductDistribution& mu, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Mask bits = 0;
  for (int i = 0; i < mu.n(); ++i) {
    if (u(rng) < (1.0 + mu.mu(i)) / 2.0) bits |= Mask{1} << i;
  }
  return bits;
}

Point sample_point(const ProductDistribution& mu, Rng& rng) {
  return Point(mu.n(), sample_bits(mu, rng));
}

double basis_value(const ProductDistribution& mu, Mask a, Mask x) {
  double v = 1.0;
  while (a) {
    const int i = __builtin_ctzll(a);
    v *= ((x >> i) & 1) ? mu.phi_plus(i) : mu.phi_minus(i);
    a &= a - 1;
  }
  return v;
}

double basis_eval(const ProductDistribution& mu, const IndexMask& a,
                  const Point& x) {
  if (a.n != mu.n() || x.n != mu.n()) {
    throw DimensionError("basis_eval: dimension mismatch");
  }
  return basis_value(mu, a.bits, x.bits);
}

double point_weight(const ProductDistribution& mu, Mask x) {
  double p = 1.0;
  for (int i = 0; i < mu.n(); ++i) {
    p *= ((x >> i) & 1) ? (1.0 + mu.mu(i)) / 2.0 : (1.0 - mu.mu(i)) / 2.0;
  }
  return p;
}

double point_probability(const ProductDistribution& mu, const Point& x) {
  if (x.n != mu.n()) throw DimensionError("point_probability: dimension mismatch");
  return point_weight(mu, x.bits);
}

std::vector<double> probability_table(const ProductDistribution& mu) {
  if (mu.n() > kMaxExactDim) throw DimensionError("probability_table: n > 24");
  std::vector<double> p(std::size_t{1} << mu.n(), 1.0);
  // doubling construction, one coordinate at a time
  std::size_t len = 1;
  for (int i = 0; i < mu.n(); ++i) {
    const double lo = (1.0 - mu.mu(i)) / 2.0, hi = (1.0 + mu.mu(i)) / 2.0;
    for (std::size_t x = 0; x < len; ++x) {
      p[x + len] = p[x] * hi;
      p[x] *= lo;
    }
    len <<= 1;
  }
  return p;
}

ProductDistribution perturb(std::span<const double> mu_bar, double c, Rng& rng) {
  if (!(c > 0.0 && c <= 0.5)) {
    throw std::invalid_argument("perturb: c must be in (0, 1/2]");
  }
  std::vector<double> mu(mu_bar.size());
  for (std::size_t i = 0; i < mu_bar.size(); ++i) {
    if (std::abs(mu_bar[i]) > 1.0 - 2.0 * c + 1e-12) {
      throw std::invalid_argument("perturb: mu_bar is not 2c-bounded");
    }
    std::uniform_real_distribution<double> u(mu_bar[i] - c, mu_bar[i] + c);
    mu[i] = u(rng);
  }
  return ProductDistribution(std::move(mu));
}

ProductDistribution estimate_distribution(std::span<const Mask> samples, int n) {
  check_dim(n);
  if (samples.empty()) throw std::invalid_argument("estimate_distribution: no samples");
  std::vector<double> mu(n, 0.0);
  for (Mask x : samples) {
    for (int i = 0; i < n; ++i) mu[i] += ((x >> i) & 1) ? 1.0 : -1.0;
  }
  const double lim = 1.0 - 1.0 / static_cast<double>(samples.size() + 1);
  for (double& m : mu) {
    m = std::clamp(m / static_cast<double>(samples.size()), -lim, lim);
  }
  return ProductDistribution(std::move(mu));
}

}  // namespace dnfl
