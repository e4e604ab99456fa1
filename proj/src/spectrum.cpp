#include "dnfl/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace dnfl {

SparseSpectrum::SparseSpectrum(int n, std::optional<ProductDistribution> mu)
    : n_(n), mu_(std::move(mu)) {
  check_dim(n);
  if (mu_ && mu_->n() != n) {
    throw DimensionError("spectrum basis dimension does not match n");
  }
}

bool SparseSpectrum::same_basis(const SparseSpectrum& other) const {
  return n_ == other.n_ && mu_ == other.mu_;
}

double SparseSpectrum::operator[](Mask a) const {
  auto it = entries_.find(a);
  return it == entries_.end() ? 0.0 : it->second;
}

void SparseSpectrum::set(Mask a, double v) {
  if (a & ~full_mask(n_)) throw DimensionError("mask has bits above n");
  if (v == 0.0) {
    entries_.erase(a);
  } else {
    entries_[a] = v;
  }
}

void SparseSpectrum::add(Mask a, double v) { set(a, (*this)[a] + v); }

double SparseSpectrum::basis_value(Mask a, Mask x) const {
  return mu_ ? dnfl::basis_value(*mu_, a, x) : parity(a, x);
}

double SparseSpectrum::evaluate(Mask x) const {
  double s = 0.0;
  for (const auto& [a, c] : entries_) s += c * basis_value(a, x);
  return s;
}

Mask SparseSpectrum::support_variables() const {
  Mask m = 0;
  for (const auto& [a, c] : entries_) m |= a;
  return m;
}

double eval_sparse_poly(const SparsePolynomial& p, const Point& x,
                        const ProductDistribution* mu) {
  if (x.n != p.n()) throw DimensionError("eval_sparse_poly: dimension mismatch");
  if (p.basis().has_value() != (mu != nullptr) ||
      (mu && !(*mu == *p.basis()))) {
    throw std::invalid_argument("eval_sparse_poly: basis and mu disagree");
  }
  return p.evaluate(x.bits);
}

namespace {

int log2_exact(std::size_t len) {
  if (len == 0 || (len & (len - 1))) {
    throw DimensionError("table length must be a power of two");
  }
  const int n = __builtin_ctzll(len);
  if (n < 1 || n > kMaxExactDim) throw DimensionError("table needs 1 <= n <= 24");
  return n;
}

}  // namespace

DenseSpectrum fwht(std::span<const double> truth_table) {
  const int n = log2_exact(truth_table.size());
  std::vector<double> v(truth_table.begin(), truth_table.end());
  // pair (x_i = -1, x_i = +1) -> (a_i = 0, a_i = 1): (u + v, v - u)
  for (std::size_t h = 1; h < v.size(); h <<= 1) {
    for (std::size_t i = 0; i < v.size(); i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double lo = v[j], hi = v[j + h];
        v[j] = lo + hi;
        v[j + h] = hi - lo;
      }
    }
  }
  const double scale = std::ldexp(1.0, -n);
  for (double& x : v) x *= scale;
  return {n, std::move(v)};
}

std::vector<double> inverse_fwht(const DenseSpectrum& spectrum) {
  std::vector<double> v = spectrum.values;
  log2_exact(v.size());
  for (std::size_t h = 1; h < v.size(); h <<= 1) {
    for (std::size_t i = 0; i < v.size(); i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double c0 = v[j], c1 = v[j + h];
        v[j] = c0 - c1;
        v[j + h] = c0 + c1;
      }
    }
  }
  return v;
}

std::vector<double> mu_transform_dense(std::vector<double> table,
                                       const ProductDistribution& mu) {
  const int n = log2_exact(table.size());
  if (n != mu.n()) throw DimensionError("mu_transform_dense: dimension mismatch");
  for (int i = 0; i < n; ++i) {
    const std::size_t h = std::size_t{1} << i;
    const double p_minus = (1.0 - mu.mu(i)) / 2.0;
    const double p_plus = (1.0 + mu.mu(i)) / 2.0;
    const double w_minus = p_minus * mu.phi_minus(i);
    const double w_plus = p_plus * mu.phi_plus(i);
    for (std::size_t k = 0; k < table.size(); k += h << 1) {
      for (std::size_t j = k; j < k + h; ++j) {
        const double u = table[j], v = table[j + h];
        table[j] = p_minus * u + p_plus * v;
        table[j + h] = w_minus * u + w_plus * v;
      }
    }
  }
  return table;
}

std::vector<double> inverse_mu_transform_dense(std::vector<double> coeffs,
                                               const ProductDistribution& mu) {
  const int n = log2_exact(coeffs.size());
  if (n != mu.n()) {
    throw DimensionError("inverse_mu_transform_dense: dimension mismatch");
  }
  for (int i = 0; i < n; ++i) {
    const std::size_t h = std::size_t{1} << i;
    for (std::size_t k = 0; k < coeffs.size(); k += h << 1) {
      for (std::size_t j = k; j < k + h; ++j) {
        const double c0 = coeffs[j], c1 = coeffs[j + h];
        coeffs[j] = c0 + c1 * mu.phi_minus(i);
        coeffs[j + h] = c0 + c1 * mu.phi_plus(i);
      }
    }
  }
  return coeffs;
}

SparseSpectrum exact_mu_transform_table(std::vector<double> table,
                                        const ProductDistribution& mu,
                                        std::optional<int> degree_cap) {
  const auto coeffs = mu_transform_dense(std::move(table), mu);
  SparseSpectrum out(mu.n(), mu);
  for (Mask a = 0; a < coeffs.size(); ++a) {
    if (degree_cap && popcount(a) > *degree_cap) continue;
    if (std::abs(coeffs[a]) >= kZeroDrop) out.set(a, coeffs[a]);
  }
  return out;
}

SparseSpectrum exact_mu_transform(const BoolFunction& f,
                                  const ProductDistribution& mu,
                                  std::optional<int> degree_cap) {
  if (f.n != mu.n()) throw DimensionError("exact_mu_transform: dimension mismatch");
  if (f.n > kMaxExactDim) throw DimensionError("exact_mu_transform: n > 24");
  return exact_mu_transform_table(tabulate(f), mu, degree_cap);
}

SparseSpectrum exact_uniform_transform(const BoolFunction& f,
                                       std::optional<int> degree_cap) {
  auto sparse = to_sparse(fwht(tabulate(f)));
  if (degree_cap) sparse = restrict(sparse, {.degree_cap = degree_cap});
  return sparse;
}

SparseSpectrum to_sparse(const DenseSpectrum& d, double drop) {
  SparseSpectrum out(d.n);
  for (Mask a = 0; a < d.values.size(); ++a) {
    if (std::abs(d.values[a]) >= drop && d.values[a] != 0.0) {
      out.set(a, d.values[a]);
    }
  }
  return out;
}

Norms norms(const SparseSpectrum& v) {
  Norms r;
  r.l0 = v.size();
  double sq = 0.0;
  for (const auto& [a, c] : v.entries()) {
    r.l1 += std::abs(c);
    sq += c * c;
    r.linf = std::max(r.linf, std::abs(c));
  }
  r.l2 = std::sqrt(sq);
  return r;
}

double diff_inf_norm(const SparseSpectrum& u, const SparseSpectrum& v,
                     std::optional<int> degree_cap) {
  if (!u.same_basis(v)) throw std::invalid_argument("diff_inf_norm: basis mismatch");
  double m = 0.0;
  auto scan = [&](const SparseSpectrum& a, const SparseSpectrum& b) {
    for (const auto& [mask, c] : a.entries()) {
      if (degree_cap && popcount(mask) > *degree_cap) continue;
      m = std::max(m, std::abs(c - b[mask]));
    }
  };
  scan(u, v);
  scan(v, u);
  return m;
}

SparseSpectrum restrict(const SparseSpectrum& v, const RestrictOptions& opts) {
  SparseSpectrum out(v.n(), v.basis());
  for (const auto& [a, c] : v.entries()) {
    if (opts.degree_cap && popcount(a) > *opts.degree_cap) continue;
    if (opts.within && (a & ~*opts.within)) continue;
    if (opts.must_include && !(a & *opts.must_include)) continue;
    out.set(a, c);
  }
  return out;
}

SparseSpectrum heavy_coefficients(const SparseSpectrum& v, double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("heavy_coefficients: theta <= 0");
  SparseSpectrum out(v.n(), v.basis());
  for (const auto& [a, c] : v.entries()) {
    if (std::abs(c) >= theta) out.set(a, c);
  }
  return out;
}

SparseSpectrum heavy_coefficients(const DenseSpectrum& v, double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("heavy_coefficients: theta <= 0");
  SparseSpectrum out(v.n);
  for (Mask a = 0; a < v.values.size(); ++a) {
    if (std::abs(v.values[a]) >= theta) out.set(a, v.values[a]);
  }
  return out;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_reals(std::span<const double> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_real(v[i]);
  }
  return s;
}

std::vector<double> parse_reals(std::string_view text) {
  std::vector<double> out;
  std::string buf(text);
  std::replace(buf.begin(), buf.end(), ',', ' ');
  std::istringstream in(buf);
  std::string tok;
  while (in >> tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) {
      throw std::invalid_argument("bad real '" + tok + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::string write_spectrum(const SparseSpectrum& v) {
  std::ostringstream out;
  out << "spectrum ";
  if (v.basis()) {
    out << "product n=" << v.n() << " mu=" << format_reals(v.basis()->mu());
  } else {
    out << "uniform n=" << v.n();
  }
  out << '\n';
  char buf[64];
  for (const auto& [a, c] : v.entries()) {
    std::snprintf(buf, sizeof buf, "%llx %.17g\n",
                  static_cast<unsigned long long>(a), c);
    out << buf;
  }
  return out.str();
}

SparseSpectrum read_spectrum(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty spectrum text");
  std::istringstream head(line);
  std::string magic, kind, ntok, mutok;
  head >> magic >> kind >> ntok;
  if (magic != "spectrum" || ntok.rfind("n=", 0) != 0) {
    throw std::invalid_argument("bad spectrum header: " + line);
  }
  const int n = std::stoi(ntok.substr(2));
  std::optional<ProductDistribution> mu;
  if (kind == "product") {
    head >> mutok;
    if (mutok.rfind("mu=", 0) != 0) throw std::invalid_argument("missing mu=");
    mu = ProductDistribution(parse_reals(mutok.substr(3)));
  } else if (kind != "uniform") {
    throw std::invalid_argument("unknown spectrum basis '" + kind + "'");
  }
  SparseSpectrum out(n, std::move(mu));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string hex, val;
    if (!(row >> hex >> val)) throw std::invalid_argument("bad spectrum line: " + line);
    char* end = nullptr;
    const Mask a = std::strtoull(hex.c_str(), &end, 16);
    if (*end) throw std::invalid_argument("bad mask '" + hex + "'");
    const double c = std::strtod(val.c_str(), &end);
    if (*end) throw std::invalid_argument("bad coefficient '" + val + "'");
    out.set(a, c);
  }
  return out;
}

}  // namespace dnfl
