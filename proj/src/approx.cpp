#include "dnfl/approx.hpp"

#include <cmath>
#include <sstream>

#include "dnfl/rng.hpp"

namespace dnfl {

ClippedChain::ClippedChain(int n, std::optional<ProductDistribution> basis)
    : n_(n), basis_(std::move(basis)) {
  check_dim(n);
}

double ClippedChain::evaluate(Mask x) const {
  double h = 0.0;
  for (const auto& [a, c] : updates_) {
    const double phi = basis_ ? basis_value(*basis_, a, x) : parity(a, x);
    h = project_unit(h + c * phi);
  }
  return h;
}

BoolFunction ClippedChain::as_function() const {
  return {n_, [c = *this](Mask x) { return c.evaluate(x); }};
}

ClippedChain ClippedChain::prefix(std::size_t t) const {
  ClippedChain out(n_, basis_);
  for (std::size_t k = 0; k < t && k < updates_.size(); ++k) {
    out.append(updates_[k].first, updates_[k].second);
  }
  return out;
}

ProperChain::ProperChain(int n, std::optional<ProductDistribution> basis,
                         double gamma)
    : n_(n), basis_(std::move(basis)), gamma_(gamma) {
  check_dim(n);
  if (!(gamma > 0.0)) throw std::invalid_argument("proper chain: gamma <= 0");
}

void ProperChain::append(Mask a, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("step sign must be +-1");
  steps_.emplace_back(a, sign);
  auto& w = weights_[a];
  w += sign;
  if (w == 0) weights_.erase(a);
}

std::int64_t ProperChain::integer_l1() const {
  std::int64_t s = 0;
  for (const auto& [a, w] : weights_) s += w < 0 ? -w : w;
  return s;
}

SparsePolynomial ProperChain::gprime() const {
  SparsePolynomial p(n_, basis_);
  for (const auto& [a, w] : weights_) p.set(a, gamma_ * static_cast<double>(w));
  return p;
}

double ProperChain::gprime_value(Mask x) const {
  double s = 0.0;
  for (const auto& [a, w] : weights_) {
    const double phi = basis_ ? basis_value(*basis_, a, x) : parity(a, x);
    s += static_cast<double>(w) * phi;
  }
  return gamma_ * s;
}

BoolFunction ProperChain::as_function() const {
  return {n_, [c = *this](Mask x) { return c.evaluate(x); }};
}

ProperChain ProperChain::prefix(std::size_t t) const {
  ProperChain out(n_, basis_, gamma_);
  for (std::size_t k = 0; k < t && k < steps_.size(); ++k) {
    out.append(steps_[k].first, steps_[k].second);
  }
  return out;
}

std::uint64_t approx_step_cap(double gamma) {
  return static_cast<std::uint64_t>(std::ceil(4.0 / (7.0 * gamma * gamma)));
}

std::uint64_t proper_step_cap(double gamma) {
  return static_cast<std::uint64_t>(std::ceil(1.0 / (2.0 * gamma * gamma)));
}

namespace {

/// The chain only ever touches variables in the target's support, so its
/// values live on that subcube and its spectrum vanishes outside it.
struct Subcube {
  Mask vars = 0;
  std::vector<int> idx;

  explicit Subcube(Mask v) : vars(v) {
    for (int i = 0; i < 64; ++i) {
      if ((v >> i) & 1) idx.push_back(i);
    }
  }
  int m() const { return static_cast<int>(idx.size()); }
  Mask compress(Mask a) const {
    Mask c = 0;
    for (std::size_t j = 0; j < idx.size(); ++j) c |= ((a >> idx[j]) & 1) << j;
    return c;
  }
  Mask expand(Mask c) const {
    Mask a = 0;
    for (std::size_t j = 0; j < idx.size(); ++j) a |= ((c >> j) & 1) << idx[j];
    return a;
  }
};

class Construction {
 public:
  Construction(const SparseSpectrum& target,
               const std::optional<ProductDistribution>& basis,
               const ConstructParams& p, bool proper)
      : n_(target.n()),
        basis_(basis),
        p_(p),
        proper_(proper),
        target_(restrict(target, {.degree_cap = p.degree})),
        cube_(target_.support_variables() ? target_.support_variables() : Mask{1}) {
    if (!(p.gamma > 0.0 && p.gamma < 1.0)) {
      throw std::invalid_argument("construction: gamma must be in (0, 1)");
    }
    if (!(p.delta > 0.0 && p.delta < 1.0)) {
      throw std::invalid_argument("construction: delta must be in (0, 1)");
    }
    if (p.degree < 0) throw std::invalid_argument("construction: negative degree");
    if (cube_.m() > kMaxExactDim) {
      throw DimensionError("construction: target touches more than 24 variables");
    }
    std::vector<double> sub_mu(cube_.m(), 0.0);
    if (basis_) {
      for (int j = 0; j < cube_.m(); ++j) sub_mu[j] = basis_->mu(cube_.idx[j]);
    }
    sub_mu_ = ProductDistribution(std::move(sub_mu));
    const std::size_t size = std::size_t{1} << cube_.m();
    g_.assign(size, 0.0);
    gp_.assign(size, 0.0);
    target_dense_.assign(size, 0.0);
    for (const auto& [a, c] : target_.entries()) target_dense_[cube_.compress(a)] = c;
    trace_.step_cap = proper ? proper_step_cap(p.gamma) : approx_step_cap(p.gamma);
    trace_.active_variables = cube_.vars;
  }

  template <class OnUpdate>
  ConstructTrace run(OnUpdate&& on_update) {
    const double stop = 3.5 * p_.gamma;
    for (std::uint64_t t = 0;; ++t) {
      const auto violation = find_violation(t, stop);
      if (!violation) break;
      if (t >= trace_.step_cap) {
        throw ContractViolation(
            "construction exceeded its step cap of " +
            std::to_string(trace_.step_cap) +
            "; the coefficient backend or the target accuracy contract failed");
      }
      auto [a, estimate] = *violation;
      const double diff = target_[a] - estimate;
      const double update =
          proper_ ? (diff < 0 ? -p_.gamma : p_.gamma) : diff;
      apply(cube_.compress(a), update);
      trace_.steps.push_back({a, target_[a], estimate, update});
      on_update(a, update);
    }
    return trace_;
  }

 private:
  double phi(Mask c, Mask x) const {
    return basis_ ? basis_value(sub_mu_, c, x) : parity(c, x);
  }

  void apply(Mask c, double update) {
    for (Mask x = 0; x < g_.size(); ++x) {
      if (proper_) {
        gp_[x] += update * phi(c, x);
        g_[x] = project_unit(gp_[x]);
      } else {
        g_[x] = project_unit(g_[x] + update * phi(c, x));
      }
    }
  }

  /// First mask (numeric order) whose estimated gap exceeds `stop`.
  std::optional<std::pair<Mask, double>> find_violation(std::uint64_t t,
                                                        double stop) {
    std::optional<std::pair<Mask, double>> first;
    double gap = 0.0;
    auto consider = [&](Mask a, double estimate) {
      const double d = std::abs(estimate - target_[a]);
      gap = std::max(gap, d);
      if (d > stop && !first) first = {a, estimate};
    };
    if (p_.backend == Backend::exact) {
      const auto coeffs = basis_ ? mu_transform_dense(g_, sub_mu_) : fwht(g_).values;
      for (Mask c = 0; c < coeffs.size(); ++c) {
        if (popcount(c) > p_.degree) continue;
        consider(cube_.expand(c), coeffs[c]);
      }
    } else {
      BoolFunction chain{n_, [this](Mask x) { return g_[cube_.compress(x)]; }};
      MembershipOracle mq(chain);
      RecoveryParams rp;
      rp.theta = p_.gamma / 2.0;
      rp.delta = p_.delta / static_cast<double>(trace_.step_cap);
      rp.degree_cap = p_.degree;
      rp.variable_set = cube_.vars;
      rp.backend = Backend::sampled;
      rp.seed = split_seed(p_.seed, t);
      const auto est = basis_ ? ekm_product(mq, *basis_, rp) : km_uniform(mq, rp);
      trace_.oracle_queries += est.report.queries;
      std::map<Mask, double> merged;
      for (const auto& [a, c] : target_.entries()) merged[a] = 0.0;
      for (const auto& [a, c] : est.spectrum.entries()) {
        if (popcount(a) <= p_.degree) merged[a] = c;
      }
      for (const auto& [a, c] : merged) consider(a, c);
    }
    trace_.final_gap = gap;
    return first;
  }

  int n_;
  std::optional<ProductDistribution> basis_;
  ConstructParams p_;
  bool proper_;
  SparseSpectrum target_;
  Subcube cube_;
  ProductDistribution sub_mu_ = ProductDistribution::uniform(1);
  std::vector<double> g_, gp_, target_dense_;
  ConstructTrace trace_;
};

void check_target_basis(const SparseSpectrum& target,
                        const std::optional<ProductDistribution>& basis) {
  if (target.basis() != basis) {
    throw std::invalid_argument("construction: target basis does not match");
  }
}

}  // namespace

ApproxResult ptf_approx(const SparseSpectrum& target, const ConstructParams& p) {
  check_target_basis(target, std::nullopt);
  ApproxResult r{ClippedChain(target.n(), std::nullopt), {}};
  Construction run(target, std::nullopt, p, false);
  r.trace = run.run([&](Mask a, double c) { r.chain.append(a, c); });
  return r;
}

ApproxResult ptf_approx_prod(const SparseSpectrum& target,
                             const ProductDistribution& mu,
                             const ConstructParams& p) {
  check_target_basis(target, mu);
  ApproxResult r{ClippedChain(target.n(), mu), {}};
  Construction run(target, mu, p, false);
  r.trace = run.run([&](Mask a, double c) { r.chain.append(a, c); });
  return r;
}

ProperResult ptf_construct_prod(const SparseSpectrum& target,
                                const ProductDistribution& mu,
                                const ConstructParams& p) {
  check_target_basis(target, mu);
  ProperResult r{ProperChain(target.n(), mu, p.gamma), {}};
  Construction run(target, mu, p, true);
  r.trace = run.run([&](Mask a, double c) { r.chain.append(a, c < 0 ? -1 : 1); });
  return r;
}

double potential(const BoolFunction& f, const ProperChain& chain,
                 const ProductDistribution& mu) {
  if (f.n != chain.n() || mu.n() != f.n) {
    throw DimensionError("potential: dimension mismatch");
  }
  const auto table = tabulate(f);
  const auto prob = probability_table(mu);
  double e = 0.0;
  for (Mask x = 0; x < table.size(); ++x) {
    const double gp = chain.gprime_value(x);
    const double g = project_unit(gp);
    e += prob[x] * (table[x] - g) * (table[x] - 2.0 * gp + g);
  }
  return e;
}

namespace {

std::string basis_header(int n, const std::optional<ProductDistribution>& basis) {
  std::string s = basis ? "product n=" : "uniform n=";
  s += std::to_string(n);
  if (basis) s += " mu=" + format_reals(basis->mu());
  return s;
}

void write_update(std::ostringstream& out, Mask a, double c) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%llx %.17g\n", static_cast<unsigned long long>(a), c);
  out << buf;
}

}  // namespace

std::string write_chain(const ClippedChain& c) {
  std::ostringstream out;
  out << "chain clipped " << basis_header(c.n(), c.basis()) << '\n';
  for (const auto& [a, v] : c.updates()) write_update(out, a, v);
  return out.str();
}

std::string write_chain(const ProperChain& c) {
  std::ostringstream out;
  out << "chain proper " << basis_header(c.n(), c.basis())
      << " gamma=" << format_real(c.gamma()) << '\n';
  for (const auto& [a, s] : c.steps()) write_update(out, a, s * c.gamma());
  return out.str();
}

std::variant<ClippedChain, ProperChain> read_chain(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty chain text");
  std::istringstream head(line);
  std::string magic, kind, basis_kind, tok;
  head >> magic >> kind >> basis_kind;
  if (magic != "chain" || (kind != "clipped" && kind != "proper")) {
    throw std::invalid_argument("bad chain header: " + line);
  }
  int n = 0;
  std::optional<ProductDistribution> basis;
  double gamma = 0.0;
  while (head >> tok) {
    if (tok.rfind("n=", 0) == 0) {
      n = std::stoi(tok.substr(2));
    } else if (tok.rfind("mu=", 0) == 0) {
      basis = ProductDistribution(parse_reals(tok.substr(3)));
    } else if (tok.rfind("gamma=", 0) == 0) {
      gamma = parse_reals(tok.substr(6)).at(0);
    } else {
      throw std::invalid_argument("bad chain header field '" + tok + "'");
    }
  }
  if ((basis_kind == "product") != basis.has_value()) {
    throw std::invalid_argument("chain header basis/mu mismatch");
  }
  std::vector<std::pair<Mask, double>> updates;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string hex, val;
    if (!(row >> hex >> val)) throw std::invalid_argument("bad chain line: " + line);
    updates.emplace_back(std::stoull(hex, nullptr, 16), parse_reals(val).at(0));
  }
  if (kind == "clipped") {
    ClippedChain c(n, basis);
    for (const auto& [a, v] : updates) c.append(a, v);
    return c;
  }
  ProperChain c(n, basis, gamma);
  for (const auto& [a, v] : updates) c.append(a, v < 0 ? -1 : 1);
  return c;
}

}  // namespace dnfl
