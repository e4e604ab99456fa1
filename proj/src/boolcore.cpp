#include "dnfl/boolcore.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dnfl/rng.hpp"

namespace dnfl {

void check_dim(int n) {
  if (n < 1 || n > kMaxDim) {
    throw DimensionError("dimension must be in [1, 63], got " +
                         std::to_string(n));
  }
}

Point::Point(int dim, Mask b) : n(dim), bits(b) {
  check_dim(dim);
  if (b & ~full_mask(dim)) throw DimensionError("point has bits above n");
}

IndexMask::IndexMask(int dim, Mask b) : n(dim), bits(b) {
  check_dim(dim);
  if (b & ~full_mask(dim)) throw DimensionError("index mask has bits above n");
}

double project_unit(double v) {
  if (std::isnan(v)) throw std::invalid_argument("project_unit: NaN input");
  if (v > 1.0) return 1.0;
  if (v < -1.0) return -1.0;
  return v;
}

double BoolFunction::operator()(const Point& x) const {
  if (x.n != n) throw DimensionError("point dimension does not match function");
  return fn(x.bits);
}

std::vector<double> tabulate(const BoolFunction& f) {
  if (f.n < 1 || f.n > kMaxExactDim) {
    throw DimensionError("tabulate requires 1 <= n <= 24");
  }
  std::vector<double> table(std::size_t{1} << f.n);
  for (Mask x = 0; x < table.size(); ++x) table[x] = f.fn(x);
  return table;
}

Term::Term(Mask pos, Mask neg) : positives(pos), negatives(neg) {
  if (pos & neg) {
    throw std::invalid_argument("term contains a variable and its negation");
  }
}

DnfFormula::DnfFormula(int n, std::vector<Term> terms)
    : n_(n), terms_(std::move(terms)) {
  check_dim(n);
  if (terms_.empty()) throw std::invalid_argument("DNF needs at least one term");
  for (const auto& t : terms_) {
    if (t.variables() & ~full_mask(n)) {
      throw DimensionError("term uses a variable outside [0, n)");
    }
  }
}

bool DnfFormula::monotone() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return t.negatives == 0; });
}

double DnfFormula::operator()(Mask x) const {
  for (const auto& t : terms_) {
    if (t.satisfied(x)) return 1.0;
  }
  return -1.0;
}

BoolFunction DnfFormula::as_function() const {
  return {n_, [f = *this](Mask x) { return f(x); }};
}

std::string DnfFormula::to_string() const {
  std::ostringstream out;
  out << "n=" << n_ << "; ";
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    if (k) out << '|';
    bool first = true;
    for (int i = 0; i < n_; ++i) {
      const Mask bit = Mask{1} << i;
      if (!(terms_[k].variables() & bit)) continue;
      if (!first) out << '&';
      if (terms_[k].negatives & bit) out << '!';
      out << i;
      first = false;
    }
  }
  return out.str();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

int parse_int(std::string_view s, const char* what) {
  s = trim(s);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument(std::string("DNF parse: bad ") + what + " '" +
                                std::string(s) + "'");
  }
  return v;
}

}  // namespace

DnfFormula DnfFormula::parse(std::string_view text) {
  text = trim(text);
  const auto semi = text.find(';');
  if (semi == std::string_view::npos || text.substr(0, 2) != "n=") {
    throw std::invalid_argument("DNF parse: expected 'n=<int>; ...'");
  }
  const int n = parse_int(text.substr(2, semi - 2), "dimension");
  check_dim(n);
  std::string_view body = text.substr(semi + 1);
  std::vector<Term> terms;
  while (true) {
    const auto bar = body.find('|');
    std::string_view item = trim(body.substr(0, bar));
    Mask pos = 0, neg = 0;
    while (!item.empty()) {
      const auto amp = item.find('&');
      std::string_view lit = trim(item.substr(0, amp));
      bool negated = false;
      if (!lit.empty() && lit.front() == '!') {
        negated = true;
        lit.remove_prefix(1);
      }
      const int var = parse_int(lit, "variable index");
      if (var < 0 || var >= n) {
        throw DimensionError("DNF parse: variable index out of range");
      }
      const Mask bit = Mask{1} << var;
      if ((pos | neg) & bit) {
        throw std::invalid_argument("DNF parse: repeated variable in term");
      }
      (negated ? neg : pos) |= bit;
      if (amp == std::string_view::npos) break;
      item = item.substr(amp + 1);
    }
    terms.emplace_back(pos, neg);
    if (bar == std::string_view::npos) break;
    body = body.substr(bar + 1);
  }
  return DnfFormula(n, std::move(terms));
}

int eval_term(const Term& t, const Point& x) {
  if (t.variables() & ~full_mask(x.n)) {
    throw DimensionError("term does not fit the point dimension");
  }
  return t.satisfied(x.bits) ? 1 : 0;
}

int eval_dnf(const DnfFormula& f, const Point& x) {
  if (f.n() != x.n) throw DimensionError("DNF and point dimensions differ");
  return static_cast<int>(f(x.bits));
}

DnfFormula random_dnf(int n, int s, int max_len, bool monotone,
                      std::uint64_t seed) {
  check_dim(n);
  if (s < 1 || max_len < 1 || max_len > n) {
    throw std::invalid_argument("random_dnf: need s >= 1 and 1 <= max_len <= n");
  }
  Rng rng(seed);
  std::vector<int> vars(n);
  std::iota(vars.begin(), vars.end(), 0);
  std::uniform_int_distribution<int> len_dist(1, max_len);
  std::bernoulli_distribution coin(0.5);
  std::vector<Term> terms;
  terms.reserve(s);
  for (int k = 0; k < s; ++k) {
    const int len = len_dist(rng);
    // partial Fisher-Yates picks `len` distinct variables
    for (int j = 0; j < len; ++j) {
      std::uniform_int_distribution<int> pick(j, n - 1);
      std::swap(vars[j], vars[pick(rng)]);
    }
    Mask pos = 0, neg = 0;
    for (int j = 0; j < len; ++j) {
      const Mask bit = Mask{1} << vars[j];
      if (!monotone && coin(rng)) {
        neg |= bit;
      } else {
        pos |= bit;
      }
    }
    terms.emplace_back(pos, neg);
  }
  return DnfFormula(n, std::move(terms));
}

double TermThresholdFunction::linear_form(Mask x) const {
  double q = bias;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    q += weights[i] * (terms[i].satisfied(x) ? 1.0 : -1.0);
  }
  return q;
}

double TermThresholdFunction::total_weight() const {
  double w = std::abs(bias);
  for (double v : weights) w += std::abs(v);
  return w;
}

BoolFunction TermThresholdFunction::as_function() const {
  if (weights.size() != terms.size()) {
    throw std::invalid_argument("threshold function: weights/terms mismatch");
  }
  return {n, [h = *this](Mask x) { return h(x); }};
}

bool TermThresholdFunction::is_one_sign_representation() const {
  if (n < 1 || n > kMaxExactDim) throw DimensionError("n must be in [1, 24]");
  for (Mask x = 0; x < (Mask{1} << n); ++x) {
    if (std::abs(linear_form(x)) < 1.0) return false;
  }
  return true;
}

}  // namespace dnfl
