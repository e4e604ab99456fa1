#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dnfl {

/// Bit i of a mask refers to variable x_i (0-based).
using Mask = std::uint64_t;

inline constexpr int kMaxDim = 63;
/// Largest dimension for which dense 2^n tables are built.
inline constexpr int kMaxExactDim = 24;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An algorithm detected that one of its probabilistic sub-contracts failed
/// (or a caller-supplied precondition does not hold).
class ContractViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An oracle ran out of its configured query or sample budget.
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline int popcount(Mask m) { return __builtin_popcountll(m); }

inline Mask full_mask(int n) {
  return n >= 64 ? ~Mask{0} : ((Mask{1} << n) - 1);
}

void check_dim(int n);

/// A point of {-1,1}^n. Bit i set means x_i = +1.
struct Point {
  int n = 0;
  Mask bits = 0;

  Point() = default;
  Point(int dim, Mask b);

  int operator[](int i) const { return (bits >> i) & 1 ? 1 : -1; }
  friend bool operator==(const Point&, const Point&) = default;
};

/// A coefficient index a in {0,1}^n.
struct IndexMask {
  int n = 0;
  Mask bits = 0;

  IndexMask() = default;
  IndexMask(int dim, Mask b);

  int degree() const { return popcount(bits); }
  friend bool operator==(const IndexMask&, const IndexMask&) = default;
};

/// Parity chi_a(x) = prod_{i in a} x_i over raw masks.
inline double parity(Mask a, Mask x) {
  return (popcount(a & ~x) & 1) ? -1.0 : 1.0;
}

/// Clip to [-1, 1]. Throws on NaN.
double project_unit(double v);

/// Sign with sign(0) = +1.
inline int sign_of(double v) { return v < 0 ? -1 : 1; }

/// A real-valued function on {-1,1}^n, addressed by point bits.
struct BoolFunction {
  int n = 0;
  std::function<double(Mask)> fn;

  double operator()(Mask x) const { return fn(x); }
  double operator()(const Point& x) const;
};

/// Evaluate f on all 2^n points; index = point bits.
std::vector<double> tabulate(const BoolFunction& f);

struct Term {
  Mask positives = 0;
  Mask negatives = 0;

  Term() = default;
  Term(Mask pos, Mask neg);

  int length() const { return popcount(positives) + popcount(negatives); }
  Mask variables() const { return positives | negatives; }
  bool satisfied(Mask x) const {
    return (x & positives) == positives && (x & negatives) == 0;
  }
  friend bool operator==(const Term&, const Term&) = default;
};

class DnfFormula {
 public:
  DnfFormula(int n, std::vector<Term> terms);

  int n() const { return n_; }
  int size() const { return static_cast<int>(terms_.size()); }
  const std::vector<Term>& terms() const { return terms_; }
  bool monotone() const;

  double operator()(Mask x) const;
  BoolFunction as_function() const;

  /// Textual form, e.g. `n=4; 0&!2|1`.
  std::string to_string() const;
  static DnfFormula parse(std::string_view text);

  friend bool operator==(const DnfFormula&, const DnfFormula&) = default;

 private:
  int n_;
  std::vector<Term> terms_;
};

/// 1 iff every literal of t is satisfied by x.
int eval_term(const Term& t, const Point& x);
int eval_dnf(const DnfFormula& f, const Point& x);

/// Random s-term DNF; term lengths uniform in [1, max_len] over distinct
/// variables, literal polarity uniform unless `monotone`.
DnfFormula random_dnf(int n, int s, int max_len, bool monotone,
                      std::uint64_t seed);

/// sign(sum_i w_i u_i(x) + w_0) where u_i is the +-1 version of term i.
struct TermThresholdFunction {
  int n = 0;
  std::vector<Term> terms;
  std::vector<double> weights;
  double bias = 0.0;

  double linear_form(Mask x) const;
  double operator()(Mask x) const { return sign_of(linear_form(x)); }
  /// W_1^1(h) for this weight vector, |w_0| + sum |w_i|.
  double total_weight() const;
  BoolFunction as_function() const;
  /// |q(u(x))| >= 1 at every x in {-1,1}^n (n <= 24).
  bool is_one_sign_representation() const;
};

}  // namespace dnfl
