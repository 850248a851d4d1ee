#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "martinet/chart.hpp"
#include "martinet/rational.hpp"

namespace martinet {

using Multi = std::vector<int>;  // exponent vector, one entry per chart variable

int multi_degree(const Multi& m);

// Jet order used for exact polynomials (literals, shipped maps). Large enough
// that it never truncates anything we build, small enough to survive sums.
inline constexpr int kExactJet = 1 << 20;

// Multivariate polynomial over Q, reliable modulo terms of degree > jet_order.
// Stored terms never exceed the jet order and never have zero coefficients.
// Degree-decreasing operations (d/dx) lower the jet order by one, integration
// raises it, and products use the valuation-aware rule
//   jet(f*g) = min(jet(f) + val(g), jet(g) + val(f)).
class TruncatedPoly {
 public:
  TruncatedPoly() = default;

  static TruncatedPoly zero(const Chart& chart, int jet_order);
  static TruncatedPoly constant(const Chart& chart, const Rational& c, int jet_order);
  static TruncatedPoly variable(const Chart& chart, int var, int jet_order);
  static TruncatedPoly monomial(const Chart& chart, Multi exps, const Rational& c,
                                int jet_order);

  const Chart& chart() const { return chart_; }
  int jet_order() const { return jet_order_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Multi, Rational>& terms() const { return terms_; }

  Rational coeff(const Multi& exps) const;
  Rational at_zero() const;
  // Lowest total degree of a stored term; jet_order()+1 when zero (a zero jet
  // only certifies vanishing up to its order).
  int valuation() const;
  int degree() const;  // highest stored total degree, -1 when zero

  TruncatedPoly truncated(int new_jet_order) const;

  TruncatedPoly operator-() const;
  TruncatedPoly& operator+=(const TruncatedPoly& o);
  TruncatedPoly& operator-=(const TruncatedPoly& o);
  friend TruncatedPoly operator+(TruncatedPoly a, const TruncatedPoly& b) { return a += b; }
  friend TruncatedPoly operator-(TruncatedPoly a, const TruncatedPoly& b) { return a -= b; }
  friend TruncatedPoly operator*(const TruncatedPoly& a, const TruncatedPoly& b);
  friend TruncatedPoly operator*(const Rational& c, const TruncatedPoly& p);

  // Equality of stored data (chart and terms); jet orders are bookkeeping.
  bool operator==(const TruncatedPoly& o) const {
    return chart_ == o.chart_ && terms_ == o.terms_;
  }
  bool operator!=(const TruncatedPoly& o) const { return !(*this == o); }

  // Substitute images[i] for variable i; images live on a common chart and
  // must vanish at 0 so that truncation commutes with composition.
  TruncatedPoly compose(const std::vector<TruncatedPoly>& images) const;

  double evaluate(std::span<const double> point) const;
  Rational evaluate_exact(std::span<const Rational> point) const;

  RatVec gradient_at_zero() const;

  std::string to_string() const;

 private:
  void insert_term(Multi exps, Rational c);
  void drop_above_jet();

  Chart chart_;
  int jet_order_ = 0;
  std::map<Multi, Rational> terms_;
};

TruncatedPoly partial(const TruncatedPoly& p, int var);
// Antiderivative in `var` with zero constant of integration along var = 0.
TruncatedPoly formal_integral(const TruncatedPoly& p, int var);

TruncatedPoly homogeneous_part(const TruncatedPoly& p, int degree);
TruncatedPoly truncate_above_degree(const TruncatedPoly& p, int degree);

// Degree delta such that p(t^w1 x1, ..., t^wk xk) = t^delta p(x); nullopt when
// the stored terms are not concentrated on one weighted degree.
std::optional<long> quasi_homogeneous_degree(const TruncatedPoly& p,
                                             const std::vector<int>& weights);

// Multiplicative inverse of a unit (p(0) != 0) modulo the jet order.
// Multiplicative inverse of a unit, to jet_order (default: the argument's own
// jet). Exact non-constant units have no exact inverse, so a finite target
// order is required for them.
TruncatedPoly unit_inverse(const TruncatedPoly& p, int jet_order = -1);

// Exact quotient q with q*f == p as jets (graded greedy division by the
// lowest homogeneous part of f); nullopt when p is not divisible.
std::optional<TruncatedPoly> divide_exact(const TruncatedPoly& p, const TruncatedPoly& f);

// True when g = u*f for a unit u (then {f=0} and {g=0} agree as germ data).
bool is_unit_multiple(const TruncatedPoly& g, const TruncatedPoly& f);

}  // namespace martinet
