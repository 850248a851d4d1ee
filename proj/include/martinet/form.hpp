#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "martinet/poly.hpp"

namespace martinet {

using Idx = std::vector<int>;  // strictly increasing variable indices

// Sorts idx in place, returns the permutation sign, or 0 on a repeated index.
int sort_index_sign(Idx& idx);

// Differential form with TruncatedPoly coefficients, keyed by increasing index
// tuples. jet_order() is the reliability of the whole form: the minimum jet
// ever contributed, including coefficients that later cancelled to zero.
class DiffForm {
 public:
  DiffForm() = default;
  static DiffForm zero(const Chart& chart, int degree, int jet_order);
  static DiffForm from_poly(const TruncatedPoly& p);

  // c * dx_{idx[0]} ^ ... ^ dx_{idx[k-1]}; idx may be unsorted (sign folded in).
  static DiffForm term(Idx idx, const TruncatedPoly& c);

  const Chart& chart() const { return chart_; }
  int degree() const { return degree_; }
  int jet_order() const { return jet_order_; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::map<Idx, TruncatedPoly>& coeffs() const { return coeffs_; }

  TruncatedPoly coeff(const Idx& sorted_idx) const;
  void add_term(Idx idx, const TruncatedPoly& c);  // sign-normalizing

  DiffForm truncated(int jet_order) const;

  DiffForm operator-() const;
  DiffForm& operator+=(const DiffForm& o);
  DiffForm& operator-=(const DiffForm& o);
  friend DiffForm operator+(DiffForm a, const DiffForm& b) { return a += b; }
  friend DiffForm operator-(DiffForm a, const DiffForm& b) { return a -= b; }
  friend DiffForm operator*(const TruncatedPoly& p, const DiffForm& a);
  friend DiffForm operator*(const Rational& c, const DiffForm& a);

  bool operator==(const DiffForm& o) const {
    return chart_ == o.chart_ && degree_ == o.degree_ && coeffs_ == o.coeffs_;
  }
  bool operator!=(const DiffForm& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  Chart chart_;
  int degree_ = 0;
  int jet_order_ = 0;
  std::map<Idx, TruncatedPoly> coeffs_;
};

class PolyVectorField {
 public:
  PolyVectorField() = default;
  PolyVectorField(const Chart& chart, std::vector<TruncatedPoly> components);
  static PolyVectorField zero(const Chart& chart, int jet_order);
  static PolyVectorField basis(const Chart& chart, int var, int jet_order);

  const Chart& chart() const { return chart_; }
  const TruncatedPoly& component(int i) const { return comps_.at(static_cast<size_t>(i)); }
  const std::vector<TruncatedPoly>& components() const { return comps_; }
  RatVec at_zero() const;

  PolyVectorField& operator+=(const PolyVectorField& o);
  friend PolyVectorField operator*(const TruncatedPoly& p, const PolyVectorField& x);

  std::string to_string() const;

 private:
  Chart chart_;
  std::vector<TruncatedPoly> comps_;
};

// Polynomial map germ (K^s,0) -> (K^t,0): one source-chart polynomial per
// target variable, all vanishing at 0.
class PolyMapGerm {
 public:
  PolyMapGerm() = default;
  PolyMapGerm(Chart source, Chart target, std::vector<TruncatedPoly> components);
  static PolyMapGerm identity(const Chart& chart, int jet_order = kExactJet);
  // target_i = sum_j A(i,j) * source_j
  static PolyMapGerm linear(const Chart& source, const Chart& target, const RatMat& a,
                            int jet_order = kExactJet);

  const Chart& source() const { return source_; }
  const Chart& target() const { return target_; }
  const TruncatedPoly& component(int i) const { return comps_.at(static_cast<size_t>(i)); }
  const std::vector<TruncatedPoly>& components() const { return comps_; }

  RatMat jacobian_at_zero() const;  // (i,j) = d target_i / d source_j at 0
  PolyMapGerm truncated(int jet_order) const;

  std::string to_string() const;

 private:
  Chart source_, target_;
  std::vector<TruncatedPoly> comps_;
};

// F after G, i.e. x -> F(G(x)).
PolyMapGerm compose(const PolyMapGerm& f, const PolyMapGerm& g);

// Alternating k-tensor on K^dim with rational entries (a form evaluated at 0).
class ConstantTensor {
 public:
  ConstantTensor() = default;
  ConstantTensor(int dim, int degree) : dim_(dim), degree_(degree) {}

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  bool is_zero() const { return vals_.empty(); }
  const std::map<Idx, Rational>& values() const { return vals_; }

  void add(Idx idx, const Rational& c);
  Rational value(Idx idx) const;  // sign-normalizing lookup

  bool operator==(const ConstantTensor& o) const {
    return dim_ == o.dim_ && degree_ == o.degree_ && vals_ == o.vals_;
  }

 private:
  int dim_ = 0;
  int degree_ = 0;
  std::map<Idx, Rational> vals_;
};

// r with t1 == r * t0 (t0 nonzero); nullopt when not proportional.
std::optional<Rational> proportionality_ratio(const ConstantTensor& t1,
                                              const ConstantTensor& t0);

}  // namespace martinet
