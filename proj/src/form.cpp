#include "martinet/form.hpp"

#include <algorithm>
#include <sstream>

namespace martinet {

int sort_index_sign(Idx& idx) {
  int sign = 1;
  for (size_t i = 1; i < idx.size(); ++i) {
    int v = idx[i];
    size_t j = i;
    while (j > 0 && idx[j - 1] > v) {
      idx[j] = idx[j - 1];
      --j;
      sign = -sign;
    }
    idx[j] = v;
  }
  for (size_t i = 1; i < idx.size(); ++i)
    if (idx[i] == idx[i - 1]) return 0;
  return sign;
}

DiffForm DiffForm::zero(const Chart& chart, int degree, int jet_order) {
  // degree > dim is allowed and forces the zero form (no valid index tuples)
  if (degree < 0) throw DomainError("form degree out of range for chart");
  DiffForm f;
  f.chart_ = chart;
  f.degree_ = degree;
  f.jet_order_ = jet_order;
  return f;
}

DiffForm DiffForm::from_poly(const TruncatedPoly& p) {
  DiffForm f = zero(p.chart(), 0, p.jet_order());
  f.add_term({}, p);
  return f;
}

DiffForm DiffForm::term(Idx idx, const TruncatedPoly& c) {
  DiffForm f = zero(c.chart(), static_cast<int>(idx.size()), c.jet_order());
  f.add_term(std::move(idx), c);
  return f;
}

TruncatedPoly DiffForm::coeff(const Idx& sorted_idx) const {
  auto it = coeffs_.find(sorted_idx);
  if (it != coeffs_.end()) return it->second;
  return TruncatedPoly::zero(chart_, jet_order_);
}

void DiffForm::add_term(Idx idx, const TruncatedPoly& c) {
  require_same_chart(chart_, c.chart(), "form term");
  if (static_cast<int>(idx.size()) != degree_)
    throw DomainError("form term has wrong degree");
  for (int i : idx)
    if (i < 0 || i >= chart_.dim()) throw DomainError("form index out of range");
  jet_order_ = std::min(jet_order_, c.jet_order());
  const int sign = sort_index_sign(idx);
  if (sign == 0 || c.is_zero()) return;
  auto it = coeffs_.find(idx);
  if (it == coeffs_.end()) {
    coeffs_.emplace(std::move(idx), sign < 0 ? -c : c);
  } else {
    it->second += sign < 0 ? -c : c;
    if (it->second.is_zero()) coeffs_.erase(it);
  }
}

DiffForm DiffForm::truncated(int jet_order) const {
  DiffForm f = zero(chart_, degree_, jet_order);
  for (const auto& [idx, c] : coeffs_) {
    TruncatedPoly t = c.truncated(jet_order);
    if (!t.is_zero()) f.coeffs_.emplace(idx, std::move(t));
  }
  return f;
}

DiffForm DiffForm::operator-() const {
  DiffForm f = *this;
  for (auto& [idx, c] : f.coeffs_) c = -c;
  return f;
}

DiffForm& DiffForm::operator+=(const DiffForm& o) {
  require_same_chart(chart_, o.chart_, "form +");
  if (degree_ != o.degree_) throw DomainError("form +: degree mismatch");
  jet_order_ = std::min(jet_order_, o.jet_order_);
  for (const auto& [idx, c] : o.coeffs_) {
    auto it = coeffs_.find(idx);
    if (it == coeffs_.end()) {
      coeffs_.emplace(idx, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }
  return *this;
}

DiffForm& DiffForm::operator-=(const DiffForm& o) { return *this += -o; }

DiffForm operator*(const TruncatedPoly& p, const DiffForm& a) {
  require_same_chart(p.chart(), a.chart_, "poly * form");
  long va = static_cast<long>(a.jet_order_) + 1;
  for (const auto& [idx, c] : a.coeffs_) va = std::min(va, static_cast<long>(c.valuation()));
  const long jet = std::min({static_cast<long>(p.jet_order()) + va,
                             static_cast<long>(a.jet_order_) + p.valuation(),
                             static_cast<long>(kExactJet)});
  DiffForm f = DiffForm::zero(a.chart_, a.degree_, static_cast<int>(jet));
  for (const auto& [idx, c] : a.coeffs_) f.add_term(idx, p * c);
  return f;
}

DiffForm operator*(const Rational& c, const DiffForm& a) {
  DiffForm f = DiffForm::zero(a.chart_, a.degree_, a.jet_order_);
  if (c == 0) return f;
  for (const auto& [idx, p] : a.coeffs_) f.coeffs_.emplace(idx, c * p);
  return f;
}

std::string DiffForm::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [idx, c] : coeffs_) {
    if (!first) out << " + ";
    first = false;
    out << "(" << c.to_string() << ")";
    for (int i : idx) out << "*d" << chart_.var(i);
  }
  return out.str();
}

PolyVectorField::PolyVectorField(const Chart& chart, std::vector<TruncatedPoly> components)
    : chart_(chart), comps_(std::move(components)) {
  if (static_cast<int>(comps_.size()) != chart_.dim())
    throw DomainError("vector field needs one component per variable");
  for (const auto& c : comps_) require_same_chart(c.chart(), chart_, "vector field");
}

PolyVectorField PolyVectorField::zero(const Chart& chart, int jet_order) {
  std::vector<TruncatedPoly> comps(static_cast<size_t>(chart.dim()),
                                   TruncatedPoly::zero(chart, jet_order));
  return PolyVectorField(chart, std::move(comps));
}

PolyVectorField PolyVectorField::basis(const Chart& chart, int var, int jet_order) {
  PolyVectorField x = zero(chart, jet_order);
  x.comps_[static_cast<size_t>(var)] = TruncatedPoly::constant(chart, 1, jet_order);
  return x;
}

RatVec PolyVectorField::at_zero() const {
  RatVec v(chart_.dim());
  for (int i = 0; i < chart_.dim(); ++i) v(i) = comps_[static_cast<size_t>(i)].at_zero();
  return v;
}

PolyVectorField& PolyVectorField::operator+=(const PolyVectorField& o) {
  require_same_chart(chart_, o.chart_, "vector field +");
  for (size_t i = 0; i < comps_.size(); ++i) comps_[i] += o.comps_[i];
  return *this;
}

PolyVectorField operator*(const TruncatedPoly& p, const PolyVectorField& x) {
  std::vector<TruncatedPoly> comps;
  comps.reserve(x.comps_.size());
  for (const auto& c : x.comps_) comps.push_back(p * c);
  return PolyVectorField(x.chart_, std::move(comps));
}

std::string PolyVectorField::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (int i = 0; i < chart_.dim(); ++i) {
    if (comps_[static_cast<size_t>(i)].is_zero()) continue;
    if (!first) out << " + ";
    first = false;
    out << "(" << comps_[static_cast<size_t>(i)].to_string() << ")*@" << chart_.var(i);
  }
  return first ? "0" : out.str();
}

PolyMapGerm::PolyMapGerm(Chart source, Chart target, std::vector<TruncatedPoly> components)
    : source_(std::move(source)), target_(std::move(target)), comps_(std::move(components)) {
  if (static_cast<int>(comps_.size()) != target_.dim())
    throw DomainError("map germ needs one component per target variable");
  for (const auto& c : comps_) {
    require_same_chart(c.chart(), source_, "map germ component");
    if (c.at_zero() != 0) throw DomainError("map germ must fix the origin");
  }
}

PolyMapGerm PolyMapGerm::identity(const Chart& chart, int jet_order) {
  std::vector<TruncatedPoly> comps;
  for (int i = 0; i < chart.dim(); ++i)
    comps.push_back(TruncatedPoly::variable(chart, i, jet_order));
  return PolyMapGerm(chart, chart, std::move(comps));
}

PolyMapGerm PolyMapGerm::linear(const Chart& source, const Chart& target, const RatMat& a,
                                int jet_order) {
  if (a.rows() != target.dim() || a.cols() != source.dim())
    throw DomainError("linear map has wrong shape");
  std::vector<TruncatedPoly> comps;
  for (int i = 0; i < target.dim(); ++i) {
    TruncatedPoly c = TruncatedPoly::zero(source, jet_order);
    for (int j = 0; j < source.dim(); ++j)
      if (a(i, j) != 0) c += a(i, j) * TruncatedPoly::variable(source, j, jet_order);
    comps.push_back(std::move(c));
  }
  return PolyMapGerm(source, target, std::move(comps));
}

RatMat PolyMapGerm::jacobian_at_zero() const {
  RatMat a(target_.dim(), source_.dim());
  for (int i = 0; i < target_.dim(); ++i)
    a.row(i) = comps_[static_cast<size_t>(i)].gradient_at_zero().transpose();
  return a;
}

PolyMapGerm PolyMapGerm::truncated(int jet_order) const {
  std::vector<TruncatedPoly> comps;
  comps.reserve(comps_.size());
  for (const auto& c : comps_) comps.push_back(c.truncated(jet_order));
  return PolyMapGerm(source_, target_, std::move(comps));
}

std::string PolyMapGerm::to_string() const {
  std::ostringstream out;
  out << "(" << source_.to_string() << ") -> (" << target_.to_string() << "): ";
  for (int i = 0; i < target_.dim(); ++i) {
    if (i) out << ", ";
    out << target_.var(i) << " = " << comps_[static_cast<size_t>(i)].to_string();
  }
  return out.str();
}

PolyMapGerm compose(const PolyMapGerm& f, const PolyMapGerm& g) {
  require_same_chart(f.source(), g.target(), "map composition");
  std::vector<TruncatedPoly> comps;
  for (int i = 0; i < f.target().dim(); ++i)
    comps.push_back(f.component(i).compose(g.components()));
  return PolyMapGerm(g.source(), f.target(), std::move(comps));
}

void ConstantTensor::add(Idx idx, const Rational& c) {
  if (static_cast<int>(idx.size()) != degree_) throw DomainError("tensor entry degree mismatch");
  const int sign = sort_index_sign(idx);
  if (sign == 0 || c == 0) return;
  auto it = vals_.find(idx);
  if (it == vals_.end()) {
    vals_.emplace(std::move(idx), sign < 0 ? -c : c);
  } else {
    it->second += sign < 0 ? -c : c;
    if (it->second == 0) vals_.erase(it);
  }
}

Rational ConstantTensor::value(Idx idx) const {
  const int sign = sort_index_sign(idx);
  if (sign == 0) return 0;
  auto it = vals_.find(idx);
  if (it == vals_.end()) return 0;
  return sign < 0 ? -it->second : it->second;
}

std::optional<Rational> proportionality_ratio(const ConstantTensor& t1,
                                              const ConstantTensor& t0) {
  if (t0.dim() != t1.dim() || t0.degree() != t1.degree() || t0.is_zero()) return std::nullopt;
  const auto& [idx0, c0] = *t0.values().begin();
  const Rational r = t1.value(idx0) / c0;
  // t1 == r * t0 must hold entrywise
  for (const auto& [idx, c] : t0.values())
    if (t1.value(idx) != r * c) return std::nullopt;
  for (const auto& [idx, c] : t1.values())
    if (c != r * t0.value(idx)) return std::nullopt;
  return r;
}

}  // namespace martinet
