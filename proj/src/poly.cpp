#include "martinet/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace martinet {

int multi_degree(const Multi& m) {
  int d = 0;
  for (int e : m) d += e;
  return d;
}

static int clamp_jet(long j) {
  if (j < 0) return 0;
  if (j > kExactJet) return kExactJet;
  return static_cast<int>(j);
}

TruncatedPoly TruncatedPoly::zero(const Chart& chart, int jet_order) {
  TruncatedPoly p;
  p.chart_ = chart;
  p.jet_order_ = jet_order;
  return p;
}

TruncatedPoly TruncatedPoly::constant(const Chart& chart, const Rational& c, int jet_order) {
  TruncatedPoly p = zero(chart, jet_order);
  p.insert_term(Multi(static_cast<size_t>(chart.dim()), 0), c);
  return p;
}

TruncatedPoly TruncatedPoly::variable(const Chart& chart, int var, int jet_order) {
  if (var < 0 || var >= chart.dim()) throw DomainError("variable index out of range");
  TruncatedPoly p = zero(chart, jet_order);
  Multi m(static_cast<size_t>(chart.dim()), 0);
  m[static_cast<size_t>(var)] = 1;
  p.insert_term(std::move(m), 1);
  return p;
}

TruncatedPoly TruncatedPoly::monomial(const Chart& chart, Multi exps, const Rational& c,
                                      int jet_order) {
  if (static_cast<int>(exps.size()) != chart.dim())
    throw DomainError("monomial exponent vector has wrong length");
  for (int e : exps)
    if (e < 0) throw DomainError("monomial exponents must be nonnegative");
  TruncatedPoly p = zero(chart, jet_order);
  p.insert_term(std::move(exps), c);
  return p;
}

void TruncatedPoly::insert_term(Multi exps, Rational c) {
  if (c == 0) return;
  if (multi_degree(exps) > jet_order_) return;
  auto it = terms_.find(exps);
  if (it == terms_.end()) {
    terms_.emplace(std::move(exps), std::move(c));
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void TruncatedPoly::drop_above_jet() {
  for (auto it = terms_.begin(); it != terms_.end();)
    it = (multi_degree(it->first) > jet_order_) ? terms_.erase(it) : std::next(it);
}

Rational TruncatedPoly::coeff(const Multi& exps) const {
  auto it = terms_.find(exps);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational TruncatedPoly::at_zero() const {
  return terms_.empty() ? Rational(0) : coeff(Multi(static_cast<size_t>(chart_.dim()), 0));
}

int TruncatedPoly::valuation() const {
  if (terms_.empty()) return clamp_jet(static_cast<long>(jet_order_) + 1);
  int v = kExactJet;
  for (const auto& [m, c] : terms_) v = std::min(v, multi_degree(m));
  return v;
}

int TruncatedPoly::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, multi_degree(m));
  return d;
}

TruncatedPoly TruncatedPoly::truncated(int new_jet_order) const {
  TruncatedPoly p = *this;
  p.jet_order_ = new_jet_order;
  p.drop_above_jet();
  return p;
}

TruncatedPoly TruncatedPoly::operator-() const {
  TruncatedPoly p = *this;
  for (auto& [m, c] : p.terms_) c = -c;
  return p;
}

TruncatedPoly& TruncatedPoly::operator+=(const TruncatedPoly& o) {
  require_same_chart(chart_, o.chart_, "poly +");
  jet_order_ = std::min(jet_order_, o.jet_order_);
  drop_above_jet();
  for (const auto& [m, c] : o.terms_) insert_term(m, c);
  return *this;
}

TruncatedPoly& TruncatedPoly::operator-=(const TruncatedPoly& o) {
  require_same_chart(chart_, o.chart_, "poly -");
  jet_order_ = std::min(jet_order_, o.jet_order_);
  drop_above_jet();
  for (const auto& [m, c] : o.terms_) insert_term(m, -c);
  return *this;
}

TruncatedPoly operator*(const TruncatedPoly& a, const TruncatedPoly& b) {
  require_same_chart(a.chart_, b.chart_, "poly *");
  long ja = static_cast<long>(a.jet_order_) + b.valuation();
  long jb = static_cast<long>(b.jet_order_) + a.valuation();
  TruncatedPoly out = TruncatedPoly::zero(a.chart_, clamp_jet(std::min(ja, jb)));
  const size_t dim = static_cast<size_t>(a.chart_.dim());
  Multi m(dim, 0);
  for (const auto& [ma, ca] : a.terms_) {
    const int da = multi_degree(ma);
    for (const auto& [mb, cb] : b.terms_) {
      if (da + multi_degree(mb) > out.jet_order_) continue;
      for (size_t i = 0; i < dim; ++i) m[i] = ma[i] + mb[i];
      out.insert_term(m, ca * cb);
    }
  }
  return out;
}

TruncatedPoly operator*(const Rational& c, const TruncatedPoly& p) {
  TruncatedPoly out = TruncatedPoly::zero(p.chart_, p.jet_order_);
  if (c == 0) return out;
  for (const auto& [m, pc] : p.terms_) out.terms_.emplace(m, c * pc);
  return out;
}

TruncatedPoly TruncatedPoly::compose(const std::vector<TruncatedPoly>& images) const {
  const int dim = chart_.dim();
  if (static_cast<int>(images.size()) != dim)
    throw DomainError("compose: one image per variable required");
  if (dim == 0 || terms_.empty()) {
    Chart target = images.empty() ? chart_ : images[0].chart();
    return TruncatedPoly::zero(target, jet_order_);
  }
  const Chart target = images[0].chart();
  int jet = jet_order_;
  for (int i = 0; i < dim; ++i) {
    require_same_chart(images[static_cast<size_t>(i)].chart(), target, "compose");
    bool used = false;
    for (const auto& [m, c] : terms_)
      if (m[static_cast<size_t>(i)] > 0) used = true;
    if (!used) continue;
    if (images[static_cast<size_t>(i)].at_zero() != 0)
      throw DomainError("compose: images must vanish at 0");
    jet = std::min(jet, images[static_cast<size_t>(i)].jet_order());
  }

  // powers[i][k] = images[i]^k, truncated to the result jet.
  std::vector<std::vector<TruncatedPoly>> powers(static_cast<size_t>(dim));
  auto power = [&](int i, int k) -> const TruncatedPoly& {
    auto& cache = powers[static_cast<size_t>(i)];
    if (cache.empty()) cache.push_back(TruncatedPoly::constant(target, 1, jet));
    while (static_cast<int>(cache.size()) <= k)
      cache.push_back((cache.back() * images[static_cast<size_t>(i)]).truncated(jet));
    return cache[static_cast<size_t>(k)];
  };

  TruncatedPoly out = TruncatedPoly::zero(target, jet);
  for (const auto& [m, c] : terms_) {
    TruncatedPoly term = TruncatedPoly::constant(target, c, jet);
    for (int i = 0; i < dim; ++i)
      if (m[static_cast<size_t>(i)] > 0)
        term = (term * power(i, m[static_cast<size_t>(i)])).truncated(jet);
    out += term;
  }
  return out;
}

double TruncatedPoly::evaluate(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != chart_.dim())
    throw DomainError("evaluate: point dimension mismatch");
  double acc = 0;
  for (const auto& [m, c] : terms_) {
    double t = to_double(c);
    for (size_t i = 0; i < m.size(); ++i)
      for (int k = 0; k < m[i]; ++k) t *= point[i];
    acc += t;
  }
  return acc;
}

Rational TruncatedPoly::evaluate_exact(std::span<const Rational> point) const {
  if (static_cast<int>(point.size()) != chart_.dim())
    throw DomainError("evaluate: point dimension mismatch");
  Rational acc = 0;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (size_t i = 0; i < m.size(); ++i)
      for (int k = 0; k < m[i]; ++k) t *= point[i];
    acc += t;
  }
  return acc;
}

RatVec TruncatedPoly::gradient_at_zero() const {
  RatVec g = RatVec::Zero(chart_.dim());
  Multi m(static_cast<size_t>(chart_.dim()), 0);
  for (int i = 0; i < chart_.dim(); ++i) {
    m[static_cast<size_t>(i)] = 1;
    g(i) = coeff(m);
    m[static_cast<size_t>(i)] = 0;
  }
  return g;
}

std::string TruncatedPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    Rational a = c;
    if (first) {
      if (a < 0) {
        out << "-";
        a = -a;
      }
    } else {
      out << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    bool printed = false;
    if (a != 1 || multi_degree(m) == 0) {
      out << martinet::to_string(a);
      printed = true;
    }
    for (size_t i = 0; i < m.size(); ++i)
      for (int k = 0; k < m[i]; ++k) {
        if (printed) out << "*";
        out << chart_.var(static_cast<int>(i));
        printed = true;
      }
  }
  return out.str();
}

TruncatedPoly partial(const TruncatedPoly& p, int var) {
  if (var < 0 || var >= p.chart().dim()) throw DomainError("partial: variable out of range");
  int jet = p.jet_order() >= kExactJet ? kExactJet : std::max(0, p.jet_order() - 1);
  TruncatedPoly out = TruncatedPoly::zero(p.chart(), jet);
  for (const auto& [m, c] : p.terms()) {
    int e = m[static_cast<size_t>(var)];
    if (e == 0) continue;
    Multi d = m;
    d[static_cast<size_t>(var)] = e - 1;
    out += TruncatedPoly::monomial(p.chart(), std::move(d), c * e, jet);
  }
  return out;
}

TruncatedPoly formal_integral(const TruncatedPoly& p, int var) {
  if (var < 0 || var >= p.chart().dim())
    throw DomainError("formal_integral: variable out of range");
  int jet = clamp_jet(static_cast<long>(p.jet_order()) + 1);
  TruncatedPoly out = TruncatedPoly::zero(p.chart(), jet);
  for (const auto& [m, c] : p.terms()) {
    Multi d = m;
    int e = ++d[static_cast<size_t>(var)];
    out += TruncatedPoly::monomial(p.chart(), std::move(d), c / e, jet);
  }
  return out;
}

TruncatedPoly homogeneous_part(const TruncatedPoly& p, int degree) {
  TruncatedPoly out = TruncatedPoly::zero(p.chart(), p.jet_order());
  for (const auto& [m, c] : p.terms())
    if (multi_degree(m) == degree) out += TruncatedPoly::monomial(p.chart(), m, c, p.jet_order());
  return out;
}

TruncatedPoly truncate_above_degree(const TruncatedPoly& p, int degree) {
  TruncatedPoly out = TruncatedPoly::zero(p.chart(), p.jet_order());
  for (const auto& [m, c] : p.terms())
    if (multi_degree(m) <= degree) out += TruncatedPoly::monomial(p.chart(), m, c, p.jet_order());
  return out;
}

std::optional<long> quasi_homogeneous_degree(const TruncatedPoly& p,
                                             const std::vector<int>& weights) {
  if (static_cast<int>(weights.size()) != p.chart().dim())
    throw DomainError("quasi_homogeneous_degree: weight count mismatch");
  std::optional<long> delta;
  for (const auto& [m, c] : p.terms()) {
    long d = 0;
    for (size_t i = 0; i < m.size(); ++i) d += static_cast<long>(m[i]) * weights[i];
    if (!delta)
      delta = d;
    else if (*delta != d)
      return std::nullopt;
  }
  return delta;
}

TruncatedPoly unit_inverse(const TruncatedPoly& p, int jet_order) {
  const Rational c = p.at_zero();
  if (c == 0) throw DomainError("unit_inverse: not a unit");
  if (p.degree() == 0) return TruncatedPoly::constant(p.chart(), 1 / c, p.jet_order());
  const int jet = jet_order < 0 ? p.jet_order() : std::min(jet_order, p.jet_order());
  if (jet >= kExactJet)
    throw DomainError("unit_inverse: inverse of a non-constant unit needs a finite jet order");
  TruncatedPoly v = TruncatedPoly::constant(p.chart(), 1 / c, jet);
  const TruncatedPoly two = TruncatedPoly::constant(p.chart(), 2, jet);
  int steps = 1;
  while ((1 << steps) <= jet + 1 && steps < 30) ++steps;
  for (int k = 0; k < steps; ++k) v = (v * (two - (p * v).truncated(jet))).truncated(jet);
  return v;
}

// Exact quotient of homogeneous polynomials (lex leading terms); nullopt when
// not divisible.
static std::optional<TruncatedPoly> hom_divide(const TruncatedPoly& num,
                                               const TruncatedPoly& den, int jet) {
  TruncatedPoly q = TruncatedPoly::zero(num.chart(), jet);
  if (num.is_zero()) return q;
  TruncatedPoly r = num;
  const auto& lt_den = *den.terms().rbegin();
  while (!r.is_zero()) {
    const auto& lt_r = *r.terms().rbegin();
    Multi diff(lt_r.first.size());
    for (size_t i = 0; i < diff.size(); ++i) {
      diff[i] = lt_r.first[i] - lt_den.first[i];
      if (diff[i] < 0) return std::nullopt;
    }
    TruncatedPoly t =
        TruncatedPoly::monomial(num.chart(), std::move(diff), lt_r.second / lt_den.second, jet);
    q += t;
    r -= (t * den).truncated(r.jet_order());
  }
  return q;
}

std::optional<TruncatedPoly> divide_exact(const TruncatedPoly& p, const TruncatedPoly& f) {
  require_same_chart(p.chart(), f.chart(), "divide_exact");
  if (f.is_zero()) throw DomainError("divide_exact: divisor is a zero jet");
  // Exact inputs still get a finite working order: quotients live in the
  // formal local ring, so division is decided jet by jet. Twice the input
  // degrees leaves room for the graded remainders to cancel.
  const int degree_cap = 2 * std::max({p.degree(), f.degree(), 8}) + 4;
  const int D = std::min({p.jet_order(), f.jet_order(), degree_cap});
  const int v = f.valuation();
  const int qjet = std::max(0, D - v);
  const TruncatedPoly fv = homogeneous_part(f, v);

  TruncatedPoly q = TruncatedPoly::zero(p.chart(), qjet);
  TruncatedPoly r = p.truncated(D);
  for (int d = 0; d < v; ++d)
    if (!homogeneous_part(r, d).is_zero()) return std::nullopt;
  for (int k = 0; k <= D - v && !r.is_zero(); ++k) {
    auto qk = hom_divide(homogeneous_part(r, v + k).truncated(D), fv.truncated(D), qjet);
    if (!qk) return std::nullopt;
    if (qk->is_zero()) continue;
    q += *qk;
    r -= (qk->truncated(D) * f).truncated(D);
  }
  if (!r.is_zero()) return std::nullopt;
  return q;
}

bool is_unit_multiple(const TruncatedPoly& g, const TruncatedPoly& f) {
  auto q = divide_exact(g, f);
  return q.has_value() && q->at_zero() != 0;
}

}  // namespace martinet
