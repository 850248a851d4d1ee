#include "martinet/exterior.hpp"

#include <algorithm>

namespace martinet {

static long form_valuation(const DiffForm& a) {
  long v = static_cast<long>(a.jet_order()) + 1;
  for (const auto& [idx, c] : a.coeffs()) v = std::min(v, static_cast<long>(c.valuation()));
  return v;
}

static int min_jet(long j) { return static_cast<int>(std::min(j, static_cast<long>(kExactJet))); }

DiffForm wedge(const DiffForm& a, const DiffForm& b) {
  require_same_chart(a.chart(), b.chart(), "wedge");
  const long jet =
      std::min(a.jet_order() + form_valuation(b), b.jet_order() + form_valuation(a));
  DiffForm out = DiffForm::zero(a.chart(), a.degree() + b.degree(), min_jet(jet));
  Idx idx;
  for (const auto& [ia, ca] : a.coeffs())
    for (const auto& [ib, cb] : b.coeffs()) {
      idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      out.add_term(idx, ca * cb);
    }
  return out;
}

DiffForm wedge_power(const DiffForm& a, int k) {
  if (k < 0) throw DomainError("wedge_power: negative exponent");
  DiffForm out = DiffForm::term({}, TruncatedPoly::constant(a.chart(), 1, kExactJet));
  for (int i = 0; i < k; ++i) out = wedge(out, a);
  return out;
}

DiffForm ext_d(const DiffForm& a) {
  const int jet =
      a.jet_order() >= kExactJet ? kExactJet : std::max(-1, a.jet_order() - 1);
  DiffForm out = DiffForm::zero(a.chart(), a.degree() + 1, jet);
  if (a.degree() + 1 > a.chart().dim()) return out;
  Idx idx;
  for (const auto& [ia, c] : a.coeffs())
    for (int v = 0; v < a.chart().dim(); ++v) {
      TruncatedPoly dc = partial(c, v);
      if (dc.is_zero()) continue;
      idx.clear();
      idx.push_back(v);
      idx.insert(idx.end(), ia.begin(), ia.end());
      out.add_term(idx, dc);
    }
  return out;
}

DiffForm interior(const PolyVectorField& x, const DiffForm& a) {
  require_same_chart(x.chart(), a.chart(), "interior");
  if (a.degree() == 0) throw DomainError("interior: form must have positive degree");
  long xval = kExactJet, xjet = kExactJet;
  for (const auto& c : x.components()) {
    xval = std::min(xval, static_cast<long>(c.valuation()));
    xjet = std::min(xjet, static_cast<long>(c.jet_order()));
  }
  const long jet = std::min(xjet + form_valuation(a), a.jet_order() + xval);
  DiffForm out = DiffForm::zero(a.chart(), a.degree() - 1, min_jet(jet));
  for (const auto& [ia, c] : a.coeffs())
    for (size_t t = 0; t < ia.size(); ++t) {
      const TruncatedPoly& xc = x.component(ia[t]);
      if (xc.is_zero()) continue;
      Idx rest;
      for (size_t s = 0; s < ia.size(); ++s)
        if (s != t) rest.push_back(ia[s]);
      TruncatedPoly term = xc * c;
      if (t % 2) term = -term;
      out.add_term(std::move(rest), term);
    }
  return out;
}

TruncatedPoly pullback(const PolyMapGerm& f, const TruncatedPoly& p) {
  require_same_chart(f.target(), p.chart(), "pullback");
  return p.compose(f.components());
}

DiffForm pullback(const PolyMapGerm& f, const DiffForm& a) {
  require_same_chart(f.target(), a.chart(), "pullback");
  const Chart& src = f.source();
  if (a.is_zero()) {
    long jet = a.jet_order();
    for (const auto& c : f.components()) jet = std::min(jet, static_cast<long>(c.jet_order()));
    return DiffForm::zero(src, a.degree(), min_jet(jet));
  }
  if (a.degree() == 0) return DiffForm::from_poly(pullback(f, a.coeff({})));

  std::vector<DiffForm> df(static_cast<size_t>(f.target().dim()));
  auto differential = [&](int j) -> const DiffForm& {
    auto& slot = df[static_cast<size_t>(j)];
    if (slot.chart().dim() == 0) {
      slot = DiffForm::zero(src, 1, kExactJet);
      for (int i = 0; i < src.dim(); ++i) {
        TruncatedPoly d = partial(f.component(j), i);
        if (!d.is_zero()) slot.add_term({i}, d);
        else slot = slot.truncated(std::min(slot.jet_order(), d.jet_order()));
      }
    }
    return slot;
  };

  DiffForm out = DiffForm::zero(src, a.degree(), kExactJet);
  for (const auto& [idx, c] : a.coeffs()) {
    DiffForm w = DiffForm::from_poly(pullback(f, c));
    for (int j : idx) w = wedge(w, differential(j));
    out += w;
  }
  return out;
}

ConstantTensor eval_at_0(const DiffForm& a) {
  if (a.jet_order() < 0) throw DomainError("eval_at_0: form has no reliable constant part");
  ConstantTensor t(a.chart().dim(), a.degree());
  for (const auto& [idx, c] : a.coeffs()) t.add(idx, c.at_zero());
  return t;
}

RatMat matrix_at_0(const DiffForm& two_form) {
  if (two_form.degree() != 2) throw DomainError("matrix_at_0: need a 2-form");
  const int n = two_form.chart().dim();
  RatMat m = RatMat::Zero(n, n);
  for (const auto& [idx, c] : two_form.coeffs()) {
    const Rational v = c.at_zero();
    m(idx[0], idx[1]) = v;
    m(idx[1], idx[0]) = -v;
  }
  return m;
}

int rank_at_0(const DiffForm& two_form) { return rank(matrix_at_0(two_form)); }

std::vector<Idx> index_subsets(int dim, int k) {
  std::vector<Idx> out;
  if (k < 0 || k > dim) return out;
  Idx cur(static_cast<size_t>(k));
  auto rec = [&](auto&& self, int start, int pos) -> void {
    if (pos == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < dim; ++i) {
      cur[static_cast<size_t>(pos)] = i;
      self(self, i + 1, pos + 1);
    }
  };
  rec(rec, 0, 0);
  return out;
}

RatMat kernel_at_0(const DiffForm& a) {
  if (a.degree() < 1) throw DomainError("kernel_at_0: need degree >= 1");
  const int n = a.chart().dim();
  const ConstantTensor t = eval_at_0(a);
  const std::vector<Idx> rows = index_subsets(n, a.degree() - 1);
  RatMat m(static_cast<Eigen::Index>(rows.size()), n);
  for (size_t r = 0; r < rows.size(); ++r)
    for (int j = 0; j < n; ++j) {
      Idx probe;
      probe.push_back(j);
      probe.insert(probe.end(), rows[r].begin(), rows[r].end());
      m(static_cast<Eigen::Index>(r), j) = t.value(std::move(probe));
    }
  return kernel_basis(m);
}

PolyMapGerm inclusion_map(const Chart& chart, int var) {
  const Chart sub = chart.drop(var);
  std::vector<TruncatedPoly> comps;
  for (int j = 0; j < chart.dim(); ++j) {
    if (j == var) {
      comps.push_back(TruncatedPoly::zero(sub, kExactJet));
    } else {
      const int pos = j < var ? j : j - 1;
      comps.push_back(TruncatedPoly::variable(sub, pos, kExactJet));
    }
  }
  return PolyMapGerm(sub, chart, std::move(comps));
}

PolyMapGerm projection_map(const Chart& chart, int var) {
  const Chart sub = chart.drop(var);
  std::vector<TruncatedPoly> comps;
  for (int j = 0; j < chart.dim(); ++j)
    if (j != var) comps.push_back(TruncatedPoly::variable(chart, j, kExactJet));
  return PolyMapGerm(chart, sub, std::move(comps));
}

DiffForm restrict_to_hyperplane(const DiffForm& a, int var) {
  return pullback(inclusion_map(a.chart(), var), a);
}

DiffForm lift_from_hyperplane(const DiffForm& a_sub, const Chart& chart, int var) {
  require_same_chart(a_sub.chart(), chart.drop(var), "lift_from_hyperplane");
  return pullback(projection_map(chart, var), a_sub);
}

DiffForm standard_volume(const Chart& chart, int jet_order) {
  Idx all(static_cast<size_t>(chart.dim()));
  for (int i = 0; i < chart.dim(); ++i) all[static_cast<size_t>(i)] = i;
  return DiffForm::term(std::move(all), TruncatedPoly::constant(chart, 1, jet_order));
}

TruncatedPoly top_coefficient(const DiffForm& top_form) {
  if (top_form.degree() != top_form.chart().dim())
    throw DomainError("top_coefficient: not a top-degree form");
  Idx all(static_cast<size_t>(top_form.chart().dim()));
  for (int i = 0; i < top_form.chart().dim(); ++i) all[static_cast<size_t>(i)] = i;
  return top_form.coeff(all);
}

Eigen::MatrixXd form_matrix_at(const DiffForm& two_form, std::span<const double> x) {
  if (two_form.degree() != 2) throw DomainError("form_matrix_at: need a 2-form");
  const int n = two_form.chart().dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [idx, c] : two_form.coeffs()) {
    const double v = c.evaluate(x);
    m(idx[0], idx[1]) += v;
    m(idx[1], idx[0]) -= v;
  }
  return m;
}

Eigen::VectorXd covector_at(const DiffForm& one_form, std::span<const double> x) {
  if (one_form.degree() != 1) throw DomainError("covector_at: need a 1-form");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(one_form.chart().dim());
  for (const auto& [idx, c] : one_form.coeffs()) v(idx[0]) += c.evaluate(x);
  return v;
}

}  // namespace martinet
