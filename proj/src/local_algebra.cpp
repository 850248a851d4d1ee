#include "martinet/local_algebra.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "martinet/linalg.hpp"

namespace martinet {

namespace {

void enumerate(int dim, int k, Multi& cur, int pos, std::vector<Multi>& out) {
  if (pos == dim - 1) {
    cur[static_cast<size_t>(pos)] = k;
    out.push_back(cur);
    return;
  }
  for (int e = k; e >= 0; --e) {
    cur[static_cast<size_t>(pos)] = e;
    enumerate(dim, k - e, cur, pos + 1, out);
  }
}

// Column layout: monomials of degree 0..k in a fixed order.
std::map<Multi, int> column_index(const Chart& chart, int k) {
  std::map<Multi, int> idx;
  int col = 0;
  for (int d = 0; d <= k; ++d)
    for (const Multi& m : monomials_of_degree(chart, d)) idx.emplace(m, col++);
  return idx;
}

RatVec coeff_row(const TruncatedPoly& p, const std::map<Multi, int>& cols) {
  RatVec row = RatVec::Zero(static_cast<Eigen::Index>(cols.size()));
  for (const auto& [m, c] : p.terms()) {
    auto it = cols.find(m);
    if (it != cols.end()) row(it->second) = c;
  }
  return row;
}

// All truncations of monomial multiples of the generators, spanning the image
// of the ideal in the space of degree <= k polynomials.
RatMat ideal_rows(const std::vector<TruncatedPoly>& gens, int k,
                  const std::map<Multi, int>& cols) {
  const Chart& chart = gens.front().chart();
  std::vector<RatVec> rows;
  for (const TruncatedPoly& g : gens) {
    if (g.is_zero()) continue;
    if (g.jet_order() < k)
      throw DomainError("ideal membership at degree " + std::to_string(k) +
                        " needs jets of at least that order");
    const int room = k - g.valuation();
    for (int d = 0; d <= room; ++d)
      for (const Multi& m : monomials_of_degree(chart, d)) {
        TruncatedPoly prod = TruncatedPoly::monomial(chart, m, 1, kExactJet) * g;
        prod = truncate_above_degree(prod, k);
        if (!prod.is_zero()) rows.push_back(coeff_row(prod, cols));
      }
  }
  RatMat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (size_t r = 0; r < rows.size(); ++r) m.row(static_cast<Eigen::Index>(r)) = rows[r];
  return m;
}

}  // namespace

std::vector<Multi> monomials_of_degree(const Chart& chart, int k) {
  std::vector<Multi> out;
  if (k < 0) return out;
  if (chart.dim() == 0) {
    if (k == 0) out.push_back({});
    return out;
  }
  Multi cur(static_cast<size_t>(chart.dim()));
  enumerate(chart.dim(), k, cur, 0, out);
  return out;
}

bool in_ideal_mod_mk(const TruncatedPoly& p, const std::vector<TruncatedPoly>& gens, int k) {
  if (gens.empty()) return truncate_above_degree(p, k).is_zero();
  require_same_chart(p.chart(), gens.front().chart(), "in_ideal_mod_mk");
  if (p.jet_order() < k)
    throw DomainError("in_ideal_mod_mk: argument jet below requested degree");
  const auto cols = column_index(p.chart(), k);
  RatMat basis = row_space_basis(ideal_rows(gens, k, cols));
  return in_row_space(coeff_row(truncate_above_degree(p, k), cols), basis);
}

bool nakayama_contains_power(const std::vector<TruncatedPoly>& gens, int k) {
  if (gens.empty()) return false;
  const Chart& chart = gens.front().chart();
  const auto cols = column_index(chart, k);
  RatMat basis = row_space_basis(ideal_rows(gens, k, cols));
  for (const Multi& m : monomials_of_degree(chart, k)) {
    TruncatedPoly mono = TruncatedPoly::monomial(chart, m, 1, kExactJet);
    if (!in_row_space(coeff_row(mono, cols), basis)) return false;
  }
  return true;
}

std::optional<int> ideal_power_bound(const std::vector<TruncatedPoly>& gens, int max_k) {
  int cap = max_k;
  bool any = false;
  for (const TruncatedPoly& g : gens)
    if (!g.is_zero()) {
      any = true;
      cap = std::min(cap, g.jet_order() >= kExactJet ? max_k : g.jet_order());
    }
  if (!any) return std::nullopt;
  for (int k = 0; k <= cap; ++k)
    if (nakayama_contains_power(gens, k)) return k;
  return std::nullopt;
}

Certificate regular_pair(const TruncatedPoly& f, const TruncatedPoly& g,
                         unsigned long long seed) {
  require_same_chart(f.chart(), g.chart(), "regular_pair");
  const Chart& chart = f.chart();
  const int n = chart.dim();
  if (f.is_zero() || g.is_zero()) {
    const bool exact = f.jet_order() >= kExactJet && g.jet_order() >= kExactJet;
    return exact ? Certificate::refuted : Certificate::unknown;
  }
  if (f.at_zero() != 0 || g.at_zero() != 0) return Certificate::refuted;
  if (n < 2) return Certificate::refuted;

  RatMat lin(2, n);
  lin.row(0) = f.gradient_at_zero().transpose();
  lin.row(1) = g.gradient_at_zero().transpose();
  if (rank(lin) == 2) return Certificate::proved;

  // A divisibility relation between exact polynomials keeps the zero set in
  // codimension one. For jet-limited data this would not be conclusive.
  if (f.jet_order() >= kExactJet && g.jet_order() >= kExactJet &&
      (divide_exact(g, f) || divide_exact(f, g)))
    return Certificate::refuted;

  const int cap = std::min({f.jet_order(), g.jet_order(), 12});
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<int> coeff(-9, 9);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<TruncatedPoly> cut = {f, g};
    RatMat dirs(std::max(n - 2, 1), n);
    dirs.setZero();
    for (int r = 0; r < n - 2; ++r) {
      TruncatedPoly ell = TruncatedPoly::zero(chart, kExactJet);
      for (int j = 0; j < n; ++j) {
        const int c = coeff(rng);
        dirs(r, j) = c;
        if (c != 0) ell += Rational(c) * TruncatedPoly::variable(chart, j, kExactJet);
      }
      cut.push_back(ell);
    }
    if (n > 2 && rank(dirs) < n - 2) continue;
    if (ideal_power_bound(cut, cap)) return Certificate::proved;
  }
  return Certificate::unknown;
}

PolyVectorField euler_field(const Chart& chart) {
  std::vector<TruncatedPoly> comps;
  for (int i = 0; i < chart.dim(); ++i) {
    const Rational w(chart.weights() ? (*chart.weights())[static_cast<size_t>(i)] : 1);
    comps.push_back(w * TruncatedPoly::variable(chart, i, kExactJet));
  }
  return PolyVectorField(chart, std::move(comps));
}

TruncatedPoly apply_field(const PolyVectorField& x, const TruncatedPoly& p) {
  require_same_chart(x.chart(), p.chart(), "apply_field");
  TruncatedPoly out = TruncatedPoly::zero(p.chart(), kExactJet);
  for (int i = 0; i < p.chart().dim(); ++i) out += x.component(i) * partial(p, i);
  return out;
}

}  // namespace martinet
