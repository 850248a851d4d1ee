#include "martinet/normal_form.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "martinet/local_algebra.hpp"

namespace martinet {

namespace {

int clamp_jet(long j) {
  if (j >= kExactJet) return kExactJet;
  if (j < -1) return -1;
  return static_cast<int>(j);
}

TruncatedPoly var_poly(const Chart& chart, int v) {
  return TruncatedPoly::variable(chart, v, kExactJet);
}

TruncatedPoly one_poly(const Chart& chart) {
  return TruncatedPoly::constant(chart, 1, kExactJet);
}

// Compares only up to the jet both sides are reliable for.
bool equal_to_jet(const DiffForm& a, const DiffForm& b) {
  const int m = std::min(a.jet_order(), b.jet_order());
  return a.truncated(m) == b.truncated(m);
}

// a = dx_pivot ^ first + second, with neither part containing dx_pivot.
std::pair<DiffForm, DiffForm> split_pivot(const DiffForm& a, int pivot) {
  DiffForm with = DiffForm::zero(a.chart(), a.degree() - 1, a.jet_order());
  DiffForm without = DiffForm::zero(a.chart(), a.degree(), a.jet_order());
  for (const auto& [idx, c] : a.coeffs()) {
    const auto it = std::find(idx.begin(), idx.end(), pivot);
    if (it == idx.end()) {
      without.add_term(idx, c);
      continue;
    }
    const int pos = static_cast<int>(it - idx.begin());
    Idx rest;
    rest.reserve(idx.size() - 1);
    for (int i : idx)
      if (i != pivot) rest.push_back(i);
    with.add_term(rest, pos % 2 ? -c : c);
  }
  return {with, without};
}

// Coefficient-wise antiderivative along the pivot, vanishing on {x_pivot = 0}.
DiffForm integrate_pivot(const DiffForm& a, int pivot) {
  DiffForm out = DiffForm::zero(a.chart(), a.degree(), clamp_jet(a.jet_order() + 1L));
  for (const auto& [idx, c] : a.coeffs()) out.add_term(idx, formal_integral(c, pivot));
  return out;
}

std::optional<DiffForm> divide_coeffs(const DiffForm& a, const TruncatedPoly& f) {
  DiffForm out = DiffForm::zero(a.chart(), a.degree(), a.jet_order());
  for (const auto& [idx, c] : a.coeffs()) {
    auto q = divide_exact(c, f);
    if (!q) return std::nullopt;
    out.add_term(idx, *q);
  }
  return out;
}

bool coeffs_divisible(const DiffForm& a, const TruncatedPoly& f) {
  for (const auto& [idx, c] : a.coeffs())
    if (!divide_exact(c, f)) return false;
  return true;
}

std::vector<int> weights_or_unit(const Chart& chart) {
  if (chart.weights()) return *chart.weights();
  return std::vector<int>(static_cast<size_t>(chart.dim()), 1);
}

std::vector<int> positive_weights(const Chart& chart, const char* where) {
  auto w = weights_or_unit(chart);
  for (int wi : w)
    if (wi <= 0) throw DomainError(std::string(where) + ": chart weights must be positive");
  return w;
}

long weighted_degree(const Multi& m, const std::vector<int>& w) {
  long d = 0;
  for (size_t i = 0; i < m.size(); ++i) d += static_cast<long>(m[i]) * w[i];
  return d;
}

long index_weight(const Idx& idx, const std::vector<int>& w) {
  long d = 0;
  for (int i : idx) d += w[static_cast<size_t>(i)];
  return d;
}

// Splits a form by the weighted degree of its terms, counting both the
// monomial and the covector slots; the exterior derivative preserves this
// grading, so closed forms split into closed pieces.
std::map<long, DiffForm> graded_pieces(const DiffForm& a, const std::vector<int>& w) {
  std::map<long, DiffForm> out;
  for (const auto& [idx, c] : a.coeffs())
    for (const auto& [m, q] : c.terms()) {
      const long g = weighted_degree(m, w) + index_weight(idx, w);
      auto it = out.try_emplace(g, DiffForm::zero(a.chart(), a.degree(), a.jet_order())).first;
      it->second.add_term(idx, TruncatedPoly::monomial(a.chart(), m, q, a.jet_order()));
    }
  return out;
}

std::vector<Multi> monomials_of_weighted_degree(const Chart& chart, long t,
                                                const std::vector<int>& w) {
  const bool unit = std::all_of(w.begin(), w.end(), [](int x) { return x == 1; });
  if (unit) return monomials_of_degree(chart, static_cast<int>(t));
  std::vector<Multi> out;
  for (long s = 0; s <= t; ++s)
    for (const Multi& m : monomials_of_degree(chart, static_cast<int>(s)))
      if (weighted_degree(m, w) == t) out.push_back(m);
  return out;
}

// Exact linear system whose unknowns weight the column forms and whose
// equations match every (index, monomial) coefficient slot.
struct Assembly {
  RatMat a;
  RatVec b;
};

Assembly assemble_columns(const std::vector<DiffForm>& cols, const DiffForm* rhs) {
  std::map<std::pair<Idx, Multi>, int> row_of;
  auto note_rows = [&row_of](const DiffForm& f) {
    for (const auto& [idx, c] : f.coeffs())
      for (const auto& [m, q] : c.terms()) row_of.try_emplace({idx, m}, 0);
  };
  for (const DiffForm& f : cols) note_rows(f);
  if (rhs) note_rows(*rhs);
  int r = 0;
  for (auto& [key, v] : row_of) v = r++;
  Assembly out;
  out.a = RatMat::Zero(r, static_cast<Eigen::Index>(cols.size()));
  out.b = RatVec::Zero(r);
  for (size_t j = 0; j < cols.size(); ++j)
    for (const auto& [idx, c] : cols[j].coeffs())
      for (const auto& [m, q] : c.terms())
        out.a(row_of.at({idx, m}), static_cast<Eigen::Index>(j)) = q;
  if (rhs)
    for (const auto& [idx, c] : rhs->coeffs())
      for (const auto& [m, q] : c.terms()) out.b(row_of.at({idx, m})) = q;
  return out;
}

struct FlatDecomposition {
  DiffForm alpha;
  DiffForm theta;
  int residual_order = 0;
};

// omega_flat = d(x_p * pi^* alpha) + pi^* sigma + d(x_p^2 * theta), assuming
// sigma is the restriction of omega_flat to {x_p = 0}.
FlatDecomposition decompose_flat(const DiffForm& omega_flat, const DiffForm& sigma, int pivot) {
  const Chart& chart = omega_flat.chart();
  const TruncatedPoly xp = var_poly(chart, pivot);
  const DiffForm rho = omega_flat - lift_from_hyperplane(sigma, chart, pivot);
  const DiffForm with_dp = split_pivot(rho, pivot).first;
  const DiffForm primitive = integrate_pivot(with_dp, pivot);
  auto gamma = divide_coeffs(primitive, xp);
  if (!gamma)
    throw DomainError("decompose: pivot primitive is not divisible by the pivot variable");
  if (!equal_to_jet(ext_d(xp * *gamma), rho))
    throw DomainError("decompose: residual of the pivot primitive does not vanish at this jet");
  DiffForm alpha = restrict_to_hyperplane(*gamma, pivot);
  DiffForm eta = *gamma - lift_from_hyperplane(alpha, chart, pivot);
  auto theta = divide_coeffs(eta, xp);
  if (!theta)
    throw DomainError("decompose: higher-order remainder is not divisible by the pivot variable");
  FlatDecomposition out;
  out.alpha = std::move(alpha);
  out.theta = std::move(*theta);
  out.residual_order = clamp_jet(
      std::min({static_cast<long>(out.alpha.jet_order()), static_cast<long>(out.theta.jet_order()),
                static_cast<long>(sigma.jet_order()), static_cast<long>(omega_flat.jet_order())}));
  return out;
}

// dim of (kernel of omega^{n-1} at 0) meets (tangent space of the deeper
// degeneracy locus {x_p = 0, sigma-coefficients = 0} at 0). Both spaces and
// the intersection dimension transport under any equivalence.
int tangency_dimension(const DiffForm& omega_flat, const DiffForm& sigma, int pivot, int n) {
  const int dim = omega_flat.chart().dim();
  const RatMat kernel = kernel_at_0(wedge_power(omega_flat, n - 1));
  RatMat cuts = RatMat::Zero(1 + static_cast<Eigen::Index>(sigma.coeffs().size()), dim);
  cuts(0, pivot) = 1;
  Eigen::Index row = 1;
  for (const auto& [idx, c] : sigma.coeffs()) {
    const RatVec grad = c.gradient_at_zero();
    Eigen::Index s = 0;
    for (int j = 0; j < dim; ++j)
      if (j != pivot) cuts(row, j) = grad(s++);
    ++row;
  }
  const RatMat tangent = kernel_basis(cuts);
  RatMat stacked = RatMat::Zero(kernel.rows() + tangent.rows(), dim);
  for (Eigen::Index i = 0; i < kernel.rows(); ++i) stacked.row(i) = kernel.row(i);
  for (Eigen::Index i = 0; i < tangent.rows(); ++i) stacked.row(kernel.rows() + i) = tangent.row(i);
  return static_cast<int>(kernel.rows() + tangent.rows()) - rank(stacked);
}

Multi bump(Multi m, int var) {
  ++m[static_cast<size_t>(var)];
  return m;
}

}  // namespace

DiffForm relative_primitive_p1(const DiffForm& rho, int pivot) {
  const Chart& chart = rho.chart();
  if (pivot < 0 || pivot >= chart.dim())
    throw DomainError("relative_primitive_p1: pivot out of range");
  if (rho.degree() < 1 || rho.degree() > chart.dim())
    throw DomainError("relative_primitive_p1: degree out of range");
  if (!ext_d(rho).is_zero()) throw DomainError("relative_primitive_p1: input must be closed");
  const TruncatedPoly xp = var_poly(chart, pivot);
  const TruncatedPoly xp2 = xp * xp;
  const auto [with_dp, without_dp] = split_pivot(rho, pivot);
  if (!coeffs_divisible(with_dp, xp) || !coeffs_divisible(without_dp, xp2))
    throw DomainError(
        "relative_primitive_p1: coefficients do not vanish to second order on the hyperplane");
  const DiffForm primitive = integrate_pivot(with_dp, pivot);
  auto beta = divide_coeffs(primitive, xp2);
  if (!beta) throw DomainError("relative_primitive_p1: primitive is not divisible twice");
  if (!equal_to_jet(ext_d(xp2 * *beta), rho))
    throw DomainError("relative_primitive_p1: residual does not vanish at this jet");
  return *beta;
}

HomotopyPrimitive homotopy_primitive(const DiffForm& beta, const TruncatedPoly& f) {
  require_same_chart(beta.chart(), f.chart(), "homotopy_primitive");
  const Chart& chart = beta.chart();
  if (beta.degree() < 1) throw DomainError("homotopy_primitive: positive degree required");
  if (f.is_zero()) throw DomainError("homotopy_primitive: zero reference function");
  if (!ext_d(beta).is_zero()) throw DomainError("homotopy_primitive: input must be closed");
  const auto w = positive_weights(chart, "homotopy_primitive");

  // Per weighted grade d, the radial contraction divided by d inverts the
  // exterior derivative on closed forms: d(E _| b) = d * b - E _| db.
  DiffForm gamma = DiffForm::zero(chart, beta.degree() - 1, clamp_jet(beta.jet_order() + 1L));
  for (const auto& [idx, c] : beta.coeffs())
    for (const auto& [m, q] : c.terms()) {
      const long grade = weighted_degree(m, w) + index_weight(idx, w);
      for (size_t t = 0; t < idx.size(); ++t) {
        Idx rest;
        rest.reserve(idx.size() - 1);
        for (size_t s = 0; s < idx.size(); ++s)
          if (s != t) rest.push_back(idx[s]);
        Rational coef = q * Rational(w[static_cast<size_t>(idx[t])], grade);
        if (t % 2) coef = -coef;
        gamma.add_term(rest, TruncatedPoly::monomial(chart, bump(m, idx[t]), coef,
                                                     clamp_jet(c.jet_order() + 1L)));
      }
    }

  HomotopyPrimitive out;
  out.gamma = std::move(gamma);
  out.input_in_ideal = coeffs_divisible(beta, f);
  out.output_in_ideal = coeffs_divisible(out.gamma, f);
  return out;
}

DiffForm df_division(const DiffForm& beta, const TruncatedPoly& f, int residual_order) {
  require_same_chart(beta.chart(), f.chart(), "df_division");
  const Chart& chart = beta.chart();
  const int k = beta.degree();
  if (k < 1 || k > chart.dim()) throw DomainError("df_division: degree out of range");
  const DiffForm df = ext_d(DiffForm::from_poly(f));
  if (df.is_zero()) throw DomainError("df_division: df vanishes");
  if (!wedge(df, beta).is_zero()) throw DomainError("df_division: df ^ beta does not vanish");
  std::vector<TruncatedPoly> jac;
  jac.reserve(static_cast<size_t>(chart.dim()));
  for (int v = 0; v < chart.dim(); ++v) jac.push_back(partial(f, v));
  if (!ideal_power_bound(jac, 12))
    throw DomainError("df_division: no isolated-singularity certificate for f");

  const auto w = positive_weights(chart, "df_division");
  const auto df_pieces = graded_pieces(df, w);
  const long g0 = df_pieces.begin()->first;
  const DiffForm& low = df_pieces.begin()->second;
  DiffForm gamma = DiffForm::zero(chart, k - 1, kExactJet);
  const auto beta_pieces = graded_pieces(beta, w);
  if (beta_pieces.empty()) return gamma;
  for (const auto& [g, piece] : beta_pieces)
    if (g < g0)
      throw DomainError("df_division: no solution at order " + std::to_string(g));
  const long top = residual_order < 0 ? beta_pieces.rbegin()->first : residual_order;

  // Ascending greedy solve: the lowest graded piece of df matches each grade
  // of the remaining right-hand side in turn. When f is weight-homogeneous
  // there is a single piece and the grades decouple, so the result is exact.
  for (long g = g0; g <= top; ++g) {
    auto remainder = graded_pieces(beta - wedge(df, gamma), w);
    const auto it = remainder.find(g);
    if (it == remainder.end() || it->second.is_zero()) continue;
    const long h = g - g0;
    std::vector<DiffForm> cols;
    std::vector<std::pair<Multi, Idx>> basis;
    for (const Idx& idx : index_subsets(chart.dim(), k - 1)) {
      const long need = h - index_weight(idx, w);
      if (need < 0) continue;
      for (const Multi& m : monomials_of_weighted_degree(chart, need, w)) {
        DiffForm col = wedge(low, DiffForm::term(idx, TruncatedPoly::monomial(chart, m, 1, kExactJet)));
        if (col.is_zero()) continue;
        cols.push_back(std::move(col));
        basis.emplace_back(m, idx);
      }
    }
    const Assembly sys = assemble_columns(cols, &it->second);
    const auto x = solve_linear(sys.a, sys.b);
    if (!x) throw DomainError("df_division: no solution at order " + std::to_string(g));
    for (size_t j = 0; j < basis.size(); ++j)
      if ((*x)(static_cast<Eigen::Index>(j)) != 0)
        gamma.add_term(basis[j].second,
                       TruncatedPoly::monomial(chart, basis[j].first,
                                               (*x)(static_cast<Eigen::Index>(j)), kExactJet));
  }
  return gamma;
}

Decomposition decompose(const DiffForm& omega, int working_order) {
  MartinetData md = martinet_data(omega, working_order);
  if (!md.singular()) throw DomainError("decompose: form is nondegenerate at the origin");
  if (!md.structurally_smooth)
    throw DomainError("decompose: degeneracy locus is not structurally smooth");
  const int n = omega.chart().dim() / 2;
  FlatDecomposition fd = decompose_flat(md.omega_flat, *md.sigma, md.pivot);
  DiffForm annihilator = wedge(fd.alpha, wedge_power(*md.sigma, n - 1));
  if (!annihilator.truncated(std::min(annihilator.jet_order(), fd.residual_order)).is_zero())
    throw DomainError("decompose: alpha ^ sigma^{n-1} does not vanish; input is not a Martinet germ");
  Decomposition out;
  out.alpha = std::move(fd.alpha);
  out.sigma = *md.sigma;
  out.theta = std::move(fd.theta);
  out.residual_order = fd.residual_order;
  out.pivot = md.pivot;
  out.martinet = std::move(md);
  return out;
}

Realizability realizability(const DiffForm& sigma, int degree_bound, unsigned long long seed) {
  (void)seed;  // the search is exact linear algebra; kept for interface stability
  const Chart& chart = sigma.chart();
  const int dim = chart.dim();
  if (dim < 3 || dim % 2 == 0)
    throw DomainError("realizability: odd chart dimension of at least three required");
  if (sigma.degree() != 2) throw DomainError("realizability: 2-form required");
  if (!ext_d(sigma).is_zero()) throw DomainError("realizability: sigma must be closed");
  const int n = (dim + 1) / 2;
  const int r = rank_at_0(sigma);
  if (r < 2 * n - 4) return {RealizabilityStatus::not_realizable, std::nullopt};

  // Candidate annihilators alpha ^ sigma^{n-1} == 0 form a linear space; the
  // twist alpha ^ d(alpha) ^ sigma^{n-2} at 0 is a quadratic form on it and a
  // nonzero value yields the witness d(x_0 pi^* alpha) + pi^* sigma.
  const DiffForm power = wedge_power(sigma, n - 1);
  const DiffForm lower = wedge_power(sigma, n - 2);
  std::vector<std::pair<Multi, int>> basis;
  std::vector<DiffForm> cols;
  for (int v = 0; v < dim; ++v)
    for (int d = 0; d <= degree_bound; ++d)
      for (const Multi& m : monomials_of_degree(chart, d)) {
        basis.emplace_back(m, v);
        cols.push_back(wedge(DiffForm::term({v}, TruncatedPoly::monomial(chart, m, 1, kExactJet)),
                             power));
      }
  const Assembly sys = assemble_columns(cols, nullptr);
  const RatMat space = kernel_basis(sys.a);
  std::vector<DiffForm> candidates;
  for (Eigen::Index i = 0; i < space.rows(); ++i) {
    DiffForm alpha = DiffForm::zero(chart, 1, kExactJet);
    for (Eigen::Index j = 0; j < space.cols(); ++j)
      if (space(i, j) != 0)
        alpha.add_term({basis[static_cast<size_t>(j)].second},
                       TruncatedPoly::monomial(chart, basis[static_cast<size_t>(j)].first,
                                               space(i, j), kExactJet));
    candidates.push_back(std::move(alpha));
  }
  auto twist = [&](const DiffForm& a, const DiffForm& b) {
    return eval_at_0(wedge(wedge(a, ext_d(b)), lower) + wedge(wedge(b, ext_d(a)), lower));
  };
  for (size_t i = 0; i < candidates.size(); ++i)
    if (!twist(candidates[i], candidates[i]).is_zero())
      return {RealizabilityStatus::realizable, candidates[i]};
  for (size_t i = 0; i < candidates.size(); ++i)
    for (size_t j = i + 1; j < candidates.size(); ++j)
      if (!twist(candidates[i], candidates[j]).is_zero())
        return {RealizabilityStatus::realizable, candidates[i] + candidates[j]};
  if (r == 2 * n - 2)
    // Maximal-rank closed restrictions all match the corank-one model, which
    // is realized without a polynomial annihilator witness.
    return {RealizabilityStatus::realizable, std::nullopt};
  return {RealizabilityStatus::open, std::nullopt};
}

DiffForm from_volume(const TruncatedPoly& f) {
  const Chart& chart = f.chart();
  const int dim = chart.dim();
  if (dim < 2 || dim % 2) throw DomainError("from_volume: even-dimensional chart required");
  const int n = dim / 2;
  Rational factorial = 1;
  for (int i = 2; i <= n; ++i) factorial *= i;
  const TruncatedPoly g = (Rational(1) / factorial) * formal_integral(f, 0);
  DiffForm omega = ext_d(DiffForm::term({1}, g));
  for (int i = 2; i <= n; ++i)
    omega += DiffForm::term({2 * i - 2, 2 * i - 1}, one_poly(chart));
  return omega;
}

EquivalenceVerdict decide_equivalence(const DiffForm& omega0, const DiffForm& omega1,
                                      Category category, int working_order,
                                      unsigned long long seed) {
  require_same_chart(omega0.chart(), omega1.chart(), "decide_equivalence");
  const Chart& chart = omega0.chart();
  const int dim = chart.dim();
  if (dim < 4 || dim % 2)
    throw DomainError("decide_equivalence: even chart dimension of at least four required");
  if (omega0.degree() != 2 || omega1.degree() != 2)
    throw DomainError("decide_equivalence: 2-forms required");
  if (!ext_d(omega0).is_zero() || !ext_d(omega1).is_zero())
    throw DomainError("decide_equivalence: closed forms required");
  const int n = dim / 2;
  const bool complex_cat = category == Category::c_analytic;

  std::vector<std::string> ev;
  auto done = [&ev](Outcome o, const char* rule) {
    EquivalenceVerdict v;
    v.outcome = o;
    v.rule = rule;
    v.evidence = std::move(ev);
    return v;
  };

  if (omega0 == omega1) {
    ev.push_back("inputs agree coefficient by coefficient");
    return done(Outcome::equivalent, "identical-germs");
  }

  MartinetData md0 = martinet_data(omega0, working_order);
  MartinetData md1 = martinet_data(omega1, working_order);

  if (!md0.singular() && !md1.singular()) {
    ev.push_back("both volume densities are units at the origin");
    return done(Outcome::equivalent, "darboux-nondegenerate");
  }
  if (md0.singular() != md1.singular()) {
    ev.push_back(std::string("volume density vanishes at the origin for input ") +
                 (md0.singular() ? "0" : "1") + " only");
    return done(Outcome::not_equivalent, "degeneracy-mismatch");
  }
  if (md0.structurally_smooth != md1.structurally_smooth) {
    ev.push_back(std::string("degeneracy locus of input ") + (md0.structurally_smooth ? "0" : "1") +
                 " is structurally smooth, the other is not");
    return done(Outcome::not_equivalent, "locus-smoothness-mismatch");
  }

  if (!md0.structurally_smooth) {
    // Both loci are genuinely singular; only the sufficient route through a
    // quasi-homogeneous isolated singularity is available, so a failed
    // certificate never separates the germs.
    auto q = divide_exact(md1.f, md0.f);
    if (!q || sign(q->at_zero()) == 0) {
      ev.push_back("volume coefficients are not unit multiples; no move aligning the loci is implemented");
      return done(Outcome::inconclusive, "defining-function-mismatch");
    }
    std::vector<std::string> missing;
    const auto w = weights_or_unit(chart);
    const bool positive = std::all_of(w.begin(), w.end(), [](int x) { return x > 0; });
    if (positive && quasi_homogeneous_degree(md0.f, w))
      ev.push_back("defining function is weight-homogeneous for the chart weights");
    else
      missing.push_back("weight-homogeneous defining function");
    std::vector<TruncatedPoly> jac;
    for (int v = 0; v < dim; ++v) jac.push_back(partial(md0.f, v));
    if (auto bound = ideal_power_bound(jac, 12))
      ev.push_back("Jacobian ideal of the defining function contains m^" + std::to_string(*bound));
    else
      missing.push_back("isolated-singularity certificate");
    if (coeffs_divisible(wedge(ext_d(DiffForm::from_poly(md0.f)), omega1 - omega0), md0.f))
      ev.push_back("df ^ (omega1 - omega0) has every coefficient divisible by f");
    else
      missing.push_back("matching restrictions away from the singular point");
    ev.push_back("volume ratio at the origin is " + to_string(q->at_zero()));
    if (!complex_cat && sign(q->at_zero()) < 0)
      missing.push_back("matching orientation (positive volume ratio)");
    if (missing.empty()) return done(Outcome::equivalent, "quasi-homogeneous-locus-match");
    std::string gap = "unmet certificates:";
    for (const auto& m : missing) gap += " " + m + ";";
    gap.pop_back();
    ev.push_back(std::move(gap));
    return done(Outcome::inconclusive, "incomplete-certificates");
  }

  // Both structurally smooth: flatten, then align the pivot hyperplanes.
  DiffForm flat0 = md0.omega_flat;
  DiffForm flat1 = md1.omega_flat;
  if (md1.pivot != md0.pivot) {
    RatMat t = RatMat::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) t(i, i) = 1;
    t(md0.pivot, md0.pivot) = 0;
    t(md1.pivot, md1.pivot) = 0;
    t(md0.pivot, md1.pivot) = 1;
    t(md1.pivot, md0.pivot) = 1;
    flat1 = pullback(PolyMapGerm::linear(chart, chart, t), flat1);
    ev.push_back("swapped two coordinates to put both degeneracy loci on one hyperplane");
  }
  const MartinetData a0 = martinet_data(flat0, working_order);
  const MartinetData a1 = martinet_data(flat1, working_order);
  const int pivot = a0.pivot;
  const DiffForm& s0 = *a0.sigma;
  const DiffForm& s1 = *a1.sigma;

  const int r0 = rank_at_0(s0);
  const int r1 = rank_at_0(s1);
  if (r0 != r1) {
    ev.push_back("restriction ranks at the origin differ: " + std::to_string(r0) + " vs " +
                 std::to_string(r1));
    return done(Outcome::not_equivalent, "restriction-rank-mismatch");
  }
  ev.push_back("restriction rank at the origin is " + std::to_string(r0) + " for both inputs");
  if (r0 == 2 * n - 2) {
    ev.push_back("maximal restriction rank; one local model covers this case");
    return done(Outcome::equivalent, "corank-one-model");
  }
  if (r0 != 2 * n - 4) {
    ev.push_back("restriction rank falls outside the classified range");
    return done(Outcome::inconclusive, "unstructured-restriction");
  }

  const int span0 = first_jet_span_dim(s0, n);
  const int span1 = first_jet_span_dim(s1, n);
  if (span0 != span1) {
    ev.push_back("first-jet spans of sigma^{n-1} differ: dimension " + std::to_string(span0) +
                 " vs " + std::to_string(span1));
    return done(Outcome::not_equivalent, "jet-span-mismatch");
  }

  if (n == 2) {
    const Sigma22Data c0 = classify_sigma22_intrinsic(s0);
    const Sigma22Data c1 = classify_sigma22_intrinsic(s1);
    if (c0.label != c1.label) {
      ev.push_back(std::string("deeper degeneracy types differ: ") + to_string(c0.label) +
                   " vs " + to_string(c1.label));
      return done(Outcome::not_equivalent, "degeneracy-type-mismatch");
    }
    const int t0 = tangency_dimension(flat0, s0, pivot, n);
    const int t1 = tangency_dimension(flat1, s1, pivot, n);
    if (t0 != t1) {
      ev.push_back("kernel meets the tangent cone of the deeper degeneracy locus in dimension " +
                   std::to_string(t0) + " vs " + std::to_string(t1));
      return done(Outcome::not_equivalent, "kernel-position-mismatch");
    }
  }

  if (s0 != s1) {
    ev.push_back(
        "restrictions to the aligned degeneracy locus differ as germs; no normalization "
        "aligning them is implemented");
    return done(Outcome::inconclusive, "restrictions-differ");
  }

  const DiffForm& sigma = s0;
  const FlatDecomposition d0 = decompose_flat(flat0, sigma, pivot);
  const FlatDecomposition d1 = decompose_flat(flat1, sigma, pivot);
  const DiffForm lower = wedge_power(sigma, n - 2);
  const bool aligned = eval_at_0(wedge(wedge(d1.alpha, d0.alpha), lower)).is_zero();
  const ConstantTensor twist0 = eval_at_0(wedge(wedge(d0.alpha, ext_d(d0.alpha)), lower));
  const ConstantTensor twist1 = eval_at_0(wedge(wedge(d1.alpha, ext_d(d1.alpha)), lower));
  std::optional<Rational> ratio;
  if (!twist0.is_zero()) ratio = proportionality_ratio(twist1, twist0);

  std::vector<std::string> missing;
  if (aligned) {
    ev.push_back("alpha1 ^ alpha0 ^ sigma^{n-2} vanishes at the origin");
    if (ratio && (complex_cat || *ratio > 0)) {
      ev.push_back(complex_cat ? "twist ratio " + to_string(*ratio) +
                                     " is nonzero; complex rescaling absorbs its sign"
                               : "twist ratio at the origin is " + to_string(*ratio));
      const RatMat k0 = kernel_at_0(wedge_power(flat0, n - 1));
      const RatMat k1 = kernel_at_0(wedge_power(flat1, n - 1));
      return done(Outcome::equivalent,
                  subspace_equal(k0, k1) ? "kernel-invariants-match" : "annihilator-alignment");
    }
    missing.push_back("positive twist ratio");
  } else {
    missing.push_back("aligned annihilator constant parts");
  }

  if (n == 2) {
    if (!complex_cat) {
      const CoefficientIdeal ideal = coefficient_ideal(sigma, 6, seed);
      if (ideal.verdict == IdealVerdict::certified_regular) {
        ev.push_back("coefficient ideal of the restriction has a certified regular generating pair");
        return done(Outcome::equivalent, "regular-generators");
      }
      missing.push_back("regular coefficient ideal");
    }
    const KernelFieldResult kf = kernel_field_search(sigma, 8);
    if (kf.status == KernelFieldStatus::obstructed) {
      ev.push_back("restriction admits no nonvanishing kernel field (" + to_string(kf) + ")");
      if (complex_cat) return done(Outcome::equivalent, "kernel-field-obstruction");
      const int ps = orientation_pair_sign(a0, a1);
      ev.push_back(std::string("orientation pair sign is ") + (ps > 0 ? "+1" : "-1"));
      if (ps > 0) return done(Outcome::equivalent, "kernel-field-obstruction");
      return done(Outcome::not_equivalent, "orientation-mismatch");
    }
    missing.push_back("kernel-field obstruction");
  }

  if (span0 == 2) {
    if (complex_cat || orientation_pair_sign(a0, a1) > 0) {
      ev.push_back("first-jet span of sigma^{n-1} is two-dimensional" +
                   std::string(complex_cat ? "" : " and orientations agree"));
      return done(Outcome::equivalent, "jet-span-determined");
    }
    missing.push_back("matching orientation for the two-dimensional jet-span route");
  } else {
    missing.push_back("two-dimensional first-jet span");
  }

  std::string gap = "unmet certificates:";
  for (const auto& m : missing) gap += " " + m + ";";
  gap.pop_back();
  ev.push_back(std::move(gap));
  return done(Outcome::inconclusive, "no-certificate");
}

KernelTemplate fit_kernel_template(const DiffForm& omega, int working_order) {
  if (omega.chart().dim() != 4)
    throw DomainError("fit_kernel_template: four-dimensional chart required");
  MartinetData md = martinet_data(omega, working_order);
  if (!md.singular() || !md.structurally_smooth)
    throw DomainError(
        "fit_kernel_template: form must degenerate on a structurally smooth hypersurface");
  const FlatDecomposition fd = decompose_flat(md.omega_flat, *md.sigma, md.pivot);
  const DiffForm& sigma = *md.sigma;
  const Chart sub = sigma.chart();

  // alpha == dx_lead + (c + z) dx_other with constant c, z the last variable.
  auto match = [&](int lead, int other) -> std::optional<Rational> {
    DiffForm r = fd.alpha;
    r -= DiffForm::term({lead}, one_poly(sub));
    r -= DiffForm::term({other}, var_poly(sub, 2));
    if (!r.coeff({lead}).is_zero() || !r.coeff({2}).is_zero()) return std::nullopt;
    const TruncatedPoly c = r.coeff({other});
    if (c.degree() > 0) return std::nullopt;
    return c.at_zero();
  };

  const bool sigma_plane = sigma.coeff({0, 2}).is_zero() && sigma.coeff({1, 2}).is_zero();
  const TruncatedPoly g = sigma.coeff({0, 1});
  const bool g_flat = partial(g, 2).is_zero();
  if (fd.theta.is_zero() && sigma_plane && g_flat) {
    if (auto c = match(0, 1)) {
      KernelTemplate out;
      out.shape = g.is_zero() ? TemplateShape::degenerate : TemplateShape::first_shape;
      out.c = *c;
      out.g = g;
      return out;
    }
    if (auto c = match(1, 0)) {
      KernelTemplate out;
      out.shape = g.is_zero() ? TemplateShape::degenerate : TemplateShape::second_shape;
      out.c = *c;
      out.g = g;
      return out;
    }
  }

  const KernelFieldResult kf = kernel_field_search(sigma, 8);
  if (kf.status == KernelFieldStatus::obstructed)
    throw DomainError("fit_kernel_template: restriction admits no kernel frame (" + to_string(kf) +
                      ")");
  KernelTemplate out;
  out.shape = TemplateShape::no_fit;
  out.g = TruncatedPoly::zero(sub, kExactJet);
  return out;
}

DiffForm sigma22_family(const TruncatedPoly& b, const TruncatedPoly& h) {
  require_same_chart(b.chart(), h.chart(), "sigma22_family");
  const Chart& chart = b.chart();
  if (chart.dim() != 3) throw DomainError("sigma22_family: three-dimensional chart required");
  if (!partial(h, 0).is_zero())
    throw DomainError("sigma22_family: h must not involve the first variable");
  // d(sigma) = 0 forces da/dy1 = y1 db/dy3 - db/dy2; h is the free constant.
  const TruncatedPoly a =
      formal_integral(var_poly(chart, 0) * partial(b, 2) - partial(b, 1), 0) + h;
  const DiffForm eta1 = DiffForm::term({2}, one_poly(chart)) + DiffForm::term({1}, var_poly(chart, 0));
  const DiffForm eta2 = DiffForm::term({0}, b) + DiffForm::term({1}, -a);
  return wedge(eta1, eta2);
}

const char* to_string(RealizabilityStatus s) {
  switch (s) {
    case RealizabilityStatus::realizable:
      return "realizable";
    case RealizabilityStatus::not_realizable:
      return "not-realizable";
    case RealizabilityStatus::open:
      return "open";
  }
  return "open";
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::equivalent:
      return "equivalent";
    case Outcome::not_equivalent:
      return "not-equivalent";
    case Outcome::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

const char* to_string(Category c) {
  return c == Category::c_analytic ? "complex-analytic" : "real-analytic-or-smooth";
}

const char* to_string(TemplateShape s) {
  switch (s) {
    case TemplateShape::first_shape:
      return "first-shape";
    case TemplateShape::second_shape:
      return "second-shape";
    case TemplateShape::degenerate:
      return "degenerate";
    case TemplateShape::no_fit:
      return "no-fit";
  }
  return "no-fit";
}

}  // namespace martinet
