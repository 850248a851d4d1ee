#include "martinet/invariants.hpp"

#include <algorithm>
#include <random>
#include <utility>

#include "martinet/linalg.hpp"

namespace martinet {

namespace {

std::vector<Multi> monomials_up_to(const Chart& chart, int d) {
  std::vector<Multi> out;
  for (int k = 0; k <= d; ++k) {
    auto mk = monomials_of_degree(chart, k);
    out.insert(out.end(), mk.begin(), mk.end());
  }
  return out;
}

int min_valuation(const DiffForm& a) {
  int v = a.jet_order() + 1;
  for (const auto& [idx, c] : a.coeffs()) v = std::min(v, c.valuation());
  return v;
}

int max_coeff_degree(const DiffForm& a) {
  int d = 0;
  for (const auto& [idx, c] : a.coeffs()) d = std::max(d, c.degree());
  return d;
}

// Kernel rows of the linear map (unknown coefficients) -> (coefficients of
// degree <= max_deg of the contribution combination). One column per
// contribution form; every contribution must be reliable to max_deg.
RatMat solution_space(const std::vector<DiffForm>& contribs, int max_deg) {
  const auto cols = static_cast<Eigen::Index>(contribs.size());
  std::map<std::pair<Idx, Multi>, int> row_of;
  for (const auto& c : contribs)
    for (const auto& [idx, poly] : c.coeffs())
      for (const auto& [m, v] : poly.terms())
        if (multi_degree(m) <= max_deg) row_of.try_emplace({idx, m}, 0);
  int nr = 0;
  for (auto& [key, pos] : row_of) pos = nr++;
  RatMat a = RatMat::Zero(std::max(nr, 1), cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (const auto& [idx, poly] : contribs[static_cast<size_t>(j)].coeffs())
      for (const auto& [m, v] : poly.terms())
        if (multi_degree(m) <= max_deg) a(row_of.at({idx, m}), j) = v;
  return kernel_basis(a);
}

TruncatedPoly unpack_poly(const Chart& chart, const RatVec& v,
                          const std::vector<Multi>& monoms, Eigen::Index offset) {
  TruncatedPoly p = TruncatedPoly::zero(chart, kExactJet);
  for (size_t m = 0; m < monoms.size(); ++m) {
    const Rational& c = v(offset + static_cast<Eigen::Index>(m));
    if (c != 0) p += TruncatedPoly::monomial(chart, monoms[m], c, kExactJet);
  }
  return p;
}

int permutation_sign(const std::vector<int>& perm) {
  int s = 1;
  for (size_t i = 0; i < perm.size(); ++i)
    for (size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) s = -s;
  return s;
}

Sigma22Label label_of(const Rational& disc) {
  int s = sign(disc);
  if (s > 0) return Sigma22Label::hyperbolic;
  if (s < 0) return Sigma22Label::elliptic;
  return Sigma22Label::parabolic;
}

}  // namespace

bool MartinetData::singular() const { return sign(f.at_zero()) == 0; }

MartinetData martinet_data(const DiffForm& omega, int working_order) {
  if (omega.degree() != 2) throw DomainError("martinet_data: degree-2 form required");
  const Chart& chart = omega.chart();
  if (chart.dim() % 2 != 0 || chart.dim() == 0)
    throw DomainError("martinet_data: even-dimensional chart required");
  const int n = chart.dim() / 2;
  if (!ext_d(omega).is_zero()) throw DomainError("martinet_data: closed form required");

  MartinetData md;
  md.f = top_coefficient(wedge_power(omega, n));
  md.flatten = PolyMapGerm::identity(chart);
  md.omega_flat = omega;
  md.f_flat = md.f;
  if (md.f.is_zero())
    throw DomainError(
        "martinet_data: omega^n vanishes at this jet order, the singular locus "
        "is not nowhere dense");
  if (sign(md.f.at_zero()) != 0) return md;  // nondegenerate at the origin

  RatVec grad = md.f.gradient_at_zero();
  int pivot = -1;
  for (Eigen::Index i = 0; i < grad.size(); ++i)
    if (grad(i) != 0) {
      pivot = static_cast<int>(i);
      break;
    }
  if (pivot < 0) return md;  // singular but not structurally smooth

  md.structurally_smooth = true;
  md.pivot = pivot;
  const int jet = working_order >= 0 ? working_order : std::min(omega.jet_order(), 12);

  // Straighten {f = 0}: solve f(x_p + phi(rest), rest) = divisible by x_p,
  // i.e. find the graph phi with f(phi(y), y) = 0, by Newton iteration. phi
  // never involves the pivot variable.
  auto at_graph = [&](const TruncatedPoly& g, const TruncatedPoly& phi) {
    std::vector<TruncatedPoly> images;
    images.reserve(static_cast<size_t>(chart.dim()));
    for (int j = 0; j < chart.dim(); ++j)
      images.push_back(j == pivot ? phi : TruncatedPoly::variable(chart, j, kExactJet));
    return g.compose(images);
  };
  TruncatedPoly dfp = partial(md.f, pivot);
  TruncatedPoly phi = TruncatedPoly::zero(chart, jet);
  TruncatedPoly residual = at_graph(md.f, phi);
  for (int it = 0; it < jet + 3 && !residual.is_zero(); ++it) {
    TruncatedPoly slope = at_graph(dfp, phi);
    phi = (phi - residual * unit_inverse(slope, jet)).truncated(jet);
    residual = at_graph(md.f, phi);
  }
  if (!residual.is_zero())
    throw Error("martinet_data: straightening iteration did not converge");

  if (!phi.is_zero()) {
    std::vector<TruncatedPoly> comps;
    comps.reserve(static_cast<size_t>(chart.dim()));
    for (int j = 0; j < chart.dim(); ++j) {
      TruncatedPoly xj = TruncatedPoly::variable(chart, j, kExactJet);
      comps.push_back(j == pivot ? xj + phi : xj);
    }
    md.flatten = PolyMapGerm(chart, chart, std::move(comps));
    md.omega_flat = pullback(md.flatten, omega);
    md.f_flat = pullback(md.flatten, md.f);
  }
  md.sigma = restrict_to_hyperplane(md.omega_flat, pivot);
  return md;
}

int orientation_sign(const MartinetData& md, const std::vector<int>& reference) {
  if (!md.structurally_smooth)
    throw DomainError("orientation_sign: structurally smooth data required");
  // f_flat = x_pivot * u, so u(0) is the linear coefficient of the pivot.
  Multi e(static_cast<size_t>(md.f_flat.chart().dim()), 0);
  e[static_cast<size_t>(md.pivot)] = 1;
  const Rational u0 = md.f_flat.coeff(e);
  if (u0 == 0) throw Error("orientation_sign: flattened data lost the pivot unit");
  int s = sign(u0) * (md.pivot % 2 == 0 ? 1 : -1);
  if (!reference.empty()) {
    const int sub_dim = md.f_flat.chart().dim() - 1;
    std::vector<int> seen(static_cast<size_t>(sub_dim), 0);
    if (static_cast<int>(reference.size()) != sub_dim)
      throw DomainError("orientation_sign: reference frame has the wrong size");
    for (int i : reference) {
      if (i < 0 || i >= sub_dim || seen[static_cast<size_t>(i)]++)
        throw DomainError("orientation_sign: reference frame is not a permutation");
    }
    s *= permutation_sign(reference);
  }
  return s;
}

int orientation_pair_sign(const MartinetData& md0, const MartinetData& md1) {
  if (!md0.structurally_smooth || !md1.structurally_smooth)
    throw DomainError("orientation_pair_sign: structurally smooth data required");
  require_same_chart(md0.f.chart(), md1.f.chart(), "orientation_pair_sign");
  auto q = divide_exact(md1.f, md0.f);
  if (!q || sign(q->at_zero()) == 0)
    throw DomainError(
        "orientation_pair_sign: volume coefficients are not unit multiples, the "
        "singular hypersurfaces differ");
  return sign(q->at_zero());
}

int first_jet_span_dim(const DiffForm& sigma, int n) {
  const Chart& chart = sigma.chart();
  if (sigma.degree() != 2 || chart.dim() != 2 * n - 1)
    throw DomainError("first_jet_span_dim: 2-form on a (2n-1)-chart required");
  if (rank_at_0(sigma) != 2 * n - 4)
    throw DomainError("first_jet_span_dim: rank at the origin must be 2n-4");
  DiffForm tau = wedge_power(sigma, n - 1);
  auto subsets = index_subsets(chart.dim(), chart.dim() - 1);
  RatMat rows = RatMat::Zero(static_cast<Eigen::Index>(subsets.size()), chart.dim());
  for (size_t i = 0; i < subsets.size(); ++i)
    rows.row(static_cast<Eigen::Index>(i)) = tau.coeff(subsets[i]).gradient_at_zero().transpose();
  return rank(rows);
}

CoefficientIdeal coefficient_ideal(const DiffForm& sigma, int degree_bound,
                                   unsigned long long seed) {
  const Chart& chart = sigma.chart();
  if (sigma.degree() != 2 || chart.dim() != 3)
    throw DomainError("coefficient_ideal: 2-form on a 3-chart required");
  if (sigma.is_zero()) throw DomainError("coefficient_ideal: zero form");

  const auto monoms = monomials_up_to(chart, degree_bound);
  const auto m_count = static_cast<Eigen::Index>(monoms.size());
  std::vector<DiffForm> contribs;
  contribs.reserve(3 * monoms.size());
  for (int i = 0; i < 3; ++i)
    for (const auto& m : monoms)
      contribs.push_back(
          wedge(DiffForm::term({i}, TruncatedPoly::monomial(chart, m, 1, kExactJet)), sigma));
  const int eq_deg = std::min(sigma.jet_order(), degree_bound + max_coeff_degree(sigma));
  RatMat sols = solution_space(contribs, eq_deg);
  if (sols.rows() == 0)
    throw DomainError("coefficient_ideal: no annihilating 1-form up to the degree bound");

  auto unpack = [&](const RatVec& v) {
    DiffForm alpha = DiffForm::zero(chart, 1, kExactJet);
    for (int i = 0; i < 3; ++i) {
      TruncatedPoly c = unpack_poly(chart, v, monoms, i * m_count);
      if (!c.is_zero()) alpha.add_term({i}, c);
    }
    return alpha;
  };
  auto is_contact = [&](const DiffForm& alpha) {
    return sign(wedge(alpha, ext_d(alpha)).coeff({0, 1, 2}).at_zero()) != 0;
  };

  // Probe the solution space for a contact representative that does not
  // vanish at the origin: basis rows, then pair sums, then seeded combos.
  std::optional<DiffForm> alpha;
  bool nonzero_at_origin = false;
  auto probe = [&](const RatVec& v) {
    if (v(0) == 0 && v(m_count) == 0 && v(2 * m_count) == 0) return false;
    nonzero_at_origin = true;
    DiffForm a = unpack(v);
    if (!is_contact(a)) return false;
    alpha = a;
    return true;
  };
  for (Eigen::Index r = 0; r < sols.rows() && !alpha; ++r) probe(sols.row(r).transpose());
  for (Eigen::Index r = 0; r < sols.rows() && !alpha; ++r)
    for (Eigen::Index s = r + 1; s < sols.rows() && !alpha; ++s)
      probe((sols.row(r) + sols.row(s)).transpose());
  std::mt19937_64 rng(seed ^ 0x51c0a7a1d2b3c4d5ULL);
  std::uniform_int_distribution<int> coeff(-2, 2);
  for (int trial = 0; trial < 8 && !alpha; ++trial) {
    RatVec v = RatVec::Zero(sols.cols());
    for (Eigen::Index r = 0; r < sols.rows(); ++r)
      v += Rational(coeff(rng)) * sols.row(r).transpose();
    probe(v);
  }
  if (!alpha)
    throw DomainError(nonzero_at_origin
                          ? "coefficient_ideal: no contact annihilator up to the degree bound"
                          : "coefficient_ideal: annihilators all vanish at the origin");

  // Linear frame with alpha|_0 = dz: two kernel vectors of the value covector
  // plus one vector pairing to 1.
  RatMat cov(1, 3);
  for (int i = 0; i < 3; ++i) cov(0, i) = alpha->coeff({i}).at_zero();
  RatMat ker = kernel_basis(cov);
  RatVec one(1);
  one(0) = 1;
  auto u3 = solve_linear(cov, one);
  if (ker.rows() != 2 || !u3) throw Error("coefficient_ideal: frame construction failed");
  RatMat m3(3, 3);
  for (int i = 0; i < 3; ++i) {
    m3(i, 0) = ker(0, i);
    m3(i, 1) = ker(1, i);
    m3(i, 2) = (*u3)(i);
  }
  PolyMapGerm rot = PolyMapGerm::linear(chart, chart, m3);
  DiffForm rotated = pullback(rot, sigma);

  CoefficientIdeal out;
  out.a = rotated.coeff({1, 2});
  out.b = Rational(-1) * rotated.coeff({0, 2});
  out.alpha = *alpha;
  out.chart_map = rot;
  out.certificate = regular_pair(out.a, out.b, seed);
  out.verdict = out.certificate == Certificate::proved ? IdealVerdict::certified_regular
                                                       : IdealVerdict::inconclusive;
  return out;
}

KernelFieldResult kernel_field_search(const DiffForm& sigma, int max_order) {
  const Chart& chart = sigma.chart();
  if (sigma.degree() < 1) throw DomainError("kernel_field_search: positive degree required");
  if (sigma.is_zero())
    return {KernelFieldStatus::exists, 0, PolyVectorField::basis(chart, 0, kExactJet)};

  const int dim = chart.dim();
  std::vector<DiffForm> hooks;
  hooks.reserve(static_cast<size_t>(dim));
  for (int i = 0; i < dim; ++i)
    hooks.push_back(interior(PolyVectorField::basis(chart, i, kExactJet), sigma));

  const int w = min_valuation(sigma);
  const bool exact = sigma.jet_order() >= kExactJet;
  const int top_deg = max_coeff_degree(sigma);
  // Stage k is sound only while the constraining coefficients stay below the
  // jet order of sigma.
  const int last_stage = exact ? max_order : std::min(max_order, sigma.jet_order() - w);
  if (last_stage < 0) return {KernelFieldStatus::open, -1, std::nullopt};

  for (int k = 0; k <= last_stage; ++k) {
    const auto monoms = monomials_up_to(chart, k);
    const auto m_count = static_cast<Eigen::Index>(monoms.size());
    std::vector<DiffForm> contribs;
    contribs.reserve(static_cast<size_t>(dim) * monoms.size());
    for (int i = 0; i < dim; ++i)
      for (const auto& m : monoms)
        contribs.push_back(TruncatedPoly::monomial(chart, m, 1, kExactJet) * hooks[static_cast<size_t>(i)]);

    // Any analytic solution's k-jet satisfies every coefficient equation of
    // degree <= k + valuation, so an empty constant slice is a certificate.
    RatMat feasible = solution_space(contribs, k + w);
    bool constants_alive = false;
    for (Eigen::Index r = 0; r < feasible.rows() && !constants_alive; ++r)
      for (int i = 0; i < dim && !constants_alive; ++i)
        if (feasible(r, static_cast<Eigen::Index>(i) * m_count) != 0) constants_alive = true;
    if (!constants_alive) return {KernelFieldStatus::obstructed, k, std::nullopt};

    const int full_deg = exact ? k + top_deg : sigma.jet_order();
    RatMat witnesses = solution_space(contribs, full_deg);
    for (Eigen::Index r = 0; r < witnesses.rows(); ++r) {
      RatVec v = witnesses.row(r).transpose();
      bool at_origin = false;
      for (int i = 0; i < dim && !at_origin; ++i)
        at_origin = v(static_cast<Eigen::Index>(i) * m_count) != 0;
      if (!at_origin) continue;
      std::vector<TruncatedPoly> comps;
      comps.reserve(static_cast<size_t>(dim));
      for (int i = 0; i < dim; ++i)
        comps.push_back(unpack_poly(chart, v, monoms, static_cast<Eigen::Index>(i) * m_count));
      return {KernelFieldStatus::exists, k, PolyVectorField(chart, std::move(comps))};
    }
  }
  return {KernelFieldStatus::open, last_stage, std::nullopt};
}

Sigma22Data classify_sigma220(const DiffForm& sigma) {
  const Chart& chart = sigma.chart();
  const int dim = chart.dim();
  if (sigma.degree() != 2 || dim < 3 || dim % 2 == 0)
    throw DomainError("classify_sigma220: 2-form on an odd chart of dimension >= 3 required");

  for (const auto& [idx, c] : sigma.coeffs()) {
    const bool y_block = idx[1] <= 2;
    const bool pair_block = idx[0] >= 3 && idx[1] == idx[0] + 1 && idx[0] % 2 == 1;
    if (!y_block && !pair_block)
      throw DomainError("classify_sigma220: template mismatch (stray coefficient)");
  }
  for (int v = 3; v + 1 < dim; v += 2) {
    TruncatedPoly c = sigma.coeff({v, v + 1});
    if (c != TruncatedPoly::constant(chart, 1, c.jet_order()))
      throw DomainError("classify_sigma220: template mismatch (pair block)");
  }

  TruncatedPoly a = sigma.coeff({1, 2});
  TruncatedPoly minus_b = sigma.coeff({0, 2});
  TruncatedPoly b = Rational(-1) * minus_b;
  if (sigma.coeff({0, 1}) != TruncatedPoly::variable(chart, 0, kExactJet) * minus_b)
    throw DomainError("classify_sigma220: template mismatch (y1-coupling)");
  if (sign(a.at_zero()) != 0 || sign(b.at_zero()) != 0)
    throw DomainError("classify_sigma220: template mismatch (nonzero value at the origin)");

  Sigma22Data out;
  const Rational b1 = partial(b, 0).at_zero();
  const Rational b2 = partial(b, 1).at_zero();
  const Rational a2 = partial(a, 1).at_zero();
  out.discriminant = b2 * b2 + b1 * a2;
  out.label = label_of(out.discriminant);
  return out;
}

Sigma22Data classify_sigma22_intrinsic(const DiffForm& sigma) {
  const Chart& chart = sigma.chart();
  if (sigma.degree() != 2 || chart.dim() != 3)
    throw DomainError("classify_sigma22_intrinsic: 2-form on a 3-chart required");
  if (rank_at_0(sigma) != 0)
    throw DomainError("classify_sigma22_intrinsic: the form must vanish at the origin");

  // X interior (dx^dy^dz) = sigma.
  RatMat a(3, 3);
  a.row(0) = sigma.coeff({1, 2}).gradient_at_zero().transpose();
  a.row(1) = (Rational(-1) * sigma.coeff({0, 2})).gradient_at_zero().transpose();
  a.row(2) = sigma.coeff({0, 1}).gradient_at_zero().transpose();
  Rational e2 = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) e2 += a(i, i) * a(j, j) - a(i, j) * a(j, i);

  Sigma22Data out;
  out.discriminant = -e2;
  out.label = label_of(out.discriminant);
  return out;
}

InvariantReport full_report(const DiffForm& omega, int working_order, int kernel_max_order,
                            unsigned long long seed) {
  const Chart& chart = omega.chart();
  if (chart.dim() < 4) throw DomainError("full_report: chart dimension at least four required");
  InvariantReport r;
  r.martinet = martinet_data(omega, working_order);
  r.n = chart.dim() / 2;
  r.kernel_basis = kernel_at_0(wedge_power(omega, r.n - 1));

  if (!r.martinet.singular()) {
    r.classification = "nonsingular";
    const char* why = "form is nondegenerate at the origin";
    r.orientation_reason = r.dim_span_reason = r.ideal_reason = r.kernel_field_reason = why;
    return r;
  }
  if (!r.martinet.structurally_smooth) {
    r.classification = "not_structurally_smooth";
    const char* why = "singular locus is not structurally smooth at the origin";
    r.orientation_reason = r.dim_span_reason = r.ideal_reason = r.kernel_field_reason = why;
    return r;
  }

  const DiffForm& sigma = *r.martinet.sigma;
  r.rank_sigma_0 = rank_at_0(sigma);
  r.orientation = orientation_sign(r.martinet);
  const int rk = *r.rank_sigma_0;

  if (rk == 2 * r.n - 2) {
    r.classification = "sigma20";
    const char* why = "rank 2n-2 regime, out of kernel-invariant scope";
    r.dim_span_reason = r.ideal_reason = r.kernel_field_reason = why;
    return r;
  }
  if (rk != 2 * r.n - 4) {
    r.classification = "sigma22_unclassified";
    r.dim_span_reason = "rank at the origin is neither 2n-2 nor 2n-4";
    r.kernel_field = kernel_field_search(sigma, kernel_max_order);
    r.ideal_reason = r.dim_span_reason;
    return r;
  }

  r.dim_span = first_jet_span_dim(sigma, r.n);
  r.kernel_field = kernel_field_search(sigma, kernel_max_order);
  if (sigma.chart().dim() == 3) {
    try {
      r.ideal = coefficient_ideal(sigma, 6, seed);
    } catch (const DomainError& e) {
      r.ideal_reason = e.what();
    }
  } else {
    r.ideal_reason = "coefficient ideal needs a three dimensional restriction chart";
  }

  if (*r.dim_span == 2) {
    try {
      Sigma22Data s = sigma.chart().dim() == 3 ? classify_sigma22_intrinsic(sigma)
                                               : classify_sigma220(sigma);
      r.sigma22 = s;
      switch (s.label) {
        case Sigma22Label::hyperbolic: r.classification = "sigma220_hyperbolic"; break;
        case Sigma22Label::elliptic: r.classification = "sigma220_elliptic"; break;
        case Sigma22Label::parabolic: r.classification = "sigma221_parabolic"; break;
      }
    } catch (const DomainError&) {
      r.classification = "sigma22_unclassified";
    }
  } else {
    r.classification = "sigma22_unclassified";
  }
  return r;
}

const char* to_string(IdealVerdict v) {
  return v == IdealVerdict::certified_regular ? "certified_regular" : "inconclusive";
}

const char* to_string(Sigma22Label l) {
  switch (l) {
    case Sigma22Label::hyperbolic: return "hyperbolic";
    case Sigma22Label::elliptic: return "elliptic";
    default: return "parabolic";
  }
}

std::string to_string(const KernelFieldResult& r) {
  switch (r.status) {
    case KernelFieldStatus::exists: return "exists";
    case KernelFieldStatus::obstructed: return "obstructed_at_order " + std::to_string(r.order);
    default: return "open_up_to_order " + std::to_string(r.order);
  }
}

}  // namespace martinet
