#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <martinet/invariants.hpp>

using namespace martinet;

namespace {

Chart pxyz() { return Chart({"p1", "x", "y", "z"}); }
Chart xyz() { return Chart({"x", "y", "z"}); }

TruncatedPoly var(const Chart& c, int i) { return TruncatedPoly::variable(c, i, kExactJet); }

TruncatedPoly cst(const Chart& c, long v) { return TruncatedPoly::constant(c, v, kExactJet); }

// dp1^dx - z dp1^dy + p1 dy^dz + x dx^dy
DiffForm omega0(const Chart& c) {
  DiffForm w = DiffForm::zero(c, 2, kExactJet);
  w.add_term({0, 1}, cst(c, 1));
  w.add_term({0, 2}, -var(c, 3));
  w.add_term({2, 3}, var(c, 0));
  w.add_term({1, 2}, var(c, 1));
  return w;
}

// dp1^dy + z dp1^dx - p1 dx^dz + x dx^dy
DiffForm omega1(const Chart& c) {
  DiffForm w = DiffForm::zero(c, 2, kExactJet);
  w.add_term({0, 2}, cst(c, 1));
  w.add_term({0, 1}, var(c, 3));
  w.add_term({1, 3}, -var(c, 0));
  w.add_term({1, 2}, var(c, 1));
  return w;
}

// a dy^dz + b dz^dx + c dx^dy on a 3-chart
DiffForm two_form(const Chart& c, const TruncatedPoly& a, const TruncatedPoly& b,
                  const TruncatedPoly& cc) {
  DiffForm w = DiffForm::zero(c, 2, kExactJet);
  if (!a.is_zero()) w.add_term({1, 2}, a);
  if (!b.is_zero()) w.add_term({0, 2}, -b);
  if (!cc.is_zero()) w.add_term({0, 1}, cc);
  return w;
}

// (dy3 + y1 dy2) ^ (b dy1 - a dy2)
DiffForm template_form(const Chart& c, const TruncatedPoly& b, const TruncatedPoly& a) {
  DiffForm w = DiffForm::zero(c, 2, kExactJet);
  w.add_term({0, 1}, -(var(c, 0) * b));
  w.add_term({0, 2}, -b);
  w.add_term({1, 2}, a);
  return w;
}

}  // namespace

TEST_CASE("martinet data reproduces the reference form exactly") {
  Chart c = pxyz();
  MartinetData md = martinet_data(omega0(c));

  CHECK(md.f == Rational(2) * var(c, 0));
  CHECK(md.f.jet_order() >= kExactJet);
  CHECK(md.structurally_smooth);
  CHECK(md.singular());
  CHECK(md.pivot == 0);
  CHECK(md.f_flat == md.f);  // zero set already flat, shear is the identity

  REQUIRE(md.sigma.has_value());
  const DiffForm& s = *md.sigma;
  CHECK(s.chart() == xyz());
  DiffForm expected = DiffForm::zero(s.chart(), 2, kExactJet);
  expected.add_term({0, 1}, var(s.chart(), 0));
  CHECK(s == expected);
  CHECK(s.jet_order() >= kExactJet);
}

TEST_CASE("martinet data on a symplectic form reports no singularity") {
  Chart c = pxyz();
  DiffForm w = DiffForm::zero(c, 2, kExactJet);
  w.add_term({0, 1}, cst(c, 1));
  w.add_term({2, 3}, cst(c, 1));
  MartinetData md = martinet_data(w);
  CHECK(md.f == cst(c, 2));
  CHECK(!md.singular());
  CHECK(!md.structurally_smooth);
  CHECK(!md.sigma.has_value());
}

TEST_CASE("martinet data flags a degenerate gradient") {
  // omega = p1^2 dp1^dx + dy^dz has omega^2 = 2 p1^2 vol
  Chart c = pxyz();
  DiffForm w = DiffForm::zero(c, 2, kExactJet);
  w.add_term({0, 1}, var(c, 0) * var(c, 0));
  w.add_term({2, 3}, cst(c, 1));
  MartinetData md = martinet_data(w);
  CHECK(md.singular());
  CHECK(!md.structurally_smooth);
}

TEST_CASE("martinet data rejects non-closed input") {
  Chart c = pxyz();
  DiffForm w = DiffForm::zero(c, 2, kExactJet);
  w.add_term({1, 2}, var(c, 0));  // d(p1 dx^dy) != 0
  CHECK_THROWS_AS(martinet_data(w), DomainError);
}

TEST_CASE("flattening straightens a curved hypersurface") {
  Chart c = pxyz();
  // shear p1 <- p1 + x^2 moves the singular set to {p1 = -x^2}
  std::vector<TruncatedPoly> comps = {var(c, 0) + var(c, 1) * var(c, 1), var(c, 1),
                                      var(c, 2), var(c, 3)};
  PolyMapGerm shear(c, c, comps);
  DiffForm curved = pullback(shear, omega0(c));

  MartinetData md = martinet_data(curved, 8);
  CHECK(md.pivot == 0);
  CHECK(md.structurally_smooth);
  CHECK(md.f == Rational(2) * var(c, 0) + Rational(2) * var(c, 1) * var(c, 1));
  CHECK(md.f_flat == Rational(2) * var(c, 0));
  // the recovered shear is the inverse of the one applied
  CHECK(md.flatten.component(0) ==
        (var(c, 0) - var(c, 1) * var(c, 1)).truncated(8));

  REQUIRE(md.sigma.has_value());
  DiffForm expected = DiffForm::zero(md.sigma->chart(), 2, 8);
  expected.add_term({0, 1}, TruncatedPoly::variable(md.sigma->chart(), 0, 8));
  CHECK(*md.sigma == expected);
}

TEST_CASE("orientation signs") {
  Chart c = pxyz();
  MartinetData m0 = martinet_data(omega0(c));
  MartinetData m1 = martinet_data(omega1(c));

  CHECK(orientation_sign(m0) == 1);
  CHECK(orientation_sign(m0, {0, 2, 1}) == -1);  // odd frame swap
  CHECK(orientation_pair_sign(m0, m1) == 1);     // common sigma, same side

  MartinetData doubled = martinet_data(Rational(2) * omega0(c));
  CHECK(orientation_pair_sign(m0, doubled) == 1);  // positive scaling

  // d(p1 (dx + z dy)) + x dx^dy squares to -2 p1 vol but restricts to the
  // same sigma: equal kernel data, opposite orientation
  DiffForm flipped = DiffForm::zero(c, 2, kExactJet);
  flipped.add_term({0, 1}, cst(c, 1));
  flipped.add_term({0, 2}, var(c, 3));
  flipped.add_term({2, 3}, -var(c, 0));
  flipped.add_term({1, 2}, var(c, 1));
  MartinetData mf = martinet_data(flipped);
  CHECK(mf.f == Rational(-2) * var(c, 0));
  CHECK(*mf.sigma == *m0.sigma);
  CHECK(orientation_pair_sign(m0, mf) == -1);

  // different hypersurface germs are not comparable
  std::vector<TruncatedPoly> comps = {var(c, 0) + var(c, 1) * var(c, 1), var(c, 1),
                                      var(c, 2), var(c, 3)};
  MartinetData curved = martinet_data(pullback(PolyMapGerm(c, c, comps), omega0(c)), 8);
  CHECK_THROWS_AS(orientation_pair_sign(m0, curved), DomainError);
}

TEST_CASE("first jet span dimension") {
  Chart c = xyz();

  DiffForm s0 = DiffForm::zero(c, 2, kExactJet);
  s0.add_term({0, 1}, var(c, 0));  // x dx^dy
  CHECK(first_jet_span_dim(s0, 2) == 1);

  // hyperbolic template b = y1, a = y2: coefficient gradients span rank 2
  DiffForm sh = template_form(c, var(c, 0), var(c, 1));
  CHECK(first_jet_span_dim(sh, 2) == 2);

  DiffForm constant_rank = DiffForm::zero(c, 2, kExactJet);
  constant_rank.add_term({0, 1}, cst(c, 1));
  CHECK_THROWS_AS(first_jet_span_dim(constant_rank, 2), DomainError);
}

TEST_CASE("coefficient ideal certifies a regular pair") {
  Chart c = xyz();
  // a = z, b = y, c chosen so alpha = dz + x dy annihilates
  DiffForm s = two_form(c, var(c, 2), var(c, 1), -(var(c, 0) * var(c, 1)));
  CoefficientIdeal ideal = coefficient_ideal(s);
  CHECK(ideal.certificate == Certificate::proved);
  CHECK(ideal.verdict == IdealVerdict::certified_regular);
  CHECK(!ideal.a.is_zero());
  CHECK(!ideal.b.is_zero());
  // the annihilator really kills sigma
  CHECK(wedge(ideal.alpha, s).is_zero());
}

TEST_CASE("coefficient ideal is inconclusive on a depth-one family") {
  Chart c = xyz();
  TruncatedPoly x = var(c, 0), y = var(c, 1), z = var(c, 2);
  // linear a, integrated b from the closing relation; both generators share
  // the factor x, so the zero sets meet in codimension one
  TruncatedPoly a = x + Rational(2) * y + Rational(3) * z;
  TruncatedPoly b = x * x - x;  // a3/3 = 1, a2/2 = 1
  DiffForm s = two_form(c, x * b, x * a, -(x * x * a));
  CoefficientIdeal ideal = coefficient_ideal(s);
  CHECK(ideal.certificate != Certificate::proved);
  CHECK(ideal.verdict == IdealVerdict::inconclusive);
  CHECK(wedge(ideal.alpha, s).is_zero());
}

TEST_CASE("coefficient ideal never certifies a vanishing generator") {
  Chart c = xyz();
  // x (dz + x dy) ^ dx: the dy^dz slot is empty
  DiffForm s = two_form(c, TruncatedPoly::zero(c, kExactJet), var(c, 0),
                        -(var(c, 0) * var(c, 0)));
  CoefficientIdeal ideal = coefficient_ideal(s);
  CHECK(ideal.verdict == IdealVerdict::inconclusive);
}

TEST_CASE("kernel field search finds witnesses") {
  Chart c = xyz();
  DiffForm s0 = DiffForm::zero(c, 2, kExactJet);
  s0.add_term({0, 1}, var(c, 0));  // x dx^dy
  KernelFieldResult r = kernel_field_search(s0);
  CHECK(r.status == KernelFieldStatus::exists);
  REQUIRE(r.witness.has_value());
  CHECK(interior(*r.witness, s0).is_zero());
  CHECK(sign(r.witness->at_zero()(2)) != 0);  // d/dz direction

  // coefficient without z-dependence: d/dz always works
  DiffForm s1 = DiffForm::zero(c, 2, kExactJet);
  s1.add_term({0, 1}, cst(c, 1) + var(c, 0) + var(c, 1) * var(c, 1));
  KernelFieldResult r1 = kernel_field_search(s1);
  CHECK(r1.status == KernelFieldStatus::exists);

  // nonlinear chart move of x dx^dy: a kernel field survives
  std::vector<TruncatedPoly> comps = {var(c, 0) + var(c, 1) * var(c, 1), var(c, 1),
                                      var(c, 2) + var(c, 0) * var(c, 0)};
  DiffForm moved = pullback(PolyMapGerm(c, c, comps), s0);
  CHECK(kernel_field_search(moved).status == KernelFieldStatus::exists);
}

TEST_CASE("kernel field search certifies obstructions") {
  Chart c = xyz();
  // regular coefficient pair (z, y): the constant jet dies at stage zero
  DiffForm s = two_form(c, var(c, 2), var(c, 1), -(var(c, 0) * var(c, 1)));
  KernelFieldResult r = kernel_field_search(s);
  CHECK(r.status == KernelFieldStatus::obstructed);
  CHECK(r.order == 0);

  // hyperbolic template: same conclusion
  DiffForm sh = template_form(c, var(c, 0), var(c, 1));
  CHECK(kernel_field_search(sh).status == KernelFieldStatus::obstructed);
}

TEST_CASE("regular coefficient ideal implies an obstructed kernel field") {
  Chart c = xyz();
  DiffForm s = two_form(c, var(c, 2), var(c, 1), -(var(c, 0) * var(c, 1)));
  CHECK(coefficient_ideal(s).verdict == IdealVerdict::certified_regular);
  CHECK(kernel_field_search(s).status == KernelFieldStatus::obstructed);
}

TEST_CASE("rank-zero classification by the template discriminant") {
  Chart c = xyz();
  Sigma22Data hyper = classify_sigma220(template_form(c, var(c, 0), var(c, 1)));
  CHECK(hyper.discriminant == Rational(1));
  CHECK(hyper.label == Sigma22Label::hyperbolic);

  Sigma22Data ell = classify_sigma220(template_form(c, var(c, 0), -var(c, 1)));
  CHECK(ell.discriminant == Rational(-1));
  CHECK(ell.label == Sigma22Label::elliptic);

  Sigma22Data par = classify_sigma220(template_form(c, var(c, 2), var(c, 1)));
  CHECK(par.discriminant == Rational(0));
  CHECK(par.label == Sigma22Label::parabolic);

  DiffForm off_template = DiffForm::zero(c, 2, kExactJet);
  off_template.add_term({0, 1}, var(c, 0));
  CHECK_THROWS_AS(classify_sigma220(off_template), DomainError);
}

TEST_CASE("intrinsic discriminant agrees with the template and scales by det^2") {
  Chart c = xyz();
  DiffForm sh = template_form(c, var(c, 0), var(c, 1));
  Sigma22Data direct = classify_sigma220(sh);
  Sigma22Data intrinsic = classify_sigma22_intrinsic(sh);
  CHECK(intrinsic.discriminant == direct.discriminant);
  CHECK(intrinsic.label == direct.label);

  DiffForm se = template_form(c, var(c, 0), -var(c, 1));
  CHECK(classify_sigma22_intrinsic(se).discriminant ==
        classify_sigma220(se).discriminant);

  RatMat m(3, 3);
  m << 2, 1, 0,
       0, 1, 0,
       0, 0, 3;  // det 6
  DiffForm moved = pullback(PolyMapGerm::linear(c, c, m), sh);
  Sigma22Data scaled = classify_sigma22_intrinsic(moved);
  CHECK(scaled.discriminant == Rational(36) * direct.discriminant);
  CHECK(scaled.label == direct.label);
}

TEST_CASE("full report on the reference form") {
  Chart c = pxyz();
  InvariantReport r = full_report(omega0(c));

  CHECK(r.n == 2);
  CHECK(r.martinet.structurally_smooth);
  REQUIRE(r.rank_sigma_0.has_value());
  CHECK(*r.rank_sigma_0 == 0);

  REQUIRE(r.kernel_basis.has_value());
  REQUIRE(r.kernel_basis->rows() == 2);
  RatMat expected(2, 4);
  expected << 0, 0, 1, 0,
              0, 0, 0, 1;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 4; ++j) CHECK((*r.kernel_basis)(i, j) == expected(i, j));

  CHECK(r.orientation == 1);
  CHECK(r.dim_span == 1);
  CHECK(r.classification == "sigma22_unclassified");
  REQUIRE(r.kernel_field.has_value());
  CHECK(r.kernel_field->status == KernelFieldStatus::exists);
  REQUIRE(r.ideal.has_value());
  CHECK(r.ideal->verdict == IdealVerdict::inconclusive);  // principal ideal (x)
}

TEST_CASE("full report kernels separate the reference pair") {
  Chart c = pxyz();
  InvariantReport r0 = full_report(omega0(c));
  InvariantReport r1 = full_report(omega1(c));

  REQUIRE(r0.kernel_basis.has_value());
  REQUIRE(r1.kernel_basis.has_value());
  CHECK(!subspace_equal(*r0.kernel_basis, *r1.kernel_basis));
  CHECK(*r0.rank_sigma_0 == *r1.rank_sigma_0);
  CHECK(r0.orientation == r1.orientation);
}

TEST_CASE("full report labels the rank-zero normal forms") {
  // omega = d(p1 (dy3 + y1 dy2)) + template sigma, built on a 4-chart with
  // p1 last so the restriction chart matches the template layout
  Chart c({"y1", "y2", "y3", "p1"});
  auto lift = [&](const DiffForm& sub) {
    // embed a form on (y1,y2,y3) into the 4-chart
    return lift_from_hyperplane(sub, c, 3);
  };
  Chart sub = c.drop(3);
  DiffForm sigma_h = template_form(sub, TruncatedPoly::variable(sub, 0, kExactJet),
                                   TruncatedPoly::variable(sub, 1, kExactJet));
  // d(p1 (dy3 + y1 dy2)) = dp1^dy3 + y1 dp1^dy2 + p1 dy1^dy2
  DiffForm w = DiffForm::zero(c, 2, kExactJet);
  w.add_term({2, 3}, -cst(c, 1));
  w.add_term({1, 3}, -var(c, 0));
  w.add_term({0, 1}, var(c, 3));
  w += lift(sigma_h);
  REQUIRE(ext_d(w).is_zero());

  InvariantReport r = full_report(w);
  CHECK(r.martinet.structurally_smooth);
  CHECK(*r.rank_sigma_0 == 0);
  CHECK(r.dim_span == 2);
  CHECK(r.classification == "sigma220_hyperbolic");
  REQUIRE(r.sigma22.has_value());
  CHECK(r.sigma22->discriminant == Rational(1));
  CHECK(r.kernel_field->status == KernelFieldStatus::obstructed);
}

TEST_CASE("full report respects linear chart moves") {
  Chart c = pxyz();
  RatMat m(4, 4);
  m << 1, 0, 0, 0,
       0, 1, 0, 0,
       0, 0, 0, 1,
       0, 0, 1, 0;  // swap y and z
  DiffForm moved = pullback(PolyMapGerm::linear(c, c, m), omega0(c));
  InvariantReport r = full_report(moved);
  CHECK(*r.rank_sigma_0 == 0);
  CHECK(r.dim_span == 1);
  CHECK(r.classification == "sigma22_unclassified");
}

TEST_CASE("full report on a non-smooth singularity") {
  Chart c = pxyz();
  DiffForm w = DiffForm::zero(c, 2, kExactJet);
  w.add_term({0, 1}, var(c, 0) * var(c, 0));
  w.add_term({2, 3}, cst(c, 1));
  InvariantReport r = full_report(w);
  CHECK(r.classification == "not_structurally_smooth");
  CHECK(!r.orientation.has_value());
  CHECK(!r.orientation_reason.empty());
}

TEST_CASE("full report on a symplectic form") {
  Chart c = pxyz();
  DiffForm w = DiffForm::zero(c, 2, kExactJet);
  w.add_term({0, 1}, cst(c, 1));
  w.add_term({2, 3}, cst(c, 1));
  InvariantReport r = full_report(w);
  CHECK(r.classification == "nonsingular");
  CHECK(r.kernel_basis->rows() == 0);
}
