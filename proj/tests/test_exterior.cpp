#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <martinet/exterior.hpp>

using namespace martinet;

namespace {

Chart pxyz() { return Chart({"p1", "x", "y", "z"}); }

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

}  // namespace

TEST_CASE("wedge is graded anticommutative") {
  Chart c = pxyz();
  DiffForm dx = DiffForm::term({1}, cst(c, 1));
  DiffForm dy = DiffForm::term({2}, cst(c, 1));
  DiffForm a = wedge(dx, dy);
  DiffForm b = wedge(dy, dx);
  CHECK(a == -b);
  CHECK(wedge(dx, dx).is_zero());

  // index normalization happens on insertion
  DiffForm direct = DiffForm::term({2, 1}, cst(c, -1));
  CHECK(a == direct);
}

TEST_CASE("exterior derivative squares to zero") {
  Chart c = pxyz();
  DiffForm a = DiffForm::zero(c, 1, 6);
  a.add_term({0}, var(c, 1).truncated(6) * var(c, 2).truncated(6));
  a.add_term({2}, var(c, 0).truncated(6) * var(c, 0).truncated(6) * var(c, 3).truncated(6));
  a.add_term({3}, cst(c, 5).truncated(6));
  DiffForm da = ext_d(a);
  CHECK(da.jet_order() == 5);
  CHECK(ext_d(da).is_zero());
}

TEST_CASE("Leibniz rule for d on products") {
  Chart c = pxyz();
  TruncatedPoly f = var(c, 0) * var(c, 2) + var(c, 3);
  DiffForm a = DiffForm::zero(c, 1, kExactJet);
  a.add_term({1}, var(c, 2));
  a.add_term({3}, var(c, 0) * var(c, 1));

  DiffForm lhs = ext_d(f * a);
  DiffForm rhs = wedge(ext_d(DiffForm::from_poly(f)), a) + f * ext_d(a);
  CHECK(lhs == rhs);
}

TEST_CASE("reference forms: square, closedness, restriction") {
  Chart c = pxyz();
  DiffForm w0 = omega0(c), w1 = omega1(c);

  CHECK(ext_d(w0).is_zero());
  CHECK(ext_d(w1).is_zero());

  DiffForm sq0 = wedge(w0, w0);
  DiffForm sq1 = wedge(w1, w1);
  DiffForm vol = standard_volume(c, kExactJet);
  DiffForm expect = (Rational(2) * var(c, 0)) * vol;
  CHECK(sq0 == expect);
  CHECK(sq1 == expect);

  // pullback to {p1 = 0}: both give x dx^dy in the 3-variable chart
  DiffForm s0 = restrict_to_hyperplane(w0, 0);
  DiffForm s1 = restrict_to_hyperplane(w1, 0);
  Chart sub = c.drop(0);
  DiffForm sigma = DiffForm::term({0, 1}, TruncatedPoly::variable(sub, 0, kExactJet));
  CHECK(s0 == sigma);
  CHECK(s1 == sigma);
}

TEST_CASE("pointwise kernels of the reference forms differ") {
  Chart c = pxyz();
  RatMat k0 = kernel_at_0(omega0(c));
  RatMat k1 = kernel_at_0(omega1(c));
  REQUIRE(k0.rows() == 2);
  REQUIRE(k1.rows() == 2);

  // canonical RREF bases: {e_y, e_z} and {e_x, e_z}
  CHECK(k0(0, 2) == 1);
  CHECK(k0(1, 3) == 1);
  CHECK(k0(0, 0) == 0);
  CHECK(k0(0, 1) == 0);
  CHECK(k1(0, 1) == 1);
  CHECK(k1(1, 3) == 1);
  CHECK(k1(0, 2) == 0);
  CHECK_FALSE(subspace_equal(k0, k1));
}

TEST_CASE("interior product") {
  Chart c = pxyz();
  DiffForm w0 = omega0(c);
  PolyVectorField dp = PolyVectorField::basis(c, 0, kExactJet);
  DiffForm got = interior(dp, w0);

  DiffForm expect = DiffForm::zero(c, 1, kExactJet);
  expect.add_term({1}, cst(c, 1));
  expect.add_term({2}, -var(c, 3));
  CHECK(got == expect);

  // contraction is an antiderivation: X .| (a^b) = (X .| a)^b + (-1)^deg a^(X .| b)
  DiffForm b = DiffForm::term({2, 3}, var(c, 1));
  DiffForm lhs = interior(dp, wedge(w0, b));
  DiffForm rhs = wedge(got, b) + wedge(w0, interior(dp, b));
  CHECK(lhs == rhs);
}

TEST_CASE("pullback along a polynomial map") {
  Chart c = pxyz();
  Chart tu({"s", "t"});
  // (s,t) -> (s t, t, s, 0)
  std::vector<TruncatedPoly> comps = {
      TruncatedPoly::variable(tu, 0, kExactJet) * TruncatedPoly::variable(tu, 1, kExactJet),
      TruncatedPoly::variable(tu, 1, kExactJet),
      TruncatedPoly::variable(tu, 0, kExactJet),
      TruncatedPoly::zero(tu, kExactJet)};
  PolyMapGerm f(tu, c, comps);

  // pull back dp1^dx = d(st)^dt = (t ds + s dt)^dt = t ds^dt
  DiffForm a = DiffForm::term({0, 1}, cst(c, 1));
  DiffForm got = pullback(f, a);
  DiffForm expect = DiffForm::term({0, 1}, TruncatedPoly::variable(tu, 1, kExactJet));
  CHECK(got == expect);

  // naturality: pullback commutes with d
  DiffForm b = DiffForm::term({1}, var(c, 0) * var(c, 2));
  CHECK(pullback(f, ext_d(b)) == ext_d(pullback(f, b)));
}

TEST_CASE("lift from the hyperplane is a section of restriction") {
  Chart c = pxyz();
  Chart sub = c.drop(0);
  DiffForm sigma = DiffForm::term({0, 1}, TruncatedPoly::variable(sub, 0, kExactJet));
  DiffForm lifted = lift_from_hyperplane(sigma, c, 0);
  CHECK(lifted.chart() == c);
  CHECK(restrict_to_hyperplane(lifted, 0) == sigma);
}

TEST_CASE("numeric evaluation hooks") {
  Chart c = pxyz();
  DiffForm w0 = omega0(c);
  double pt[4] = {0.5, 1.0, 2.0, -1.0};
  Eigen::MatrixXd m = form_matrix_at(w0, std::span<const double>(pt, 4));
  CHECK(m(0, 1) == doctest::Approx(1.0));
  CHECK(m(0, 2) == doctest::Approx(1.0));   // -z with z = -1
  CHECK(m(2, 3) == doctest::Approx(0.5));   // p1
  CHECK(m(1, 2) == doctest::Approx(1.0));   // x
  CHECK(m(1, 0) == doctest::Approx(-1.0));
  CHECK(rank_at_0(w0) == 2);
}
