#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <martinet/exterior.hpp>
#include <martinet/moser.hpp>
#include <martinet/normal_form.hpp>

using namespace martinet;

namespace {

Chart pxyz() { return Chart({"p1", "x", "y", "z"}); }
Chart pq() { return Chart({"p1", "q1", "p2", "q2"}); }
Chart x4() { return Chart({"x1", "x2", "x3", "x4"}); }

TruncatedPoly var(const Chart& c, int i) { return TruncatedPoly::variable(c, i, kExactJet); }

TruncatedPoly cst(const Chart& c, long v) { return TruncatedPoly::constant(c, v, kExactJet); }

// d(p1 (dx - z dy)) + x dx^dy
DiffForm omega0(const Chart& c) {
  DiffForm w = DiffForm::zero(c, 2, kExactJet);
  w.add_term({0, 1}, cst(c, 1));
  w.add_term({0, 2}, -var(c, 3));
  w.add_term({2, 3}, var(c, 0));
  w.add_term({1, 2}, var(c, 1));
  return w;
}

DiffForm standard_symplectic(const Chart& c) {
  DiffForm w = DiffForm::zero(c, 2, kExactJet);
  w.add_term({0, 1}, cst(c, 1));
  w.add_term({2, 3}, cst(c, 1));
  return w;
}

}  // namespace

TEST_CASE("collar field reproduces the closed-form shear on the model pair") {
  Chart c = pq();
  const TruncatedPoly p = var(c, 0);
  DiffForm w0 = standard_symplectic(c);
  DiffForm w1 = w0 + ext_d((p * p) * (rational(1, 20) * DiffForm::term({3}, cst(c, 1))));

  MoserField field = moser_collar_field(w0, w1);
  CHECK(field.divisor == cst(c, 1));  // nondegenerate path: nothing divided out
  REQUIRE(field.den.size() == 3);
  CHECK(field.den[0] == cst(c, 2));
  CHECK(field.den[1].is_zero());
  CHECK(field.den[2].is_zero());
  // the only moving coordinate is p2, with rate -p1^2/20
  CHECK(field.num[2][0] == rational(-1, 10) * (p * p));
  CHECK(field.num[2][1].is_zero());
  for (int i : {0, 1, 3}) {
    CHECK(field.num[static_cast<size_t>(i)][0].is_zero());
    CHECK(field.num[static_cast<size_t>(i)][1].is_zero());
  }

  FlowOptions opt;
  opt.grid = 5;
  opt.steps = 200;
  opt.box = 0.1;
  FlowReport rep = verify_flow(field, opt);
  CHECK(rep.verified);
  CHECK(rep.points == 625);
  CHECK(rep.locus_points == 125);
  CHECK(rep.failures == 0);
  CHECK(rep.max_residual <= 1e-10);
  CHECK(rep.max_locus_drift <= 1e-12);
}

TEST_CASE("collar flow absorbs a quadratic correction across the degeneracy locus") {
  Chart c = pxyz();
  const TruncatedPoly p = var(c, 0);
  DiffForm w0 = omega0(c);
  DiffForm w1 = w0 + ext_d((p * p) * (rational(1, 10) * DiffForm::term({1}, var(c, 2))));

  MoserField field = moser_collar_field(w0, w1);
  CHECK(field.divisor == p);  // degenerate path: the collar variable cancels

  FlowOptions opt;
  opt.grid = 3;
  opt.steps = 120;
  opt.box = 0.05;
  FlowReport rep = verify_flow(field, opt);
  CHECK(rep.verified);
  CHECK(rep.points == 81);
  CHECK(rep.locus_points == 27);
  CHECK(rep.max_locus_drift <= 1e-12);
}

TEST_CASE("frame flow slides one kernel frame onto another over a fixed restriction") {
  Chart c = pxyz();
  Chart s = Chart({"x", "y", "z"});
  const TruncatedPoly p = var(c, 0);

  DiffForm alpha0 = DiffForm::term({0}, cst(s, 1)) + DiffForm::term({1}, -var(s, 2));
  DiffForm alpha1 = alpha0 + DiffForm::term({0}, var(s, 1));
  DiffForm sigma = DiffForm::term({0, 1}, var(s, 0));

  DiffForm w0 = ext_d(p * lift_from_hyperplane(alpha0, c, 0)) + lift_from_hyperplane(sigma, c, 0);
  DiffForm w1 = ext_d(p * lift_from_hyperplane(alpha1, c, 0)) + lift_from_hyperplane(sigma, c, 0);
  REQUIRE(w0 == omega0(c));

  MoserField field = moser_frame_field(w0, w1);
  CHECK(field.divisor == p);

  FlowOptions opt;
  opt.grid = 3;
  opt.steps = 150;
  opt.box = 0.05;
  FlowReport rep = verify_flow(field, opt);
  CHECK(rep.verified);
  CHECK(rep.max_locus_drift <= 1e-12);
}

TEST_CASE("volume flow matches a pair with the same singular density") {
  Chart c = x4();
  TruncatedPoly f = var(c, 0) * var(c, 0) + var(c, 1) * var(c, 1) + var(c, 2) * var(c, 2) +
                    var(c, 3) * var(c, 3);
  DiffForm w0 = from_volume(f);
  DiffForm w1 = w0 + ext_d((f * f) * (rational(1, 10) * DiffForm::term({3}, var(c, 2))));

  MoserField field = moser_volume_field(w0, w1);
  CHECK(field.divisor == f);

  FlowOptions opt;
  opt.grid = 3;
  opt.steps = 150;
  opt.box = 0.05;
  FlowReport rep = verify_flow(field, opt);
  CHECK(rep.verified);
  CHECK(rep.locus_points == 1);  // only the origin lies on {f = 0}
  CHECK(rep.max_locus_drift <= 1e-12);
}

TEST_CASE("field construction validates its inputs") {
  Chart c = pq();
  const TruncatedPoly p = var(c, 0);
  DiffForm w0 = standard_symplectic(c);

  // only first-order vanishing at the collar: no relative primitive
  DiffForm w1 = w0 + ext_d(p * (rational(1, 20) * DiffForm::term({3}, cst(c, 1))));
  CHECK_THROWS_AS(moser_collar_field(w0, w1), DomainError);

  // a primitive of the wrong difference
  DiffForm wrong = rational(1, 7) * DiffForm::term({1}, var(c, 0));
  CHECK_THROWS_AS(moser_field(w0, w0, wrong, cst(c, 1), p), DomainError);

  // densities with different zero sets cannot share a factor
  Chart q = x4();
  TruncatedPoly f = var(q, 0) * var(q, 0) + var(q, 1) * var(q, 1) + var(q, 2) * var(q, 2) +
                    var(q, 3) * var(q, 3);
  TruncatedPoly g = f + var(q, 0) * var(q, 0);
  CHECK_THROWS_AS(moser_volume_field(from_volume(f), from_volume(g)), DomainError);
}

TEST_CASE("jittered sampling is deterministic in the seed") {
  Chart c = pq();
  const TruncatedPoly p = var(c, 0);
  DiffForm w0 = standard_symplectic(c);
  DiffForm w1 = w0 + ext_d((p * p) * (rational(1, 20) * DiffForm::term({3}, cst(c, 1))));
  MoserField field = moser_collar_field(w0, w1);

  FlowOptions opt;
  opt.grid = 2;
  opt.steps = 20;
  opt.box = 0.05;
  opt.seed = 7;
  FlowReport a = verify_flow(field, opt);
  FlowReport b = verify_flow(field, opt);
  CHECK(a.max_residual == b.max_residual);
  CHECK(a.worst.start == b.worst.start);
  CHECK(a.worst.end == b.worst.end);

  opt.seed = 8;
  FlowReport d = verify_flow(field, opt);
  CHECK(a.worst.start != d.worst.start);
}
