#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <martinet/poly.hpp>

using namespace martinet;

namespace {

Chart xy() { return Chart({"x", "y"}); }

TruncatedPoly var(const Chart& c, int i, int jet = kExactJet) {
  return TruncatedPoly::variable(c, i, jet);
}

}  // namespace

TEST_CASE("arithmetic and truncation") {
  Chart c = xy();
  TruncatedPoly x = var(c, 0, 2), y = var(c, 1, 2);
  TruncatedPoly one = TruncatedPoly::constant(c, 1, 2);

  TruncatedPoly a = one + x;                    // 1 + x
  TruncatedPoly b = one - x + x * x;            // 1 - x + x^2
  TruncatedPoly p = a * b;                      // 1 + x^3, dropped past jet 2

  CHECK(p.jet_order() == 2);
  CHECK(p == TruncatedPoly::constant(c, 1, 2));
  CHECK(p.coeff({3, 0}) == 0);

  // valuation of a factor extends the reliable order of the product
  TruncatedPoly q = var(c, 0) * (TruncatedPoly::constant(c, 1, 3) + var(c, 1, 3));
  CHECK(q.jet_order() == 4);
  CHECK(q.coeff({1, 0}) == 1);
  CHECK(q.coeff({1, 1}) == 1);
}

TEST_CASE("valuation and degree bookkeeping") {
  Chart c = xy();
  TruncatedPoly z = TruncatedPoly::zero(c, 5);
  CHECK(z.valuation() == 6);
  CHECK(z.is_zero());

  TruncatedPoly p = var(c, 0) * var(c, 1) + TruncatedPoly::monomial(c, {0, 3}, 1, kExactJet);
  CHECK(p.valuation() == 2);
  CHECK(p.degree() == 3);
  CHECK(p.jet_order() == kExactJet);
}

TEST_CASE("partial derivative and formal integral") {
  Chart c = xy();
  // factor valuations push the product jet from 4 up to 6
  TruncatedPoly p = var(c, 0, 4) * var(c, 0, 4) * var(c, 1, 4);
  CHECK(p.jet_order() == 6);

  TruncatedPoly dx = partial(p, 0);
  CHECK(dx.jet_order() == 5);
  CHECK(dx.coeff({1, 1}) == 2);

  // integrate back in x: recovers p up to the jet bound
  TruncatedPoly back = formal_integral(dx, 0);
  CHECK(back.jet_order() == 6);
  CHECK(back.coeff({2, 1}) == 1);

  TruncatedPoly exact = var(c, 0) * var(c, 1);
  CHECK(partial(exact, 1).jet_order() == kExactJet);
}

TEST_CASE("composition with vanishing images") {
  Chart c = xy();
  Chart tu({"t", "u"});
  TruncatedPoly p = var(c, 0) * var(c, 0) + var(c, 1);  // x^2 + y

  std::vector<TruncatedPoly> im = {
      var(tu, 0) + var(tu, 1) * var(tu, 1),   // x -> t + u^2
      -(var(tu, 0) * var(tu, 0)),             // y -> -t^2
  };
  TruncatedPoly q = p.compose(im);
  // (t + u^2)^2 - t^2 = 2 t u^2 + u^4
  CHECK(q.coeff({2, 0}) == 0);
  CHECK(q.coeff({1, 2}) == 2);
  CHECK(q.coeff({0, 4}) == 1);
}

TEST_CASE("quasi-homogeneous degree detection") {
  Chart c({"x", "y"}, std::vector<int>{3, 2});
  TruncatedPoly f = var(c, 0) * var(c, 0) + var(c, 1) * var(c, 1) * var(c, 1);
  auto d = quasi_homogeneous_degree(f, c.weights().value());
  REQUIRE(d.has_value());
  CHECK(*d == 6);

  TruncatedPoly g = f + var(c, 1);
  CHECK_FALSE(quasi_homogeneous_degree(g, c.weights().value()).has_value());
}

TEST_CASE("unit inverse by Newton iteration") {
  Chart c = xy();
  TruncatedPoly u = TruncatedPoly::constant(c, 1, 4) + var(c, 0, 4);
  TruncatedPoly v = unit_inverse(u);
  CHECK(v.coeff({0, 0}) == 1);
  CHECK(v.coeff({1, 0}) == -1);
  CHECK(v.coeff({2, 0}) == 1);
  CHECK(v.coeff({3, 0}) == -1);
  CHECK(v.coeff({4, 0}) == 1);
  CHECK(u * v == TruncatedPoly::constant(c, 1, 4));

  TruncatedPoly two = TruncatedPoly::constant(c, 2, kExactJet) + var(c, 1);
  CHECK((two * unit_inverse(two, 6)).coeff({0, 0}) == 1);
}

TEST_CASE("exact division by a non-unit") {
  Chart c = xy();
  TruncatedPoly x = var(c, 0), y = var(c, 1);
  TruncatedPoly f = x * x - x;

  TruncatedPoly g = (y + TruncatedPoly::constant(c, 3, kExactJet)) * f;
  auto q = divide_exact(g, f);
  REQUIRE(q.has_value());
  CHECK(*q == y + TruncatedPoly::constant(c, 3, kExactJet));

  CHECK_FALSE(divide_exact(y, x).has_value());
  CHECK_FALSE(divide_exact(x * x + y * y, x).has_value());

  auto q2 = divide_exact(x * y + x * x * y,  x);
  REQUIRE(q2.has_value());
  CHECK(*q2 == y + x * y);
}

TEST_CASE("unit multiple recognition") {
  Chart c = xy();
  TruncatedPoly x = var(c, 0), y = var(c, 1);
  TruncatedPoly f = x * x - x;
  TruncatedPoly unit = TruncatedPoly::constant(c, -2, kExactJet) + x + y;

  CHECK(is_unit_multiple(unit * f, f));
  CHECK_FALSE(is_unit_multiple(x * f, f));
  CHECK_FALSE(is_unit_multiple(x * y, f));
}

TEST_CASE("evaluation") {
  Chart c = xy();
  TruncatedPoly p = var(c, 0) * var(c, 1) + TruncatedPoly::constant(c, rational(1, 2), kExactJet);
  std::vector<Rational> at = {Rational(2), Rational(3)};
  CHECK(p.evaluate_exact(at) == rational(13, 2));

  double v = p.evaluate(std::vector<double>{2.0, 3.0});
  CHECK(v == doctest::Approx(6.5));
}

TEST_CASE("printing follows the expression grammar") {
  Chart c = xy();
  TruncatedPoly p = rational(3, 2) * var(c, 0) * var(c, 0) * var(c, 1) - var(c, 1);
  CHECK(p.to_string() == "3/2*x*x*y - y");
  CHECK(TruncatedPoly::zero(c, 3).to_string() == "0");
}
