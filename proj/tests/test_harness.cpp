#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "martinet/dsl.hpp"
#include "martinet/exterior.hpp"
#include "martinet/harness.hpp"
#include "martinet/linalg.hpp"

using namespace martinet;

namespace {

Chart pxyz() { return Chart({"p1", "x", "y", "z"}); }

DiffForm omega0() { return parse_form("d(p1 ^ (dx - z ^ dy)) + x ^ dx ^ dy", pxyz()); }

}  // namespace

TEST_CASE("formal_inverse inverts a shear exactly") {
  Chart c({"x", "y"});
  const TruncatedPoly x = TruncatedPoly::variable(c, 0, kExactJet);
  const TruncatedPoly y = TruncatedPoly::variable(c, 1, kExactJet);
  PolyMapGerm phi(c, c, {x + y * y, y});
  PolyMapGerm psi = formal_inverse(phi, 4);
  CHECK(psi.components()[0] == x - y * y);
  CHECK(psi.components()[1] == y);
}

TEST_CASE("formal_inverse composes to the identity through the jet order") {
  DiffeoGen gen(pxyz(), 17);
  const PolyMapGerm phi = gen.next();
  const PolyMapGerm psi = formal_inverse(phi, 6);
  const PolyMapGerm left = compose(phi, psi);
  const PolyMapGerm right = compose(psi, phi);
  for (int i = 0; i < 4; ++i) {
    const TruncatedPoly id = TruncatedPoly::variable(pxyz(), i, 6);
    CHECK(left.components()[static_cast<size_t>(i)].truncated(6) == id);
    CHECK(right.components()[static_cast<size_t>(i)].truncated(6) == id);
  }
}

TEST_CASE("DiffeoGen draws are seed deterministic and invertible") {
  DiffeoGen g1(pxyz(), 42), g2(pxyz(), 42), g3(pxyz(), 43);
  const PolyMapGerm a = g1.next();
  const PolyMapGerm b = g2.next();
  const PolyMapGerm c = g3.next();
  bool same_seed_same_map = true;
  bool other_seed_same_map = true;
  for (size_t i = 0; i < 4; ++i) {
    same_seed_same_map = same_seed_same_map && (a.components()[i] == b.components()[i]);
    other_seed_same_map = other_seed_same_map && (a.components()[i] == c.components()[i]);
  }
  CHECK(same_seed_same_map);
  CHECK_FALSE(other_seed_same_map);
  CHECK(rank(a.jacobian_at_zero()) == 4);
  for (size_t i = 0; i < 4; ++i)  // degree cap: nothing past degree 3
    CHECK(a.components()[i].truncated(3) == a.components()[i]);

  const PolyMapGerm d = g1.next();
  bool next_draw_same = true;
  for (size_t i = 0; i < 4; ++i)
    next_draw_same = next_draw_same && (a.components()[i] == d.components()[i]);
  CHECK_FALSE(next_draw_same);
}

TEST_CASE("orientation transport matches the gradient law") {
  const DiffForm w0 = omega0();
  const MartinetData md0 = martinet_data(w0, 8);
  REQUIRE(md0.pivot == 0);
  REQUIRE(orientation_sign(md0) == 1);

  // Swapping the pivot with x has det -1 and moves the pivot to an odd slot,
  // so the two sign flips cancel.
  RatMat swap01 = RatMat::Zero(4, 4);
  swap01(0, 1) = 1;
  swap01(1, 0) = 1;
  swap01(2, 2) = 1;
  swap01(3, 3) = 1;
  const MartinetData ms =
      martinet_data(pullback(PolyMapGerm::linear(pxyz(), pxyz(), swap01), w0), 8);
  CHECK(ms.pivot == 1);
  CHECK(orientation_sign(ms) == 1);

  // Reflecting x keeps the pivot but negates the volume density.
  RatMat flipx = RatMat::Zero(4, 4);
  flipx(0, 0) = 1;
  flipx(1, 1) = -1;
  flipx(2, 2) = 1;
  flipx(3, 3) = 1;
  const MartinetData mf =
      martinet_data(pullback(PolyMapGerm::linear(pxyz(), pxyz(), flipx), w0), 8);
  CHECK(mf.pivot == 0);
  CHECK(orientation_sign(mf) == -1);
}

TEST_CASE("invariance suite accepts the standard singular germ") {
  const InvarianceSummary s = invariance_suite(omega0(), 5, 2026);
  CHECK(s.trials == 5);
  for (const auto& issue : s.issues) MESSAGE(issue.what, " seed=", issue.seed);
  CHECK(s.ok());
  CHECK(s.decided_equivalent + s.inconclusive == 5);
}

TEST_CASE("invariance suite decides nondegenerate pullbacks outright") {
  const DiffForm symp = parse_form("dp1 ^ dx + dy ^ dz", pxyz());
  const InvarianceSummary s = invariance_suite(symp, 3, 7);
  for (const auto& issue : s.issues) MESSAGE(issue.what, " seed=", issue.seed);
  CHECK(s.ok());
  CHECK(s.decided_equivalent == 3);
}
