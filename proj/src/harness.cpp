#include "martinet/harness.hpp"

#include <utility>

#include "martinet/exterior.hpp"
#include "martinet/linalg.hpp"

namespace martinet {

namespace {

// Exact determinant sign by Gaussian elimination with row swaps.
int sign_of_det(RatMat m) {
  const int n = static_cast<int>(m.rows());
  int s = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r) {
      if (sign(m(r, col)) != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) return 0;
    if (piv != col) {
      for (int c = col; c < n; ++c) std::swap(m(piv, c), m(col, c));
      s = -s;
    }
    s *= sign(m(col, col));
    for (int r = col + 1; r < n; ++r) {
      if (sign(m(r, col)) == 0) continue;
      const Rational factor = m(r, col) / m(col, col);
      for (int c = col; c < n; ++c) m(r, c) -= factor * m(col, c);
    }
  }
  return s;
}

}  // namespace

DiffeoGen::DiffeoGen(Chart chart, unsigned long long seed, int degree)
    : chart_(std::move(chart)), rng_(seed), degree_(degree) {
  if (degree_ < 1) throw DomainError("DiffeoGen: degree must be at least 1");
}

PolyMapGerm DiffeoGen::next() {
  const int dim = chart_.dim();
  std::uniform_int_distribution<int> entry(-2, 2);
  RatMat a = RatMat::Zero(dim, dim);
  do {
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) a(i, j) = Rational(entry(rng_));
  } while (rank(a) < dim);

  std::vector<TruncatedPoly> comps;
  comps.reserve(static_cast<size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    TruncatedPoly c = TruncatedPoly::zero(chart_, kExactJet);
    for (int j = 0; j < dim; ++j) {
      if (sign(a(i, j)) == 0) continue;
      c += a(i, j) * TruncatedPoly::variable(chart_, j, kExactJet);
    }
    comps.push_back(std::move(c));
  }

  std::bernoulli_distribution keep(0.10);
  std::uniform_int_distribution<int> num(1, 2);
  std::uniform_int_distribution<int> den(1, 3);
  std::bernoulli_distribution negate(0.5);
  for (int d = 2; d <= degree_; ++d) {
    for (const Multi& m : monomials_of_degree(chart_, d)) {
      for (int i = 0; i < dim; ++i) {
        if (!keep(rng_)) continue;
        Rational c = rational(num(rng_), den(rng_));
        if (negate(rng_)) c = -c;
        comps[static_cast<size_t>(i)] += TruncatedPoly::monomial(chart_, m, c, kExactJet);
      }
    }
  }
  return PolyMapGerm(chart_, chart_, std::move(comps));
}

PolyMapGerm formal_inverse(const PolyMapGerm& phi, int order) {
  const Chart& src = phi.source();
  const Chart& tgt = phi.target();
  if (src.dim() != tgt.dim()) throw DomainError("formal_inverse: map is not square");
  if (order < 1) throw DomainError("formal_inverse: order must be at least 1");
  const int dim = src.dim();
  const RatMat a = phi.jacobian_at_zero();
  const RatMat ainv = rat_inverse(a);

  // Tail of phi past its linear part, on the source chart.
  std::vector<TruncatedPoly> tail;
  tail.reserve(static_cast<size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    TruncatedPoly h = phi.components()[static_cast<size_t>(i)].truncated(order);
    for (int j = 0; j < dim; ++j) {
      if (sign(a(i, j)) == 0) continue;
      h -= a(i, j) * TruncatedPoly::variable(src, j, order);
    }
    tail.push_back(std::move(h));
  }

  // psi_0 = A^{-1} y, then psi <- A^{-1} (y - H(psi)). Each pass fixes one
  // more jet degree, so `order` passes suffice; stop early on a fixpoint.
  std::vector<TruncatedPoly> psi;
  psi.reserve(static_cast<size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    TruncatedPoly c = TruncatedPoly::zero(tgt, order);
    for (int j = 0; j < dim; ++j) {
      if (sign(ainv(i, j)) == 0) continue;
      c += ainv(i, j) * TruncatedPoly::variable(tgt, j, order);
    }
    psi.push_back(std::move(c));
  }
  for (int pass = 0; pass < order; ++pass) {
    std::vector<TruncatedPoly> h_at;
    h_at.reserve(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) h_at.push_back(tail[static_cast<size_t>(i)].compose(psi));
    std::vector<TruncatedPoly> next;
    next.reserve(static_cast<size_t>(dim));
    bool stable = true;
    for (int i = 0; i < dim; ++i) {
      TruncatedPoly c = TruncatedPoly::zero(tgt, order);
      for (int j = 0; j < dim; ++j) {
        if (sign(ainv(i, j)) == 0 && h_at[static_cast<size_t>(j)].is_zero()) continue;
        c += ainv(i, j) *
             (TruncatedPoly::variable(tgt, j, order) - h_at[static_cast<size_t>(j)]);
      }
      c = c.truncated(order);
      if (c != psi[static_cast<size_t>(i)]) stable = false;
      next.push_back(std::move(c));
    }
    psi = std::move(next);
    if (stable) break;
  }
  return PolyMapGerm(tgt, src, std::move(psi));
}

InvarianceSummary invariance_suite(const DiffForm& omega, int trials,
                                   unsigned long long seed, int working_order) {
  const Chart& chart = omega.chart();
  const int dim = chart.dim();
  if (dim < 4 || dim % 2 != 0)
    throw DomainError("invariance_suite: even chart dimension >= 4 required");
  const int n = dim / 2;

  InvarianceSummary summary;
  summary.trials = trials;

  const MartinetData md0 = martinet_data(omega, working_order);
  const RatMat k0 = kernel_at_0(wedge_power(omega, n - 1));
  const RatVec g0 = md0.f.gradient_at_zero();

  std::optional<int> rank0, span0;
  std::optional<Sigma22Label> label0;
  if (md0.sigma) {
    rank0 = rank_at_0(*md0.sigma);
    if (*rank0 == 2 * n - 4) span0 = first_jet_span_dim(*md0.sigma, n);
    if (n == 2 && *rank0 == 0) label0 = classify_sigma22_intrinsic(*md0.sigma).label;
  }
  std::optional<int> orient0;
  if (md0.singular() && md0.structurally_smooth) orient0 = orientation_sign(md0);

  std::mt19937_64 seeder(seed);
  for (int t = 0; t < trials; ++t) {
    const unsigned long long child = seeder();
    auto fail = [&](std::string what) {
      summary.issues.push_back({std::move(what), child});
    };

    DiffeoGen gen(chart, child);
    const PolyMapGerm phi = gen.next();
    const DiffForm w = pullback(phi, omega);
    const RatMat a = phi.jacobian_at_zero();
    const int sdet = sign_of_det(a);
    if (sdet == 0) {
      fail("generated map has a singular linear part");
      continue;
    }

    const MartinetData md1 = martinet_data(w, working_order);
    if (md1.singular() != md0.singular() ||
        md1.structurally_smooth != md0.structurally_smooth) {
      fail("degeneracy flags changed under pullback");
      continue;
    }

    // v' lies in ker omega'^{n-1}|_0 exactly when Av' lies in the original
    // kernel, so pushing the new basis through A must recover the old space.
    const RatMat k1 = kernel_at_0(wedge_power(w, n - 1));
    if (k1.rows() != k0.rows()) {
      fail("kernel dimension changed under pullback");
    } else if (k0.rows() > 0) {
      RatMat moved = RatMat::Zero(k1.rows(), dim);
      for (Eigen::Index r = 0; r < k1.rows(); ++r) {
        for (int c = 0; c < dim; ++c) {
          Rational s(0);
          for (int j = 0; j < dim; ++j) s += a(c, j) * k1(r, j);
          moved(r, c) = s;
        }
      }
      if (!subspace_equal(moved, k0)) fail("kernel position violates the transport law");
    }

    if (md0.sigma.has_value() != md1.sigma.has_value()) {
      fail("restriction availability changed under pullback");
    } else if (md1.sigma) {
      const int r1 = rank_at_0(*md1.sigma);
      if (rank0 && r1 != *rank0) {
        fail("restriction rank changed under pullback");
      } else {
        if (span0 && first_jet_span_dim(*md1.sigma, n) != *span0)
          fail("jet span dimension changed under pullback");
        if (label0 && classify_sigma22_intrinsic(*md1.sigma).label != *label0)
          fail("classification label changed under pullback");
      }
    }

    if (orient0) {
      // The new volume density is (f o phi) det Dphi, whose gradient at 0 is
      // det(A) A^T g0; pivot and orientation follow from that vector.
      RatVec moved_g = RatVec::Zero(dim);
      for (int i = 0; i < dim; ++i) {
        Rational s(0);
        for (int j = 0; j < dim; ++j) s += a(j, i) * g0(j);
        moved_g(i) = s;
      }
      const int p1 = md1.pivot;
      if (p1 < 0 || sign(moved_g(p1)) == 0) {
        fail("pivot escaped the transported gradient support");
      } else {
        const int predicted = sdet * sign(moved_g(p1)) * (p1 % 2 == 0 ? 1 : -1);
        if (orientation_sign(md1) != predicted)
          fail("orientation violates the transport law");
      }
    }

    const EquivalenceVerdict v =
        decide_equivalence(omega, w, Category::r_analytic_or_smooth, working_order);
    if (v.outcome == Outcome::not_equivalent) {
      fail("decision separated a form from its own pullback (rule " + v.rule + ")");
    } else if (v.outcome == Outcome::equivalent) {
      ++summary.decided_equivalent;
    } else {
      ++summary.inconclusive;
    }
  }
  return summary;
}

}  // namespace martinet
