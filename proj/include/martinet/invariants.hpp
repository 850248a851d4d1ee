#pragma once

#include <optional>
#include <string>
#include <vector>

#include "martinet/exterior.hpp"
#include "martinet/form.hpp"
#include "martinet/local_algebra.hpp"

namespace martinet {

// Volume expansion omega^n = f * Omega together with the chart move that
// straightens the zero set of f. `flatten` maps new coordinates to old ones;
// it is the identity unless f is structurally smooth (f(0) = 0, df|_0 != 0),
// in which case it is a shear along the pivot variable and f_flat = f after
// the shear is divisible by that variable. sigma is the restriction of the
// sheared form to {x_pivot = 0}.
struct MartinetData {
  TruncatedPoly f;
  bool structurally_smooth = false;
  int pivot = -1;
  PolyMapGerm flatten;
  DiffForm omega_flat;
  TruncatedPoly f_flat;
  std::optional<DiffForm> sigma;

  bool singular() const;  // f(0) == 0
};

// working_order bounds the straightening jet; the shear is a power series in
// general, so exact input still yields a finite jet unless the zero set is
// already flat. Negative selects min(jet of omega, 12).
MartinetData martinet_data(const DiffForm& omega, int working_order = -1);

// Sign of the induced volume on {f = 0} against a reference frame (a
// permutation of the restricted chart variables; empty means the natural
// order). The induced volume V satisfies df_flat ^ V = ambient volume.
int orientation_sign(const MartinetData& md, const std::vector<int>& reference = {});

// Orientation comparison for two forms whose singular hypersurfaces agree as
// germs: the sign of (f1/f0)(0). Throws when f1/f0 is not a unit.
int orientation_pair_sign(const MartinetData& md0, const MartinetData& md1);

// Dimension of the span of the linear parts of the coefficients of
// sigma^(n-1) on a (2n-1)-dimensional chart. Requires rank sigma|_0 = 2n-4,
// which makes the span independent of the chart.
int first_jet_span_dim(const DiffForm& sigma, int n);

enum class IdealVerdict { certified_regular, inconclusive };

// Ideal generated by the coefficients of a two-form on a three dimensional
// chart, presented in a frame where an annihilating contact form becomes dz
// at the origin. There the dx^dy coefficient is a unit combination of the
// other two, so the pair (a, b) generates.
struct CoefficientIdeal {
  TruncatedPoly a, b;     // generators, in the rotated frame
  DiffForm alpha;         // contact annihilator found, in the input frame
  PolyMapGerm chart_map;  // linear move used for the extraction (new -> old)
  Certificate certificate = Certificate::unknown;
  IdealVerdict verdict = IdealVerdict::inconclusive;
};

// Solves alpha ^ sigma = 0 for a contact 1-form alpha with alpha(0) != 0,
// searching coefficients up to degree_bound.
CoefficientIdeal coefficient_ideal(const DiffForm& sigma, int degree_bound = 6,
                                   unsigned long long seed = 0);

enum class KernelFieldStatus { exists, obstructed, open };

// order: the jet order whose constant part was forced to zero (obstructed),
// the stage where an exact witness closed (exists), or the last completed
// stage (open).
struct KernelFieldResult {
  KernelFieldStatus status = KernelFieldStatus::open;
  int order = -1;
  std::optional<PolyVectorField> witness;
};

// Order-by-order search for X with X interior sigma = 0 and X(0) != 0. Stage
// k constrains the degree <= k jet of X by every product coefficient it can
// influence below the jet order; an empty constant slice certifies that no
// analytic solution has X(0) != 0.
KernelFieldResult kernel_field_search(const DiffForm& sigma, int max_order = 8);

enum class Sigma22Label { hyperbolic, elliptic, parabolic };

struct Sigma22Data {
  Rational discriminant;
  Sigma22Label label = Sigma22Label::parabolic;
};

// Rank-zero classification in the template frame
//   sigma = (dy3 + y1 dy2) ^ (b dy1 - a dy2) + sum dx_{2k-1} ^ dx_{2k}.
// Discriminant (db/dy2)^2 + db/dy1 * da/dy2 at 0; positive is hyperbolic,
// negative elliptic, zero parabolic. Throws on template mismatch.
Sigma22Data classify_sigma220(const DiffForm& sigma);

// Frame-free variant on a three dimensional chart with sigma|_0 = 0: the
// discriminant is minus the second elementary symmetric function of the
// linearization of the coefficient field X with X interior vol = sigma. The
// value scales by the squared Jacobian determinant under chart changes, so
// the sign (and label) is invariant. Matches the template discriminant
// exactly when sigma is closed.
Sigma22Data classify_sigma22_intrinsic(const DiffForm& sigma);

struct InvariantReport {
  MartinetData martinet;
  int n = 0;
  std::optional<int> rank_sigma_0;
  std::optional<RatMat> kernel_basis;  // rows: kernel of omega^(n-1)|_0
  std::optional<int> orientation;
  std::string orientation_reason;
  std::optional<int> dim_span;
  std::string dim_span_reason;
  std::optional<CoefficientIdeal> ideal;
  std::string ideal_reason;
  std::optional<KernelFieldResult> kernel_field;
  std::string kernel_field_reason;
  std::optional<Sigma22Data> sigma22;
  std::string classification;
};

// Populates every invariant whose precondition holds, recording a reason for
// the rest. Chart dimension must be at least four.
InvariantReport full_report(const DiffForm& omega, int working_order = -1,
                            int kernel_max_order = 8, unsigned long long seed = 0);

const char* to_string(IdealVerdict v);
const char* to_string(Sigma22Label l);
std::string to_string(const KernelFieldResult& r);

}  // namespace martinet
