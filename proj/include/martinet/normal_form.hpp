#pragma once

#include <optional>
#include <string>
#include <vector>

#include "martinet/exterior.hpp"
#include "martinet/form.hpp"
#include "martinet/invariants.hpp"

namespace martinet {

// Primitive of a closed form whose coefficients all carry the pivot variable:
// returns beta with d(x_pivot^2 * beta) == rho. The construction integrates
// the dx_pivot-part of rho along the pivot direction and divides the pivot
// out twice, so every identity holds coefficient by coefficient.
DiffForm relative_primitive_p1(const DiffForm& rho, int pivot = 0);

struct HomotopyPrimitive {
  DiffForm gamma;            // d(gamma) == beta
  bool input_in_ideal = false;   // every coefficient of beta divisible by f
  bool output_in_ideal = false;  // every coefficient of gamma divisible by f
};

// Weighted radial primitive of a closed form: gamma = sum over weighted
// grades of (1/grade) * (E interior beta), E the chart's Euler field. Valid
// for any closed beta of degree >= 1; the divisibility flags record whether
// beta (and then gamma) vanish on {f = 0} in the strong, coefficient sense.
HomotopyPrimitive homotopy_primitive(const DiffForm& beta, const TruncatedPoly& f);

// gamma with beta == df ^ gamma, solved degree by degree. Requires df ^ beta
// == 0 and an isolated-singularity certificate for f (a finite Jacobian-ideal
// power bound). The identity is enforced for every coefficient of total
// degree <= residual_order; negative residual_order picks a default from the
// degrees involved.
DiffForm df_division(const DiffForm& beta, const TruncatedPoly& f,
                     int residual_order = -1);

// omega == d(x_pivot * pi^* alpha) + pi^* sigma + d(x_pivot^2 * theta) on the
// flattened chart, with alpha a contact-type annihilator of sigma.
struct Decomposition {
  DiffForm alpha;  // 1-form on the hyperplane chart
  DiffForm sigma;  // 2-form on the hyperplane chart
  DiffForm theta;  // 1-form on the full chart
  int residual_order = 0;
  int pivot = 0;
  MartinetData martinet;
};

Decomposition decompose(const DiffForm& omega, int working_order = -1);

enum class RealizabilityStatus { realizable, not_realizable, open };

struct Realizability {
  RealizabilityStatus status = RealizabilityStatus::open;
  std::optional<DiffForm> alpha;
};

// Can sigma on an odd chart appear as the restriction of a singular
// symplectic form with structurally smooth degeneracy locus? Certifies yes
// with a polynomial annihilator alpha of degree <= degree_bound satisfying
// alpha ^ sigma^{n-1} == 0 and alpha ^ d(alpha) ^ sigma^{n-2} nonzero at 0.
Realizability realizability(const DiffForm& sigma, int degree_bound = 3,
                            unsigned long long seed = 0);

// Closed 2-form with omega^n == f * dx_1 ^ ... ^ dx_{2n} exactly.
DiffForm from_volume(const TruncatedPoly& f);

enum class Category { c_analytic, r_analytic_or_smooth };

enum class Outcome { equivalent, not_equivalent, inconclusive };

struct EquivalenceVerdict {
  Outcome outcome = Outcome::inconclusive;
  std::string rule;  // which certified route produced the outcome
  std::vector<std::string> evidence;
};

// Decides local equivalence of two closed 2-form germs on a common chart.
// equivalent and not_equivalent are only returned with certified evidence;
// everything else is inconclusive.
EquivalenceVerdict decide_equivalence(const DiffForm& omega0, const DiffForm& omega1,
                                      Category category = Category::r_analytic_or_smooth,
                                      int working_order = -1,
                                      unsigned long long seed = 0);

enum class TemplateShape { first_shape, second_shape, degenerate, no_fit };

struct KernelTemplate {
  TemplateShape shape = TemplateShape::no_fit;
  Rational c;
  TruncatedPoly g;
};

// Literal match of a 4-dimensional germ against the kernel-frame template
// d(p(dx + C dy + z dy)) + g(x,y) dx^dy or its x/y-swapped shape. Requires a
// certified kernel frame on the restriction; does not construct the
// normalizing map.
KernelTemplate fit_kernel_template(const DiffForm& omega, int working_order = -1);

// sigma = (dy3 + y1 dy2) ^ (b dy1 - a dy2) on a 3-chart, with a built from b
// and h by the integral formula that makes sigma closed; h must not involve
// the first variable.
DiffForm sigma22_family(const TruncatedPoly& b, const TruncatedPoly& h);

const char* to_string(RealizabilityStatus s);
const char* to_string(Outcome o);
const char* to_string(Category c);
const char* to_string(TemplateShape s);

}  // namespace martinet
