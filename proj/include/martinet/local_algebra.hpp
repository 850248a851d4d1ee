#pragma once

#include <optional>
#include <vector>

#include "martinet/form.hpp"
#include "martinet/poly.hpp"

namespace martinet {

// Monomial exponent lists of total degree exactly k, in lex order.
std::vector<Multi> monomials_of_degree(const Chart& chart, int k);

// Membership of p in (gens) + m^{k+1}, decided by exact linear algebra on
// coefficient vectors of degree <= k truncations.
bool in_ideal_mod_mk(const TruncatedPoly& p, const std::vector<TruncatedPoly>& gens, int k);

// Nakayama certificate: if every monomial of degree k lies in (gens) + m^{k+1}
// then m^k is contained in the ideal generated by gens in the formal local ring.
bool nakayama_contains_power(const std::vector<TruncatedPoly>& gens, int k);

// Smallest k <= max_k with m^k inside (gens), if any. k = 0 means the ideal
// contains a unit.
std::optional<int> ideal_power_bound(const std::vector<TruncatedPoly>& gens, int max_k);

// Three-valued certificates for properties checked on jets.
enum class Certificate { proved, refuted, unknown };

// Do f and g start a regular sequence at the origin (their zero sets meet in
// codimension two)? Fast path: independent linear parts. Otherwise cut by
// randomly seeded linear forms and look for a Nakayama certificate that the
// resulting ideal is of finite colength.
Certificate regular_pair(const TruncatedPoly& f, const TruncatedPoly& g,
                         unsigned long long seed = 0);

// Weighted radial field E = sum w_i x_i d/dx_i using the chart weights
// (weight one when the chart carries none). For p quasi-homogeneous of
// weighted degree d the Lie derivative identity reads E(p) = d * p.
PolyVectorField euler_field(const Chart& chart);

// Directional derivative X(p) = sum X_i dp/dx_i.
TruncatedPoly apply_field(const PolyVectorField& x, const TruncatedPoly& p);

}  // namespace martinet
