#pragma once

#include <Eigen/Dense>

#include "martinet/form.hpp"
#include "martinet/linalg.hpp"

namespace martinet {

DiffForm wedge(const DiffForm& a, const DiffForm& b);
DiffForm ext_d(const DiffForm& a);
DiffForm interior(const PolyVectorField& x, const DiffForm& a);

// Pullback along a polynomial map germ: composition on coefficients, dF on
// the basis covectors.
TruncatedPoly pullback(const PolyMapGerm& f, const TruncatedPoly& p);
DiffForm pullback(const PolyMapGerm& f, const DiffForm& a);

// a^k (wedge power), k >= 0.
DiffForm wedge_power(const DiffForm& a, int k);

ConstantTensor eval_at_0(const DiffForm& a);
RatMat matrix_at_0(const DiffForm& two_form);  // antisymmetric dim x dim
int rank_at_0(const DiffForm& two_form);
// Canonical (RREF-rows) basis of { v : v interior a |_0 == 0 }.
RatMat kernel_at_0(const DiffForm& a);

// Hypersurface {x_i = 0}: inclusion of the subchart and projection onto it.
PolyMapGerm inclusion_map(const Chart& chart, int var);
PolyMapGerm projection_map(const Chart& chart, int var);
DiffForm restrict_to_hyperplane(const DiffForm& a, int var);        // iota^*
DiffForm lift_from_hyperplane(const DiffForm& a_sub, const Chart& chart, int var);  // pi^*

DiffForm standard_volume(const Chart& chart, int jet_order);
TruncatedPoly top_coefficient(const DiffForm& top_form);

// Sorted k-subsets of {0..dim-1} in lexicographic order.
std::vector<Idx> index_subsets(int dim, int k);

// Numeric evaluation at a point (doubles), for flow verification.
Eigen::MatrixXd form_matrix_at(const DiffForm& two_form, std::span<const double> x);
Eigen::VectorXd covector_at(const DiffForm& one_form, std::span<const double> x);

}  // namespace martinet
