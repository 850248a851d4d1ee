#pragma once

#include <optional>
#include <vector>

#include "martinet/chart.hpp"
#include "martinet/rational.hpp"

namespace martinet {

// Exact Gauss-Jordan over Q. Pivots are chosen as the first nonzero entry per
// column, so the reduced form (and everything derived from it) is canonical.
// Returns the rank; pivot_cols receives the pivot column of each pivot row.
int rref_in_place(RatMat& m, std::vector<int>* pivot_cols = nullptr);

int rank(RatMat m);

// Canonical basis of {x : A x = 0}, one kernel vector per ROW, in reduced row
// echelon form. Two subspaces are equal iff these matrices are equal.
RatMat kernel_basis(const RatMat& a);

// Canonical row-space form of a set of row vectors (RREF with zero rows cut).
RatMat row_space_basis(RatMat rows);

// One solution of A x = b, if any.
std::optional<RatVec> solve_linear(const RatMat& a, const RatVec& b);

bool subspace_equal(const RatMat& rows_a, const RatMat& rows_b);

// True when v lies in the row space of `rows`.
bool in_row_space(const RatVec& v, const RatMat& rows);

RatMat rat_inverse(const RatMat& a);  // throws DomainError when singular

}  // namespace martinet
