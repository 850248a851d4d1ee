#include "martinet/linalg.hpp"

#include "martinet/chart.hpp"

namespace martinet {

int rref_in_place(RatMat& m, std::vector<int>* pivot_cols) {
  if (pivot_cols) pivot_cols->clear();
  const Eigen::Index rows = m.rows(), cols = m.cols();
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index p = -1;
    for (Eigen::Index i = r; i < rows; ++i)
      if (m(i, c) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r) m.row(p).swap(m.row(r));
    m.row(r) /= m(r, c);
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == r || m(i, c) == 0) continue;
      m.row(i) -= m(i, c) * m.row(r);
    }
    if (pivot_cols) pivot_cols->push_back(static_cast<int>(c));
    ++r;
  }
  return static_cast<int>(r);
}

int rank(RatMat m) { return rref_in_place(m); }

RatMat kernel_basis(const RatMat& a) {
  RatMat m = a;
  std::vector<int> pivots;
  const int rk = rref_in_place(m, &pivots);
  const Eigen::Index n = a.cols();
  std::vector<bool> is_pivot(static_cast<size_t>(n), false);
  for (int c : pivots) is_pivot[static_cast<size_t>(c)] = true;

  RatMat basis(n - rk, n);
  basis.setZero();
  Eigen::Index row = 0;
  for (Eigen::Index free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[static_cast<size_t>(free_col)]) continue;
    basis(row, free_col) = 1;
    for (int pr = 0; pr < rk; ++pr)
      basis(row, pivots[static_cast<size_t>(pr)]) = -m(pr, free_col);
    ++row;
  }
  return row_space_basis(std::move(basis));
}

RatMat row_space_basis(RatMat rows) {
  const int rk = rref_in_place(rows);
  return rows.topRows(rk);
}

std::optional<RatVec> solve_linear(const RatMat& a, const RatVec& b) {
  RatMat aug(a.rows(), a.cols() + 1);
  aug.leftCols(a.cols()) = a;
  aug.col(a.cols()) = b;
  std::vector<int> pivots;
  const int rk = rref_in_place(aug, &pivots);
  for (int i = 0; i < rk; ++i)
    if (pivots[static_cast<size_t>(i)] == static_cast<int>(a.cols())) return std::nullopt;
  RatVec x = RatVec::Zero(a.cols());
  for (int i = 0; i < rk; ++i) x(pivots[static_cast<size_t>(i)]) = aug(i, a.cols());
  return x;
}

bool subspace_equal(const RatMat& rows_a, const RatMat& rows_b) {
  RatMat a = row_space_basis(rows_a);
  RatMat b = row_space_basis(rows_b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

bool in_row_space(const RatVec& v, const RatMat& rows) {
  RatMat stacked(rows.rows() + 1, rows.cols());
  stacked.topRows(rows.rows()) = rows;
  stacked.bottomRows(1) = v.transpose();
  return rank(stacked) == rank(rows);
}

RatMat rat_inverse(const RatMat& a) {
  if (a.rows() != a.cols()) throw DomainError("rat_inverse: matrix not square");
  RatMat aug(a.rows(), 2 * a.cols());
  aug.leftCols(a.cols()) = a;
  aug.rightCols(a.cols()) = RatMat::Identity(a.rows(), a.cols());
  std::vector<int> pivots;
  const int rk = rref_in_place(aug, &pivots);
  // singular iff some pivot escapes into the identity block
  if (rk != a.rows() || (rk > 0 && pivots.back() >= static_cast<int>(a.cols())))
    throw DomainError("rat_inverse: matrix is singular");
  return aug.rightCols(a.cols());
}

}  // namespace martinet
