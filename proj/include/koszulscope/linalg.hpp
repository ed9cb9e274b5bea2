#pragma once

#include "koszulscope/arith.hpp"

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

namespace koszulscope {

/// Dense exact-rational matrix, row major.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  ExactRat& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const ExactRat& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<ExactRat> data_;
};

/// Rank by fraction-free (Bareiss) elimination. Rows are first scaled to
/// integers; all intermediate divisions are exact.
std::size_t bareiss_rank(const RatMatrix& m);

/// Sparse integer row, sorted by column, no zero entries.
using SparseRow = std::vector<std::pair<std::size_t, ExactInt>>;
using SparseVector = std::map<std::size_t, ExactRat>;

/// Incremental row echelon form over Z with primitive rows. Used for the
/// degree pieces of an ideal, which are too large for dense elimination.
class SparseEchelon {
 public:
  SparseEchelon() : SparseEchelon(0) {}
  explicit SparseEchelon(std::size_t columns);

  /// Reduces the row against the current pivots and keeps it if nonzero.
  /// Returns true when the rank went up.
  bool insert(SparseRow row);
  bool insert(const SparseVector& row);

  std::size_t columns() const { return columns_; }
  std::size_t rank() const { return rows_.size(); }
  bool is_pivot(std::size_t col) const { return pivot_row_[col] >= 0; }

  /// Remainder of v after eliminating every pivot column (a normal form:
  /// the result is supported on non-pivot columns only).
  SparseVector reduce(SparseVector v) const;

 private:
  std::size_t columns_;
  std::vector<SparseRow> rows_;
  std::vector<long> pivot_row_;
};

}  // namespace koszulscope
