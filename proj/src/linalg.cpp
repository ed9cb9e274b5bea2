#include "koszulscope/linalg.hpp"

#include <stdexcept>

namespace koszulscope {

std::size_t bareiss_rank(const RatMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<std::vector<ExactInt>> a(rows, std::vector<ExactInt>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    ExactInt scale = 1;
    for (std::size_t c = 0; c < cols; ++c) scale = lcm(scale, ExactInt(m(r, c).get_den()));
    for (std::size_t c = 0; c < cols; ++c) a[r][c] = m(r, c).get_num() * (scale / m(r, c).get_den());
  }

  ExactInt previous = 1;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[rank], a[p]);
    const ExactInt& pivot = a[rank][c];
    for (std::size_t i = rank + 1; i < rows; ++i) {
      const ExactInt factor = a[i][c];
      for (std::size_t j = c + 1; j < cols; ++j) {
        a[i][j] = pivot * a[i][j] - factor * a[rank][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), previous.get_mpz_t());
      }
      a[i][c] = 0;
    }
    previous = pivot;
    ++rank;
  }
  return rank;
}

namespace {

void make_primitive(SparseRow& row) {
  if (row.empty()) return;
  ExactInt g = 0;
  for (const auto& [c, v] : row) {
    g = gcd(g, v);
    if (g == 1) break;
  }
  if (row.front().second < 0) g = -g;
  if (g == 1) return;
  for (auto& [c, v] : row) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
}

// a*x - b*y, merged by column.
SparseRow combine(const ExactInt& a, const SparseRow& x, const ExactInt& b, const SparseRow& y) {
  SparseRow out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.emplace_back(x[i].first, a * x[i].second);
      ++i;
    } else if (i == x.size() || y[j].first < x[i].first) {
      out.emplace_back(y[j].first, -b * y[j].second);
      ++j;
    } else {
      ExactInt v = a * x[i].second - b * y[j].second;
      if (v != 0) out.emplace_back(x[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

SparseEchelon::SparseEchelon(std::size_t columns) : columns_(columns), pivot_row_(columns, -1) {}

bool SparseEchelon::insert(SparseRow row) {
  for (const auto& [c, v] : row) {
    if (c >= columns_) throw std::out_of_range("sparse row column out of range");
  }
  make_primitive(row);
  while (!row.empty()) {
    const long p = pivot_row_[row.front().first];
    if (p < 0) break;
    const SparseRow& pivot = rows_[static_cast<std::size_t>(p)];
    const ExactInt g = gcd(row.front().second, pivot.front().second);
    row = combine(pivot.front().second / g, row, row.front().second / g, pivot);
    make_primitive(row);
  }
  if (row.empty()) return false;
  pivot_row_[row.front().first] = static_cast<long>(rows_.size());
  rows_.push_back(std::move(row));
  return true;
}

bool SparseEchelon::insert(const SparseVector& row) {
  ExactInt scale = 1;
  for (const auto& [c, v] : row) scale = lcm(scale, ExactInt(v.get_den()));
  SparseRow ints;
  for (const auto& [c, v] : row) {
    if (v != 0) ints.emplace_back(c, v.get_num() * (scale / v.get_den()));
  }
  return insert(std::move(ints));
}

SparseVector SparseEchelon::reduce(SparseVector v) const {
  // Pivot rows only touch columns to the right of their pivot, so sweeping
  // left to right never reintroduces an eliminated column.
  for (auto it = v.begin(); it != v.end();) {
    if (it->second == 0) {
      it = v.erase(it);
      continue;
    }
    const long p = pivot_row_.at(it->first);
    if (p < 0) {
      ++it;
      continue;
    }
    const SparseRow& pivot = rows_[static_cast<std::size_t>(p)];
    const ExactRat factor = it->second / ExactRat(pivot.front().second);
    for (std::size_t k = 1; k < pivot.size(); ++k) {
      ExactRat& slot = v[pivot[k].first];
      slot -= factor * pivot[k].second;
    }
    it = v.erase(it);
  }
  return v;
}

}  // namespace koszulscope
