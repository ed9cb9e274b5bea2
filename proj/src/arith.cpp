#include "koszulscope/arith.hpp"

#include <sstream>
#include <stdexcept>

namespace koszulscope {

ExactInt binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  ExactInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

ExactRat make_rat(const ExactInt& num, const ExactInt& den) {
  if (den == 0) throw std::domain_error("zero denominator");
  ExactRat out(num, den);
  out.canonicalize();
  return out;
}

ExactRat parse_rat(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return ExactRat(ExactInt(text));
    return make_rat(ExactInt(text.substr(0, slash)), ExactInt(text.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("not a rational number: '" + text + "'");
  }
}

std::string to_string(const ExactInt& value) { return value.get_str(); }
std::string to_string(const ExactRat& value) { return value.get_str(); }

UniPoly::UniPoly(std::vector<ExactRat> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void UniPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

UniPoly UniPoly::interpolate(const std::vector<std::pair<long, ExactRat>>& points) {
  // Newton divided differences, then expansion into the monomial basis.
  const std::size_t m = points.size();
  std::vector<ExactRat> table;
  table.reserve(m);
  for (const auto& p : points) table.push_back(p.second);
  for (std::size_t level = 1; level < m; ++level) {
    for (std::size_t i = m - 1; i >= level; --i) {
      const long span = points[i].first - points[i - level].first;
      if (span == 0) throw std::invalid_argument("interpolation nodes must be distinct");
      table[i] = (table[i] - table[i - 1]) / ExactRat(span);
    }
  }
  // Horner on the Newton form: p = t0 + (d - x0)(t1 + (d - x1)(...)).
  std::vector<ExactRat> acc;
  for (std::size_t i = m; i-- > 0;) {
    // acc := acc * (d - x_i) + table[i]
    std::vector<ExactRat> next(acc.size() + 1, ExactRat(0));
    for (std::size_t j = 0; j < acc.size(); ++j) {
      next[j + 1] += acc[j];
      next[j] -= acc[j] * ExactRat(points[i].first);
    }
    next[0] += table[i];
    acc = std::move(next);
  }
  return UniPoly(std::move(acc));
}

ExactRat UniPoly::eval(long d) const {
  ExactRat acc = 0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * ExactRat(d) + coeffs_[i];
  return acc;
}

std::string UniPoly::str(char var) const {
  if (coeffs_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    const ExactRat& c = coeffs_[i];
    if (c == 0) continue;
    const bool negative = c < 0;
    const ExactRat mag = negative ? ExactRat(-c) : c;
    if (negative) out << '-';
    else if (!first) out << '+';
    first = false;
    const bool integral = mag.get_den() == 1;
    if (i == 0) {
      out << mag.get_str();
      continue;
    }
    if (mag != 1) out << (integral ? mag.get_str() : "(" + mag.get_str() + ")");
    out << var;
    if (i > 1) out << '^' << i;
  }
  return out.str();
}

void DimTable::set(long d, ExactInt value) {
  if (value < 0) throw std::invalid_argument("dimension table entries must be non-negative");
  entries_[d] = std::move(value);
  pieces_.clear();
  fitted_ = false;
}

std::optional<ExactInt> DimTable::at(long d) const {
  auto it = entries_.find(d);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::vector<long> DimTable::exceptional() const {
  std::vector<long> out;
  if (!fitted_) return out;
  for (const auto& [d, value] : entries_) {
    if (piece_for(d) == nullptr) out.push_back(d);
  }
  return out;
}

const FittedPiece* DimTable::piece_for(long d) const {
  for (const auto& piece : pieces_) {
    if (piece.first <= d && d <= piece.last) return &piece;
  }
  return nullptr;
}

DimTable fit_piecewise(const DimTable& table, int min_run) {
  if (min_run < 4) throw std::invalid_argument("fit_piecewise needs min_run >= 4");
  DimTable out;
  out.entries_ = table.entries_;
  out.fitted_ = true;

  std::vector<std::pair<long, ExactInt>> points(table.entries_.begin(), table.entries_.end());
  std::size_t start = 0;
  while (start + 2 < points.size()) {
    const bool consecutive = points[start + 1].first == points[start].first + 1 &&
                             points[start + 2].first == points[start].first + 2;
    if (!consecutive) {
      ++start;
      continue;
    }
    const UniPoly poly = UniPoly::interpolate({{points[start].first, ExactRat(points[start].second)},
                                               {points[start + 1].first, ExactRat(points[start + 1].second)},
                                               {points[start + 2].first, ExactRat(points[start + 2].second)}});
    std::size_t end = start + 3;
    while (end < points.size() && points[end].first == points[end - 1].first + 1 &&
           poly.eval(points[end].first) == ExactRat(points[end].second)) {
      ++end;
    }
    if (static_cast<int>(end - start) >= min_run) {
      out.pieces_.push_back({points[start].first, points[end - 1].first, poly});
      start = end;
    } else {
      ++start;
    }
  }
  return out;
}

}  // namespace koszulscope
