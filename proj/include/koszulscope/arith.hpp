#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace koszulscope {

// Arbitrary precision; mpq_class keeps itself canonical (gcd 1, positive
// denominator) after every arithmetic operation.
using ExactInt = mpz_class;
using ExactRat = mpq_class;

/// C(n, k), zero when k < 0, k > n, or n < 0.
ExactInt binomial(long n, long k);

/// Builds num/den in lowest terms. Throws std::domain_error on den == 0.
ExactRat make_rat(const ExactInt& num, const ExactInt& den);

/// Parses "p" or "p/q" into a canonical rational.
ExactRat parse_rat(const std::string& text);

std::string to_string(const ExactInt& value);
std::string to_string(const ExactRat& value);

/// A polynomial in one integer variable with rational coefficients,
/// coeffs[i] multiplying d^i. Trailing zero coefficients are trimmed.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<ExactRat> coeffs);

  /// Unique polynomial of degree < points.size() through the given points.
  static UniPoly interpolate(const std::vector<std::pair<long, ExactRat>>& points);

  ExactRat eval(long d) const;
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<ExactRat>& coeffs() const { return coeffs_; }

  /// Renders in the form "4d^2-8d-16"; the zero polynomial is "0".
  std::string str(char var = 'd') const;

  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim();
  std::vector<ExactRat> coeffs_;
};

struct FittedPiece {
  long first = 0;
  long last = 0;
  UniPoly poly;
};

/// Exact dimensions indexed by an integer parameter, optionally carrying a
/// piecewise polynomial presentation produced by fit_piecewise.
class DimTable {
 public:
  /// Throws std::invalid_argument on a negative value.
  void set(long d, ExactInt value);

  const std::map<long, ExactInt>& entries() const { return entries_; }
  std::optional<ExactInt> at(long d) const;

  const std::vector<FittedPiece>& pieces() const { return pieces_; }
  bool fitted() const { return fitted_; }

  /// Entries not covered by any fitted piece (empty until fitted).
  std::vector<long> exceptional() const;

  /// Piece covering d, if any.
  const FittedPiece* piece_for(long d) const;

 private:
  friend DimTable fit_piecewise(const DimTable& table, int min_run);

  std::map<long, ExactInt> entries_;
  std::vector<FittedPiece> pieces_;
  bool fitted_ = false;
};

/// Scans the table left to right, fitting the polynomial through three
/// consecutive entries and extending it while it stays exact. Runs of at
/// least min_run consecutive d become pieces; everything else is exceptional.
/// Throws std::invalid_argument when min_run < 4.
DimTable fit_piecewise(const DimTable& table, int min_run = 4);

}  // namespace koszulscope
