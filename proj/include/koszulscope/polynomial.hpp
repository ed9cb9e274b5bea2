#pragma once

#include "koszulscope/arith.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace koszulscope {

using Exponents = std::vector<int>;

/// All exponent vectors of total degree `degree` in `nvars` variables, in
/// descending lex order (x0^degree first). Empty for negative degree.
std::vector<Exponents> monomials(int nvars, int degree);

/// Sparse polynomial in x0..x_{nvars-1} over Q. Terms are kept in
/// descending lex order, so terms().begin() is the lex-leading term.
class Polynomial {
 public:
  using Terms = std::map<Exponents, ExactRat, std::greater<>>;

  Polynomial() = default;
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(int nvars, const ExactRat& c);
  static Polynomial variable(int nvars, int index);
  static Polynomial monomial(int nvars, const Exponents& exps, const ExactRat& c = 1);

  int nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::optional<int> degree() const;
  bool is_homogeneous() const;

  void add_term(const Exponents& exps, const ExactRat& c);
  Polynomial derivative(int index) const;
  /// Degree in one variable (-1 for the zero polynomial).
  int degree_in(int index) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const ExactRat& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const ExactRat& c) { return a *= c; }
  friend Polynomial operator-(Polynomial a) { return a *= ExactRat(-1); }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  /// e.g. "x0^4+x1^4-3/2*x2*x3".
  std::string str() const;

 private:
  int nvars_ = 0;
  Terms terms_;
};

/// a / b when b divides a exactly; throws std::domain_error otherwise.
Polynomial exact_divide(const Polynomial& a, const Polynomial& b);

/// Greatest common divisor over Q, normalized to have leading coefficient 1
/// (primitive pseudo-remainder sequences, recursive in the variables).
/// gcd(0, 0) = 0.
Polynomial gcd(const Polynomial& a, const Polynomial& b);

}  // namespace koszulscope
