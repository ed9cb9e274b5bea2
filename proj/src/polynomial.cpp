#include "koszulscope/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace koszulscope {

namespace {

void fill_monomials(int var, int remaining, Exponents& current, std::vector<Exponents>& out) {
  const int nvars = static_cast<int>(current.size());
  if (var == nvars - 1) {
    current[static_cast<std::size_t>(var)] = remaining;
    out.push_back(current);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[static_cast<std::size_t>(var)] = e;
    fill_monomials(var + 1, remaining - e, current, out);
  }
  current[static_cast<std::size_t>(var)] = 0;
}

int total(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

}  // namespace

std::vector<Exponents> monomials(int nvars, int degree) {
  std::vector<Exponents> out;
  if (degree < 0 || nvars <= 0) return out;
  Exponents current(static_cast<std::size_t>(nvars), 0);
  fill_monomials(0, degree, current, out);
  return out;
}

Polynomial Polynomial::constant(int nvars, const ExactRat& c) {
  return monomial(nvars, Exponents(static_cast<std::size_t>(nvars), 0), c);
}

Polynomial Polynomial::variable(int nvars, int index) {
  Exponents e(static_cast<std::size_t>(nvars), 0);
  e.at(static_cast<std::size_t>(index)) = 1;
  return monomial(nvars, e);
}

Polynomial Polynomial::monomial(int nvars, const Exponents& exps, const ExactRat& c) {
  if (static_cast<int>(exps.size()) != nvars) throw std::invalid_argument("exponent vector has wrong length");
  Polynomial p(nvars);
  p.add_term(exps, c);
  return p;
}

std::optional<int> Polynomial::degree() const {
  std::optional<int> out;
  for (const auto& [e, c] : terms_) out = std::max(out.value_or(0), total(e));
  return out;
}

bool Polynomial::is_homogeneous() const {
  if (terms_.empty()) return true;
  const int d = total(terms_.begin()->first);
  for (const auto& [e, c] : terms_) {
    if (total(e) != d) return false;
  }
  return true;
}

void Polynomial::add_term(const Exponents& exps, const ExactRat& c) {
  if (static_cast<int>(exps.size()) != nvars_) throw std::invalid_argument("exponent vector has wrong length");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(exps, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::derivative(int index) const {
  Polynomial out(nvars_);
  for (const auto& [e, c] : terms_) {
    const int k = e.at(static_cast<std::size_t>(index));
    if (k == 0) continue;
    Exponents lowered = e;
    --lowered[static_cast<std::size_t>(index)];
    out.add_term(lowered, c * k);
  }
  return out;
}

int Polynomial::degree_in(int index) const {
  int out = -1;
  for (const auto& [e, c] : terms_) out = std::max(out, e.at(static_cast<std::size_t>(index)));
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (nvars_ != other.nvars_) throw std::invalid_argument("polynomials in different rings");
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (nvars_ != other.nvars_) throw std::invalid_argument("polynomials in different rings");
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const ExactRat& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ != b.nvars_) throw std::invalid_argument("polynomials in different rings");
  Polynomial out(a.nvars_);
  Exponents e(static_cast<std::size_t>(a.nvars_));
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    const bool negative = c < 0;
    const ExactRat mag = negative ? ExactRat(-c) : c;
    out << (negative ? "-" : (first ? "" : "+"));
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "x" + std::to_string(i);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty()) out << mag.get_str();
    else if (mag == 1) out << mono;
    else out << mag.get_str() << "*" << mono;
  }
  return out.str();
}

// ---------------------------------------------------------------- division and gcd

namespace {

bool divides(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

// Coefficients of p viewed as a polynomial in x_var: coeffs[k] multiplies x_var^k.
std::vector<Polynomial> coefficients_in(const Polynomial& p, int var) {
  std::vector<Polynomial> out(static_cast<std::size_t>(std::max(p.degree_in(var), -1) + 1), Polynomial(p.nvars()));
  for (const auto& [e, c] : p.terms()) {
    Exponents rest = e;
    const int k = rest[static_cast<std::size_t>(var)];
    rest[static_cast<std::size_t>(var)] = 0;
    out[static_cast<std::size_t>(k)].add_term(rest, c);
  }
  return out;
}

Polynomial power_of(int nvars, int var, int k) {
  Exponents e(static_cast<std::size_t>(nvars), 0);
  e[static_cast<std::size_t>(var)] = k;
  return Polynomial::monomial(nvars, e);
}

Polynomial monic(const Polynomial& p) {
  if (p.is_zero()) return p;
  return p * (ExactRat(1) / p.terms().begin()->second);
}

int first_variable(const Polynomial& a, const Polynomial& b) {
  int best = a.nvars();
  for (const auto* p : {&a, &b}) {
    for (const auto& [e, c] : p->terms()) {
      for (int i = 0; i < static_cast<int>(e.size()); ++i) {
        if (e[static_cast<std::size_t>(i)] > 0) best = std::min(best, i);
      }
    }
  }
  return best;
}

Polynomial content_in(const Polynomial& p, int var);

Polynomial primitive_part_in(const Polynomial& p, int var) {
  if (p.is_zero()) return p;
  return exact_divide(p, content_in(p, var));
}

Polynomial pseudo_remainder(Polynomial a, const Polynomial& b, int var) {
  const int db = b.degree_in(var);
  const Polynomial lead_b = coefficients_in(b, var).back();
  while (!a.is_zero() && a.degree_in(var) >= db) {
    const int da = a.degree_in(var);
    const Polynomial lead_a = coefficients_in(a, var).back();
    a = lead_b * a - lead_a * power_of(a.nvars(), var, da - db) * b;
  }
  return a;
}

Polynomial gcd_impl(Polynomial a, Polynomial b) {
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  const int var = first_variable(a, b);
  if (var == a.nvars()) return Polynomial::constant(a.nvars(), 1);  // both constants
  if (a.degree_in(var) <= 0) return gcd_impl(a, content_in(b, var));
  if (b.degree_in(var) <= 0) return gcd_impl(content_in(a, var), b);

  const Polynomial common_content = gcd_impl(content_in(a, var), content_in(b, var));
  a = primitive_part_in(a, var);
  b = primitive_part_in(b, var);
  if (a.degree_in(var) < b.degree_in(var)) std::swap(a, b);
  while (!b.is_zero()) {
    Polynomial r = pseudo_remainder(a, b, var);
    a = std::move(b);
    b = r.is_zero() ? r : primitive_part_in(r, var);
  }
  Polynomial g = a.degree_in(var) > 0 ? primitive_part_in(a, var) : Polynomial::constant(a.nvars(), 1);
  return monic(common_content * g);
}

Polynomial content_in(const Polynomial& p, int var) {
  Polynomial g(p.nvars());
  for (const auto& c : coefficients_in(p, var)) {
    if (c.is_zero()) continue;
    g = gcd_impl(g, c);
    if (g.degree() == 0) break;
  }
  return g;
}

}  // namespace

Polynomial exact_divide(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw std::domain_error("division by the zero polynomial");
  Polynomial quotient(a.nvars());
  Polynomial rest = a;
  const auto& [lead_e, lead_c] = *b.terms().begin();
  while (!rest.is_zero()) {
    const auto& [e, c] = *rest.terms().begin();
    if (!divides(lead_e, e)) throw std::domain_error("polynomial division is not exact");
    Exponents q = e;
    for (std::size_t i = 0; i < q.size(); ++i) q[i] -= lead_e[i];
    const Polynomial term = Polynomial::monomial(a.nvars(), q, c / lead_c);
    quotient += term;
    rest -= term * b;
  }
  return quotient;
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  if (a.nvars() != b.nvars()) throw std::invalid_argument("polynomials in different rings");
  return gcd_impl(a, b);
}

}  // namespace koszulscope
