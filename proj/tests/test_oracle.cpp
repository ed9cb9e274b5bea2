#include "koszulscope/oracle.hpp"

#include <doctest.h>

#include <fstream>
#include <random>
#include <thread>

using namespace koszulscope;

namespace {

Polynomial x(int nvars, int i) { return Polynomial::variable(nvars, i); }
Polynomial c(int nvars, long v) { return Polynomial::constant(nvars, v); }

// Plain Gauss-Jordan over Q, the reference for the fraction-free code.
std::size_t naive_rank(RatMatrix m) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
    std::size_t p = rank;
    while (p < m.rows() && m(p, col) == 0) ++p;
    if (p == m.rows()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(rank, j), m(p, j));
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == rank || m(i, col) == 0) continue;
      const ExactRat f = m(i, col) / m(rank, col);
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= f * m(rank, j);
    }
    ++rank;
  }
  return rank;
}

// Random matrix of rank at most r, as a product of random thin factors.
RatMatrix random_low_rank(std::mt19937& rng, std::size_t rows, std::size_t cols, std::size_t r) {
  std::uniform_int_distribution<int> v(-3, 3);
  std::uniform_int_distribution<int> den(1, 4);
  std::vector<ExactRat> a(rows * r), b(r * cols);
  for (auto& e : a) e = make_rat(v(rng), den(rng));
  for (auto& e : b) e = v(rng);
  RatMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      for (std::size_t k = 0; k < r; ++k) m(i, j) += a[i * r + k] * b[k * cols + j];
    }
  }
  return m;
}

const GradedQuotient& quartic() {
  static const GradedQuotient q = fermat_quartic();
  return q;
}

}  // namespace

TEST_CASE("polynomial arithmetic") {
  const int n = 3;
  const Polynomial p = x(n, 0) * x(n, 0) - x(n, 1) * x(n, 1);
  CHECK(p.str() == "x0^2-x1^2");
  CHECK(p.degree() == 2);
  CHECK(p.is_homogeneous());
  CHECK_FALSE((p + c(n, 1)).is_homogeneous());
  CHECK(p.derivative(1).str() == "-2*x1");
  CHECK((p - p).is_zero());
  CHECK((p * ExactRat(make_rat(1, 2))).str() == "1/2*x0^2-1/2*x1^2");
  CHECK(exact_divide(p, x(n, 0) + x(n, 1)) == x(n, 0) - x(n, 1));
  CHECK_THROWS_AS(exact_divide(p, x(n, 2)), std::domain_error);
}

TEST_CASE("monomial bases") {
  const auto m = monomials(4, 3);
  CHECK(m.size() == 20);
  CHECK(m.front() == Exponents{3, 0, 0, 0});
  CHECK(m.back() == Exponents{0, 0, 0, 3});
  CHECK(std::is_sorted(m.begin(), m.end(), std::greater<>()));
  CHECK(monomials(4, -1).empty());
  CHECK(monomials(6, 12).size() == 6188);
}

TEST_CASE("gcd") {
  const int n = 3;
  const Polynomial a = x(n, 0) * x(n, 0) - x(n, 1) * x(n, 1);
  const Polynomial b = x(n, 0) * x(n, 0) + c(n, 2) * x(n, 0) * x(n, 1) + x(n, 1) * x(n, 1);
  CHECK(gcd(a, b) == x(n, 0) + x(n, 1));
  CHECK(gcd(x(n, 0), x(n, 1)) == c(n, 1));
  CHECK(gcd(Polynomial(n), Polynomial(n)).is_zero());
  const Polynomial f = x(n, 0) * x(n, 2) - x(n, 1) * x(n, 1);
  const Polynomial g = x(n, 0) + x(n, 1) + x(n, 2);
  CHECK(gcd(f * g * c(n, 6), f * (x(n, 0) - x(n, 2)) * c(n, 4)) == f);
}

TEST_CASE("fraction-free rank matches Gauss-Jordan") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t rows = 1 + trial % 9;
    const std::size_t cols = 1 + (trial * 7) % 11;
    const std::size_t r = trial % 5;
    const RatMatrix m = random_low_rank(rng, rows, cols, r);
    CHECK(bareiss_rank(m) == naive_rank(m));

    SparseEchelon e(cols);
    for (std::size_t i = 0; i < rows; ++i) {
      SparseVector row;
      for (std::size_t j = 0; j < cols; ++j) {
        if (m(i, j) != 0) row[j] = m(i, j);
      }
      e.insert(row);
    }
    CHECK(e.rank() == naive_rank(m));
  }
}

TEST_CASE("sparse reduction gives normal forms") {
  SparseEchelon e(3);
  CHECK(e.insert(SparseRow{{0, 2}, {1, 4}}));
  CHECK_FALSE(e.insert(SparseRow{{0, 1}, {1, 2}}));
  CHECK(e.insert(SparseRow{{1, 1}, {2, -1}}));
  const SparseVector v = e.reduce({{0, ExactRat(1)}});
  // x0 = -2 x1 = -2 x2 modulo the rows.
  CHECK(v == SparseVector{{2, ExactRat(-2)}});
}

TEST_CASE("Hilbert function examples") {
  CHECK(quartic().hilbert_function(5) == 52);
  CHECK(three_quadrics_model().hilbert_function(2) == 18);
  CHECK(quartic().hilbert_function(-1) == 0);
}

TEST_CASE("Hilbert function equals the Koszul sum on all models") {
  const GradedQuotient qc = quadric_cubic_model();
  const GradedQuotient qqq = three_quadrics_model();
  for (const GradedQuotient* q : {&quartic(), &qc, &qqq}) {
    for (int m = -3; m <= 12; ++m) {
      // Independent check of the closed form: the K3 Hilbert polynomial
      // d0*m^2/2 + 2 for m >= 1.
      const ExactInt hf = q->hilbert_function(m);
      if (m >= 1) {
        long d0 = 1;
        for (int dj : q->degrees()) d0 *= dj;
        CHECK(ExactRat(hf) == make_rat(d0 * m * m, 2) + 2);
      }
    }
  }
}

TEST_CASE("non-regular sequences are rejected") {
  const int n = 4;
  const GradedQuotient q(3, {x(n, 0) * x(n, 1), x(n, 0) * x(n, 2)});
  CHECK(q.hilbert_function(2) == 8);
  CHECK_THROWS_AS(q.hilbert_function(3), RegularSequenceError);
}

TEST_CASE("Euler kernel") {
  CHECK(euler_kernel_dim(quartic(), 2) == 6);
  CHECK(euler_kernel_dim(quartic(), 5) == 84);
  const GradedQuotient qc = quadric_cubic_model();
  CHECK(euler_kernel_dim(qc, 2) == 11);
  const GradedQuotient qqq = three_quadrics_model();
  for (const GradedQuotient* q : {&quartic(), &qc, &qqq}) CHECK(euler_kernel_dim(*q, 1) == 0);
}

TEST_CASE("foliation oracle") {
  CHECK(foliation_dim_oracle(quartic(), 6) == 80);
  CHECK(foliation_dim_oracle(quartic(), 3) == 6);
  CHECK(foliation_dim_oracle(three_quadrics_model(), 4) == 52);
  CHECK_THROWS_AS(foliation_dim_oracle(quartic(), 0), std::invalid_argument);
}

TEST_CASE("invariance") {
  const int n = 4;
  const Polynomial f = quartic().forms()[0];
  for (const auto& h : hamiltonian_fields(f)) CHECK(is_invariant(h, quartic()));
  CHECK(is_invariant(HomogeneousVectorField::radial(3), quartic()));
  // x1 d/dx0 sends f to 4 x0^3 x1, which is not a multiple of f.
  HomogeneousVectorField shear({x(n, 1), Polynomial(n), Polynomial(n), Polynomial(n)});
  CHECK_FALSE(is_invariant(shear, quartic()));
  CHECK(shear.apply(f).str() == "4*x0^3*x1");
}

TEST_CASE("Hamiltonian fields span six sections at d = 3") {
  const auto fields = hamiltonian_fields(quartic().forms()[0]);
  CHECK(fields.size() == 6);
  CHECK(section_span_dim(quartic(), fields) == 6);
  CHECK(section_span_dim(quartic(), {HomogeneousVectorField::radial(3)}) == 0);
}

TEST_CASE("singular scheme minors") {
  const int n = 3;
  HomogeneousVectorField f({x(n, 1), Polynomial(n), Polynomial(n)});
  const auto s = singular_scheme_ideal(f);
  REQUIRE(s.minors.size() == 3);
  CHECK(s.minors[0] == Polynomial(n) - x(n, 1) * x(n, 1));
  CHECK(s.minors[1] == Polynomial(n) - x(n, 1) * x(n, 2));
  CHECK(s.minors[2].is_zero());
  CHECK(s.common_factor == x(n, 1));

  for (const auto& m : singular_scheme_ideal(HomogeneousVectorField::radial(3)).minors) CHECK(m.is_zero());

  const int v = 4;
  const auto h = singular_scheme_ideal(hamiltonian_fields(quartic().forms()[0])[0]);
  CHECK(h.minors.size() == 6);
  const Polynomial x0 = x(v, 0), x1 = x(v, 1);
  CHECK(h.minors[0] == x0 * (c(v, -4) * x0 * x0 * x0) - x1 * (c(v, 4) * x1 * x1 * x1));
  CHECK(h.common_factor == c(v, 1));
}

TEST_CASE("vector field validation") {
  const int n = 3;
  CHECK_THROWS(HomogeneousVectorField({Polynomial(n), Polynomial(n), Polynomial(n)}));
  CHECK_THROWS(HomogeneousVectorField({x(n, 0), x(n, 0) * x(n, 1), Polynomial(n)}));
  CHECK_THROWS(HomogeneousVectorField({x(n, 0) + c(n, 1), Polynomial(n), Polynomial(n)}));
}

TEST_CASE("smoothness by the Jacobian criterion") {
  CHECK(is_smooth(quartic(), 16));
  CHECK(is_smooth(quadric_cubic_model(), 20));
  CHECK(is_smooth(three_quadrics_model(), 24));
  const int n = 4;
  // The cone x1^4 + x2^4 + x3^4 is singular at [1:0:0:0].
  Polynomial cone(n);
  for (int i = 1; i < n; ++i) cone += x(n, i) * x(n, i) * x(n, i) * x(n, i);
  CHECK_FALSE(is_smooth(GradedQuotient(3, {cone}), 16));
}

TEST_CASE("model text format") {
  const GradedQuotient qqq = three_quadrics_model();
  const std::string text = format_model(qqq);
  CHECK(text.rfind("n=5 degrees=2,2,2\n", 0) == 0);
  const GradedQuotient back = parse_model("# comment\n" + text);
  CHECK(back.forms() == qqq.forms());
  CHECK(parse_model("n=3 degrees=4\n1/2:4,0,0,0 -3:0,1,1,2\n").forms()[0].str() == "1/2*x0^4-3*x1*x2*x3^2");

  CHECK_THROWS_AS(parse_model(""), ModelFormatError);
  CHECK_THROWS_AS(parse_model("n=3 degrees=4\n1:4,0,0\n"), ModelFormatError);
  CHECK_THROWS_AS(parse_model("n=3 degrees=4\n1:3,0,0,0\n"), ModelFormatError);
  CHECK_THROWS_AS(parse_model("n=3 degrees=4\n1:4,0,0,0 1:1,0,0,0\n"), ModelFormatError);
  CHECK_THROWS_AS(parse_model("n=3 degrees=4,4\n1:4,0,0,0\n"), ModelFormatError);
  CHECK_THROWS_AS(parse_model("n=3 degrees=4\nx:4,0,0,0\n"), ModelFormatError);
  CHECK_THROWS_AS(parse_model("m=3 degrees=4\n"), ModelFormatError);
  CHECK_THROWS_AS(load_model("/nonexistent/model.txt"), ModelFormatError);
}

TEST_CASE("pieces are safe to query concurrently") {
  const GradedQuotient q = quadric_cubic_model();
  std::vector<ExactInt> results(8);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < results.size(); ++t) {
    threads.emplace_back([&, t] { results[t] = q.hilbert_function(6 + static_cast<int>(t % 3)); });
  }
  for (auto& t : threads) t.join();
  for (std::size_t t = 0; t < results.size(); ++t) CHECK(results[t] == q.koszul_prediction(6 + static_cast<int>(t % 3)));
}
