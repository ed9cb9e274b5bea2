#include "koszulscope/arith.hpp"

#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

using namespace koszulscope;

namespace {

// Product formula, independent of the library's GMP call.
ExactInt slow_binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  ExactInt num = 1;
  ExactInt den = 1;
  for (long i = 0; i < k; ++i) {
    num *= n - i;
    den *= i + 1;
  }
  return num / den;
}

DimTable table_of(long first, long last, const std::function<long(long)>& f) {
  DimTable t;
  for (long d = first; d <= last; ++d) t.set(d, f(d));
  return t;
}

}  // namespace

TEST_CASE("binomial examples") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(7, 0) == 1);
  CHECK(binomial(-3, 2) == 0);
  CHECK(binomial(4, -1) == 0);
  CHECK(binomial(100, 50) == ExactInt("100891344545564193334812497256"));
}

TEST_CASE("Pascal identity on random arguments") {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<long> pick_n(1, 400);
  for (int i = 0; i < 10000; ++i) {
    const long n = pick_n(rng);
    const long k = std::uniform_int_distribution<long>(0, n)(rng);
    REQUIRE(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
  }
}

TEST_CASE("binomial agrees with the product formula") {
  for (long n = -3; n <= 40; ++n) {
    for (long k = -3; k <= 45; ++k) CHECK(binomial(n, k) == slow_binomial(n, k));
  }
}

TEST_CASE("rationals stay normalized") {
  const ExactRat r = make_rat(6, -4);
  CHECK(r.get_num() == -3);
  CHECK(r.get_den() == 2);
  CHECK(to_string(r) == "-3/2");
  CHECK(parse_rat("10/4") == make_rat(5, 2));
  CHECK(parse_rat("-7") == ExactRat(-7));
  CHECK_THROWS_AS(make_rat(1, 0), std::domain_error);
  CHECK_THROWS(parse_rat("1/0"));
  CHECK_THROWS(parse_rat("abc"));
}

TEST_CASE("UniPoly interpolation and rendering") {
  const UniPoly p = UniPoly::interpolate({{6, 80}, {7, 124}, {8, 176}});
  CHECK(p.str() == "4d^2-8d-16");
  CHECK(p.eval(40) == 4 * 1600 - 320 - 16);
  CHECK(UniPoly().str() == "0");
  CHECK(UniPoly::interpolate({{0, 0}, {1, 0}, {2, 0}}).is_zero());
  CHECK(UniPoly::interpolate({{0, 0}, {1, make_rat(1, 2)}, {2, 2}}).str() == "(1/2)d^2");
  CHECK(UniPoly::interpolate({{1, 5}, {2, 5}}).str() == "5");
}

TEST_CASE("fit_piecewise finds a single quadratic") {
  const DimTable fitted = fit_piecewise(table_of(6, 10, [](long d) { return 4 * d * d - 8 * d - 16; }));
  REQUIRE(fitted.pieces().size() == 1);
  CHECK(fitted.pieces()[0].first == 6);
  CHECK(fitted.pieces()[0].last == 10);
  CHECK(fitted.pieces()[0].poly.str() == "4d^2-8d-16");
  CHECK(fitted.exceptional().empty());
}

TEST_CASE("fit_piecewise reports exceptional points") {
  DimTable t = table_of(6, 12, [](long d) { return 4 * d * d - 8 * d - 16; });
  t.set(3, 6);
  t.set(4, 20);
  t.set(5, 45);
  const DimTable fitted = fit_piecewise(t);
  REQUIRE(fitted.pieces().size() == 1);
  CHECK(fitted.pieces()[0].first == 6);
  CHECK(fitted.exceptional() == std::vector<long>{3, 4, 5});
}

TEST_CASE("fit_piecewise on zeros") {
  const DimTable fitted = fit_piecewise(table_of(0, 5, [](long) { return 0; }));
  REQUIRE(fitted.pieces().size() == 1);
  CHECK(fitted.pieces()[0].poly.str() == "0");
}

TEST_CASE("fit_piecewise round trip") {
  DimTable t;
  for (long d = 0; d <= 30; ++d) t.set(d, d < 3 ? 0 : d < 10 ? d * d + 1 : 3 * d * d - 5 * d + 7);
  const DimTable fitted = fit_piecewise(t);
  for (const auto& piece : fitted.pieces()) {
    for (long d = piece.first; d <= piece.last; ++d) CHECK(piece.poly.eval(d) == ExactRat(*t.at(d)));
  }
  for (const auto& [d, v] : t.entries()) {
    (void)v;
    const bool covered = fitted.piece_for(d) != nullptr;
    const auto exc = fitted.exceptional();
    CHECK(covered != (std::find(exc.begin(), exc.end(), d) != exc.end()));
  }
}

TEST_CASE("DimTable guards") {
  DimTable t;
  CHECK_THROWS_AS(t.set(1, -1), std::invalid_argument);
  CHECK_THROWS_AS(fit_piecewise(t, 3), std::invalid_argument);
  CHECK_FALSE(t.at(2).has_value());
}
