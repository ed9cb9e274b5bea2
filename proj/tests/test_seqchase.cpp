#include "koszulscope/seqchase.hpp"

#include <doctest.h>

#include <random>

using namespace koszulscope;

namespace {

const ShortExact kSeq{"A", "B", "C"};

CohProfile known(std::initializer_list<long> values) {
  std::vector<ExactInt> v;
  for (long x : values) v.emplace_back(x);
  return CohProfile::known(v);
}

// A random exact long sequence of length 3(top+1): pick the rank of every
// map, then each slot is the sum of the incoming and outgoing ranks.
std::array<CohProfile, 3> random_exact(std::mt19937& rng, int top) {
  const int length = 3 * (top + 1);
  std::uniform_int_distribution<int> rank(0, 4);
  std::bernoulli_distribution zero(0.35);
  std::vector<long> r(static_cast<std::size_t>(length), 0);
  for (int p = 0; p + 1 < length; ++p) r[static_cast<std::size_t>(p)] = zero(rng) ? 0 : rank(rng);
  std::array<std::vector<ExactInt>, 3> dims;
  for (int p = 0; p < length; ++p) {
    const long in = p > 0 ? r[static_cast<std::size_t>(p - 1)] : 0;
    dims[static_cast<std::size_t>(p % 3)].emplace_back(in + r[static_cast<std::size_t>(p)]);
  }
  return {CohProfile::known(dims[0]), CohProfile::known(dims[1]), CohProfile::known(dims[2])};
}

bool within(const Dim& d, const ExactInt& v) { return d.lower() <= v && (!d.upper() || v <= *d.upper()); }

bool narrower_or_equal(const Dim& after, const Dim& before) {
  return after.lower() >= before.lower() && (!before.upper() || (after.upper() && *after.upper() <= *before.upper()));
}

}  // namespace

TEST_CASE("Dim rendering and parsing") {
  CHECK(Dim::known(46).str() == "46");
  CHECK(Dim::unknown(45, ExactInt(46)).str() == "[45,46]");
  CHECK(Dim().str() == "[0,inf]");
  for (const auto& d : {Dim::known(3), Dim::unknown(1, ExactInt(9)), Dim::unknown(2)}) CHECK(Dim::parse(d.str()) == d);
  CHECK_THROWS_AS(Dim().value(), std::logic_error);
  CHECK_THROWS(Dim::parse("[1,2"));
}

TEST_CASE("restriction to the quartic at a negative twist vanishes") {
  // 0 -> I_X(-1) = O(-5) -> O(-1) -> i_*i^*O(-1) -> 0 on P^3.
  const auto r = chase(kSeq, {known({0, 0, 0, 4}), known({0, 0, 0, 0}), CohProfile::unknown(3)});
  CHECK(r.profiles[2][0].is_zero());
  CHECK(r.profiles[2][1].is_zero());
  CHECK(r.profiles[2][2] == Dim::known(4));
  CHECK(r.profiles[2][3].is_zero());
}

TEST_CASE("zero sheaves force a zero quotient") {
  const auto r = chase(kSeq, {CohProfile::zero(3), CohProfile::zero(3), CohProfile::unknown(3)});
  CHECK(r.profiles[2] == CohProfile::zero(3));
}

TEST_CASE("quartic h0 of O_X(2)") {
  // d = 7: A = O(d-9), B = O(d-5) on P^3.
  const auto r = chase(kSeq, {known({0, 0, 0, 0}), known({10, 0, 0, 0}), CohProfile::unknown(3)});
  CHECK(r.profiles[2][0] == Dim::known(10));
  CHECK(alternating_sum(r.profiles) == ExactInt(0));
}

TEST_CASE("contradictions carry the trace") {
  CHECK_THROWS_AS(chase(kSeq, {known({5, 0, 0}), known({0, 0, 0}), CohProfile::unknown(2)}), ChaseContradiction);
  CHECK_THROWS_AS(chase(kSeq, {known({1, 0}), known({0, 0, 0}), CohProfile::unknown(2)}), std::invalid_argument);
}

TEST_CASE("chase on random exact sequences") {
  std::mt19937 rng(7);
  std::bernoulli_distribution hide(0.3);
  std::bernoulli_distribution bounded(0.3);
  int fully_known = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int top = 2 + trial % 4;
    const auto truth = random_exact(rng, top);
    std::array<CohProfile, 3> start = truth;
    for (auto& p : start) {
      for (int q = 0; q <= top; ++q) {
        if (!hide(rng)) continue;
        const ExactInt v = p[q].value();
        p[q] = bounded(rng) ? Dim::unknown(v > 0 ? ExactInt(v - 1) : v, ExactInt(v + 2)) : Dim::unknown();
      }
    }
    const ChaseResult r = chase(kSeq, start);
    for (std::size_t i = 0; i < 3; ++i) {
      for (int q = 0; q <= top; ++q) {
        const Dim& after = r.profiles[i][q];
        REQUIRE(within(after, truth[i][q].value()));
        REQUIRE(narrower_or_equal(after, start[i][q]));
        if (start[i][q].is_known()) REQUIRE(after == start[i][q]);
      }
    }
    if (r.profiles[0].all_known() && r.profiles[1].all_known() && r.profiles[2].all_known()) {
      ++fully_known;
      CHECK(alternating_sum(r.profiles) == ExactInt(0));
    }

    const ProfileMap initial{{"A", start[0]}, {"B", start[1]}, {"C", start[2]}};
    const ProfileMap replayed = replay(r.trace, initial);
    CHECK(replayed.at("A") == r.profiles[0]);
    CHECK(replayed.at("B") == r.profiles[1]);
    CHECK(replayed.at("C") == r.profiles[2]);

    const ChaseTrace parsed = ChaseTrace::parse(r.trace.serialize());
    CHECK(parsed.serialize() == r.trace.serialize());
    const ProfileMap again = replay(parsed, initial);
    CHECK(again.at("C").str() == r.profiles[2].str());
  }
  CHECK(fully_known > 20);
}

TEST_CASE("trace lines follow the documented format") {
  const auto r = chase(kSeq, {known({0, 0, 0, 0}), known({10, 0, 0, 0}), CohProfile::unknown(3)});
  const std::string text = r.trace.serialize();
  CHECK(text.rfind("SEQ A B C\n", 0) == 0);
  CHECK(text.find("RULE ISO READ A:0 B:0 A:1 WRITE C:0 = 10\n") != std::string::npos);
}

TEST_CASE("tampered traces are rejected") {
  const auto r = chase(kSeq, {known({0, 0, 0, 0}), known({10, 0, 0, 0}), CohProfile::unknown(3)});
  std::string text = r.trace.serialize();
  const auto pos = text.find("= 10");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 4, "= 11");
  const ProfileMap initial{{"A", known({0, 0, 0, 0})}, {"B", known({10, 0, 0, 0})}, {"C", CohProfile::unknown(3)}};
  CHECK_THROWS_AS(replay(ChaseTrace::parse(text), initial), ReplayMismatch);
}

TEST_CASE("disabling alternating sums leaves long segments open") {
  // 0 -> A -> B -> C -> 0 with h0 only: the segment A0 B0 C0 has length 3.
  ChaseOptions off;
  off.alternating_sums = false;
  off.bounds = false;
  const std::array<CohProfile, 3> start{known({2, 0, 0}), known({5, 0, 0}), CohProfile::unknown(2)};
  CHECK_FALSE(chase(kSeq, start, off).profiles[2][0].is_known());
  CHECK(chase(kSeq, start).profiles[2][0] == Dim::known(3));
}

TEST_CASE("bounds tighten intervals") {
  ChaseOptions only_bounds;
  only_bounds.alternating_sums = false;
  // A0 unknown, B0 = 5, C0 unknown: C0 <= B0 + A1 with A1 = 0.
  CohProfile a = CohProfile::zero(2);
  a[0] = Dim::unknown();
  const auto r = chase(kSeq, {a, known({5, 0, 0}), CohProfile::unknown(2)}, only_bounds);
  REQUIRE(r.profiles[2][0].upper().has_value());
  CHECK(*r.profiles[2][0].upper() <= 5);
}
