#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sumlab/energy.hpp"
#include "sumlab/families.hpp"
#include "sumlab/incidence.hpp"
#include "test_util.hpp"

using namespace sumlab;
using testutil::code_of;
using testutil::ints;

namespace {

BigInt big(long long v) { return BigInt(static_cast<long>(v)); }

GSet random_integers(std::mt19937& rng, int n, long lo, long hi) {
  std::uniform_int_distribution<long> pick(lo, hi);
  std::vector<long> v;
  while (static_cast<int>(GSet::of_integers(std::span<const long>(v)).size()) < n) v.push_back(pick(rng));
  return GSet::of_integers(std::span<const long>(v));
}

}  // namespace

TEST(CollinearTriples, OneTwoThree) {
  const GSet a = ints({1, 2, 3});
  EXPECT_EQ(collinear_triples(a), 48);
  EXPECT_EQ(collinear_triples(a, a), 48);
  // 729 ordered triples, of which 9·8·7 = 504 have distinct points.
  EXPECT_EQ(collinear_triples(a, TripleConvention::with_repeats), 48 + 729 - 504);
}

TEST(CollinearTriples, RoutesAgreeWithOracleOnIntegers) {
  std::mt19937 rng(21);
  const oracle::IntRing ring;
  for (int trial = 0; trial < 20; ++trial) {
    const GSet a = random_integers(rng, 2 + trial % 5, -9, 9);
    const auto v = oracle::scaled(a);
    const BigInt want = big(oracle::collinear_distinct(ring, v, v));
    EXPECT_EQ(square_grid_triples(a), want) << a.str();
    EXPECT_EQ(collinear_triples(a, a), want) << a.str();
    EXPECT_EQ(line_profile(a, a).triple_sum(), want) << a.str();
  }
}

TEST(CollinearTriples, RationalGrid) {
  const GSet a = GSet::from({GroundElement(Rational::parse("1/2")), GroundElement(Rational::parse("1/3")),
                             GroundElement(Rational(1)), GroundElement(Rational(2))},
                            Kind::rational());
  const auto v = oracle::scaled(a);
  const BigInt want = big(oracle::collinear_distinct(oracle::IntRing{}, v, v));
  EXPECT_EQ(square_grid_triples(a), want);
  EXPECT_EQ(collinear_triples(a, a), want);
}

TEST(CollinearTriples, RectangularGrid) {
  const GSet x = ints({1, 2, 3, 5}), y = ints({-1, 4, 7});
  const auto want =
      big(oracle::collinear_distinct(oracle::IntRing{}, oracle::scaled(x), oracle::scaled(y)));
  EXPECT_EQ(collinear_triples(x, y), want);
  EXPECT_EQ(line_profile(x, y).triple_sum(), want);
}

TEST(CollinearTriples, ModP) {
  std::mt19937 rng(4);
  for (long long p : {5LL, 7LL, 11LL}) {
    const oracle::ModRing ring{p};
    std::uniform_int_distribution<std::uint64_t> pick(0, static_cast<std::uint64_t>(p - 1));
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<std::uint64_t> v;
      for (int i = 0; i < 4; ++i) v.push_back(pick(rng));
      const GSet a = GSet::of_residues(std::span<const std::uint64_t>(v), static_cast<std::uint64_t>(p));
      const auto w = oracle::scaled(a);
      const BigInt want = big(oracle::collinear_distinct(ring, w, w));
      EXPECT_EQ(square_grid_triples(a), want);
      EXPECT_EQ(collinear_triples(a, a), want);
    }
  }
}

TEST(CollinearTriples, SubgroupSymmetryRoute) {
  for (auto [p, t] : {std::pair{7ULL, 3ULL}, {13ULL, 4ULL}, {31ULL, 5ULL}, {101ULL, 4ULL}}) {
    const auto ctx = subgroup_context(p, t);
    std::vector<long long> g(ctx.gamma().begin(), ctx.gamma().end());
    const BigInt want = big(oracle::collinear_distinct(oracle::ModRing{static_cast<long long>(p)}, g, g));
    EXPECT_EQ(subgroup_collinear_triples(ctx), want) << p << "," << t;
    EXPECT_EQ(collinear_triples(ctx.as_gset()), want);
  }
}

TEST(LineProfile, PairSumCountsEveryPair) {
  const GSet a = generate("geo(q=2,n=5)");
  const auto lp = line_profile(a, a);
  const BigInt n = static_cast<unsigned long>(lp.points());
  EXPECT_EQ(lp.pair_sum(), n * (n - 1));
  EXPECT_EQ(lp.lines_with(5), 11u);  // rows, columns and the diagonal y = x
  EXPECT_EQ(lp.to_csv().rfind("a,b,c,k\n", 0), 0u);
}

TEST(LineProfile, GuardFires) {
  const GSet a = generate("ap(n=400)");
  EXPECT_EQ(code_of([&] { line_profile(a, a); }), ErrorCode::TooLarge);
  EXPECT_EQ(code_of([&] { square_grid_triples(generate("ap(n=700)")); }), ErrorCode::TooLarge);
}

TEST(UnitSlopeLines, CubesSumToE3) {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const GSet a = random_integers(rng, 5 + trial, 1, 80);
    BigInt s = 0;
    for (const auto& [_, k] : unit_slope_line_counts(a)) s += BigInt(static_cast<unsigned long>(k * k * k));
    EXPECT_EQ(s, moment_energy(a, 3));
  }
}

TEST(SubgroupLines, CountsAndErrors) {
  const auto ctx = subgroup_context(13, 4);
  const std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs{{1, 1}, {2, 3}};
  BigInt want = 0;
  for (auto [u, v] : pairs) {
    long long l = 0;
    for (auto x : ctx.gamma())
      for (auto y : ctx.gamma()) l += (u * x + v * y) % 13 == 1 ? 1 : 0;
    want += big(l * l);
  }
  EXPECT_EQ(subgroup_line_counts(ctx, pairs, 2), want);
  const std::vector<std::pair<std::uint64_t, std::uint64_t>> bad{{0, 1}};
  EXPECT_EQ(code_of([&] { subgroup_line_counts(ctx, bad, 2); }), ErrorCode::ZeroCoefficient);
}
