#include <set>

#include <gtest/gtest.h>

#include "sumlab/families.hpp"
#include "sumlab/setops.hpp"
#include "test_util.hpp"

using namespace sumlab;
using testutil::code_of;

namespace {

/// Reference draw sequence written from the documented constants.
std::vector<std::uint64_t> reference_draws(std::uint64_t seed, int count) {
  std::uint64_t s = seed;
  auto step = [&] {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return s >> 32U;
  };
  std::vector<std::uint64_t> out;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t hi = step();
    const std::uint64_t lo = step();
    out.push_back((hi << 32U) | lo);
  }
  return out;
}

}  // namespace

TEST(Families, GeometricDoubling) {
  const GSet a = generate("geo(q=2,n=8)");
  EXPECT_EQ(a.size(), 8u);
  EXPECT_EQ(a.str(), "{1, 2, 4, 8, 16, 32, 64, 128}");
  EXPECT_EQ(doubling_stats(a).mult.str(), "15/8");
  for (int n = 2; n <= 20; ++n) {
    const GSet g = generate("geo(q=3,n=" + std::to_string(n) + ")");
    EXPECT_EQ(combine_set(g, g, SetOp::mul).size(), static_cast<std::size_t>(2 * n - 1));
  }
}

TEST(Families, GeometricRationalRatio) {
  const GSet a = generate("geo(q=1/2,n=3,start=4)");
  EXPECT_EQ(a.str(), "{1, 2, 4}");
  EXPECT_EQ(code_of([] { generate("geo(q=1,n=3)"); }), ErrorCode::BadSpec);
  EXPECT_EQ(code_of([] { generate("geo(q=-1,n=3)"); }), ErrorCode::BadSpec);
  EXPECT_EQ(code_of([] { generate("geo(q=0,n=3)"); }), ErrorCode::BadSpec);
}

TEST(Families, ArithmeticSumset) {
  const GSet a = generate("ap(n=10)");
  EXPECT_EQ(combine_set(a, a, SetOp::add).size(), 19u);
  EXPECT_EQ(generate("ap(n=3,start=5,step=-2)").str(), "{1, 3, 5}");
  EXPECT_EQ(code_of([] { generate("ap(n=3,start=-1,step=1)"); }), ErrorCode::BadSpec);
}

TEST(Families, RandomIsReproducibleAndDistinct) {
  const GSet a = generate("rand(n=10,seed=1)");
  const GSet b = generate("rand(n=10,seed=1)");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 10u);
  EXPECT_NE(a, generate("rand(n=10,seed=2)"));
  for (const auto& e : a) {
    EXPECT_GE(e.rational(), Rational(1));
    EXPECT_LE(e.rational(), Rational(1'000'000));
  }
  const GSet tight = generate("rand(n=12,seed=5,max=12)");
  EXPECT_EQ(tight, generate("ap(n=12)"));
  EXPECT_EQ(code_of([] { generate("rand(n=5,seed=1,max=4)"); }), ErrorCode::BadSpec);
}

TEST(Families, RandomFollowsDocumentedGenerator) {
  Lcg64 rng(42);
  for (auto want : reference_draws(42, 8)) EXPECT_EQ(rng.next(), want);

  // rand(...) keeps the first n distinct values 1 + x mod max below the
  // largest multiple of max.
  const std::uint64_t max = 1000;
  const std::uint64_t limit = (~0ULL / max) * max;
  std::set<long> want;
  std::vector<long> order;
  for (auto x : reference_draws(9, 200)) {
    if (x >= limit) continue;
    const long v = static_cast<long>(1 + x % max);
    if (want.insert(v).second) order.push_back(v);
    if (order.size() == 6) break;
  }
  EXPECT_EQ(generate("rand(n=6,seed=9,max=1000)"), GSet::of_integers(std::span<const long>(order)));
}

TEST(Families, SubgroupAndUnion) {
  const GSet g = generate("subgroup(p=13,t=4)");
  EXPECT_EQ(g, GSet::of_residues({1, 5, 8, 12}, 13));
  const GSet u = generate("union(ap(n=3),geo(q=2,n=4))");
  EXPECT_EQ(u.str(), "{1, 2, 3, 4, 8}");
  EXPECT_EQ(code_of([] { generate("union(ap(n=3),subgroup(p=7,t=3))"); }), ErrorCode::MixedKinds);
}

TEST(Families, DslErrorsAndLabels) {
  EXPECT_EQ(parse_family("geo( q = 2 , n = 2^4 )").label(), "geo(q=2,n=16)");
  EXPECT_EQ(parse_family("rand(n=8,seed=3)").label(), "rand(n=8,seed=3,max=1000000)");
  EXPECT_EQ(parse_family("rand(n=8,seed=3,max=10^3)").max, 1000u);
  EXPECT_EQ(code_of([] { parse_family("cube(n=3)"); }), ErrorCode::BadSpec);
  EXPECT_EQ(code_of([] { parse_family("ap(n=3,n=4)"); }), ErrorCode::BadSpec);
  EXPECT_EQ(code_of([] { parse_family("ap(m=3)"); }), ErrorCode::BadSpec);
  EXPECT_EQ(code_of([] { parse_family("geo(q=2,n=4"); }), ErrorCode::BadSpec);
  EXPECT_EQ(code_of([] { generate("subgroup(p=12,t=2)"); }), ErrorCode::NotPrime);
}
