#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sumlab/energy.hpp"
#include "sumlab/families.hpp"
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

GSet random_residues(std::mt19937& rng, int n, std::uint64_t p) {
  std::uniform_int_distribution<std::uint64_t> pick(0, p - 1);
  std::vector<std::uint64_t> v;
  while (GSet::of_residues(std::span<const std::uint64_t>(v), p).size() < static_cast<std::size_t>(n)) {
    v.push_back(pick(rng));
  }
  return GSet::of_residues(std::span<const std::uint64_t>(v), p);
}

}  // namespace

TEST(Energy, WorkedValuesOneTwoThree) {
  const GSet a = ints({1, 2, 3});
  EXPECT_EQ(energy(a), 19);
  EXPECT_EQ(moment_energy(a, 2), 19);
  EXPECT_EQ(moment_energy(a, 3), 45);
  EXPECT_EQ(t_k(a, 3), 141);
  EXPECT_EQ(sigma_sum(a), 319);
  EXPECT_EQ(t_k(a, 2), 19);
  EXPECT_EQ(testutil::code_of([&] { t_k(a, 1); }), ErrorCode::BadSpec);
}

TEST(Energy, PairEnergyIsAsymmetricInGeneral) {
  const GSet a = ints({1, 2, 3}), b = ints({10, 20});
  EXPECT_EQ(energy_pair(a, b), 6);
  EXPECT_EQ(energy_pair(a, a), energy(a));
}

TEST(Energy, MatchesOracleOnRandomIntegerSets) {
  std::mt19937 rng(7);
  const oracle::IntRing ring;
  for (int trial = 0; trial < 25; ++trial) {
    const GSet a = random_integers(rng, 2 + trial % 5, -20, 20);
    const auto v = oracle::scaled(a);
    EXPECT_EQ(energy(a), big(oracle::energy(ring, v))) << a.str();
    EXPECT_EQ(moment_energy(a, 3), big(oracle::e3_tuples(ring, v))) << a.str();
    EXPECT_EQ(t_k(a, 3), big(oracle::t3(ring, v))) << a.str();
    EXPECT_EQ(sigma_sum(a), big(oracle::sigma(ring, v))) << a.str();
    EXPECT_EQ(difference_triple_count(a), big(oracle::difference_triples(ring, v))) << a.str();
  }
}

TEST(Energy, MatchesOracleOnRationalSets) {
  const oracle::IntRing ring;
  const GSet a = GSet::from({GroundElement(Rational::parse("1/2")), GroundElement(Rational::parse("2/3")),
                             GroundElement(Rational(1)), GroundElement(Rational::parse("-5/6"))},
                            Kind::rational());
  const auto v = oracle::scaled(a);
  EXPECT_EQ(energy(a), big(oracle::energy(ring, v)));
  EXPECT_EQ(moment_energy(a, 3), big(oracle::e3_tuples(ring, v)));
  EXPECT_EQ(t_k(a, 3), big(oracle::t3(ring, v)));
  EXPECT_EQ(sigma_sum(a), big(oracle::sigma(ring, v)));
}

TEST(Energy, MatchesOracleModP) {
  std::mt19937 rng(5);
  for (std::uint64_t p : {5ULL, 7ULL, 13ULL}) {
    const oracle::ModRing ring{static_cast<long long>(p)};
    for (int trial = 0; trial < 6; ++trial) {
      const GSet a = random_residues(rng, 2 + trial % 4, p);
      const auto v = oracle::scaled(a);
      EXPECT_EQ(energy(a), big(oracle::energy(ring, v)));
      EXPECT_EQ(moment_energy(a, 3), big(oracle::e3_tuples(ring, v)));
      EXPECT_EQ(t_k(a, 3), big(oracle::t3(ring, v)));
      EXPECT_EQ(sigma_sum(a), big(oracle::sigma(ring, v)));
    }
  }
}

TEST(Energy, TkResiduesMatchesOracle) {
  const std::vector<std::uint64_t> v{1, 8};  // order-2 subgroup mod 9 is {1, 8}
  const oracle::ModRing ring{9};
  const std::vector<long long> w{1, 8};
  EXPECT_EQ(t_k_residues(v, 9, 3), big(oracle::t3(ring, w)));
  EXPECT_EQ(t_k_residues(v, 9, 2), big(oracle::energy(ring, w)));
}

TEST(Energy, E3RoutesAgree) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const GSet a = random_integers(rng, 3 + trial, 1, 60);
    const auto r = e3_routes(a);
    EXPECT_TRUE(r.agree()) << a.str();
    EXPECT_EQ(r.moment, big(oracle::e3_moment(oracle::IntRing{}, oracle::scaled(a))));
  }
  const auto r = e3_routes(ints({1, 2, 3}));
  EXPECT_EQ(r.intersections, 45);
  EXPECT_EQ(r.energies, 45);
}

TEST(Energy, RealMomentInterpolates) {
  const GSet a = generate("geo(q=2,n=8)");
  EXPECT_NEAR(moment_energy_real(a, 2), energy(a).get_d(), 1e-9);
  EXPECT_NEAR(moment_energy_real(a, 3), moment_energy(a, 3).get_d(), 1e-6);
  const double e32 = moment_energy_real(a, 1.5);
  EXPECT_GT(e32, moment_energy_real(a, 1));
  EXPECT_LT(e32, moment_energy_real(a, 2));
}

TEST(Popular, ThresholdAndPigeonhole) {
  const GSet a = ints({1, 2, 3});
  const auto pop = popular_differences(a);
  EXPECT_EQ(pop.delta.str(), "9/10");
  EXPECT_EQ(pop.members.size(), 5u);
  EXPECT_EQ(pop.mass, 9);
  std::mt19937 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const GSet b = random_integers(rng, 4 + trial, 1, 500);
    const auto p = popular_differences(b);
    EXPECT_GE(2 * p.mass, BigInt(static_cast<unsigned long>(b.size() * b.size())));
  }
}

TEST(Popular, DyadicLevelCarriesItsShare) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 15; ++trial) {
    const GSet a = random_integers(rng, 5 + trial, 1, 200);
    const auto lvl = dyadic_energy_level(a);
    EXPECT_GE(lvl.mass_sq * lvl.classes, energy(a));
    const CountTable r = combine(a, a, SetOp::sub);
    for (const auto& d : lvl.members) {
      const auto c = r.count(d);
      EXPECT_GE(c, lvl.delta);
      EXPECT_LT(c, 2 * lvl.delta);
    }
  }
}

TEST(TailSplit, SumsToEnergy) {
  const GSet a = generate("ap(n=12)");
  for (std::uint64_t delta : {1ULL, 3ULL, 6ULL, 12ULL}) {
    const auto s = tail_decompose(a, delta);
    EXPECT_EQ(s.e_low + s.e_high, energy(a));
  }
  EXPECT_EQ(tail_decompose(a, 12).e_high, 0);
  EXPECT_EQ(tail_decompose(a, 11).tail_support, 1u);
}

TEST(DifferenceTriples, RestrictionMustBeSubset) {
  const GSet a = ints({1, 2, 4});
  EXPECT_EQ(code_of([&] { difference_triple_count(a, ints({100})); }), ErrorCode::RestrictNotSubset);
  const BigInt full = difference_triple_count(a);
  const BigInt part = difference_triple_count(a, ints({0, 1}));
  EXPECT_LE(part, full);
}

TEST(Sigma, GuardFires) {
  const GSet a = generate("rand(n=40,seed=3)");
  EXPECT_EQ(code_of([&] { sigma_sum(a, 10); }), ErrorCode::TooLarge);
}

TEST(Profile, JsonCarriesDecimalStrings) {
  const std::vector<int> ks{2, 3};
  const auto prof = energy_profile(ints({1, 2, 3}), ks, true);
  const std::string j = prof.to_json();
  EXPECT_NE(j.find("\"E\":\"19\""), std::string::npos) << j;
  EXPECT_NE(j.find("\"E3\":\"45\""), std::string::npos) << j;
  EXPECT_NE(j.find("\"319\""), std::string::npos) << j;
  ASSERT_TRUE(prof.sigma.has_value());
  EXPECT_EQ(prof.Tk.at(3), 141);
}
