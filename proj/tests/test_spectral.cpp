#include <random>

#include <gtest/gtest.h>

#include "sumlab/energy.hpp"
#include "sumlab/families.hpp"
#include "sumlab/spectral.hpp"
#include "test_util.hpp"

using namespace sumlab;
using testutil::code_of;
using testutil::ints;

TEST(Matrices, EntriesFollowRepresentationCounts) {
  const auto m = build_matrices(ints({1, 2, 3}), 2);
  ASSERT_EQ(m.order(), 3u);
  // r(0) = 3, r(±1) = 2, r(±2) = 1.
  EXPECT_DOUBLE_EQ(m.R(0, 0), 3);
  EXPECT_DOUBLE_EQ(m.R(0, 1), 2);
  EXPECT_DOUBLE_EQ(m.R(0, 2), 1);
  EXPECT_DOUBLE_EQ(m.M(0, 0), std::sqrt(3.0));
  EXPECT_DOUBLE_EQ(m.Mprime(0, 0), 0);  // r = 3 > Δ = 2
  EXPECT_DOUBLE_EQ(m.Mprime(0, 1), 2 / std::sqrt(2.0));
  EXPECT_EQ(m.r_exact[1], 2u);
  EXPECT_EQ(code_of([] { build_matrices(ints({1, 2}), 0); }), ErrorCode::BadSpec);
}

TEST(Psd, QuadraticFormIsSumOfSquares) {
  const auto m = build_matrices(generate("rand(n=12,seed=4,max=100)"), 1);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(12);
  for (int k = 0; k < 200; ++k) {
    for (int i = 0; i < 12; ++i) v[i] = normal(rng);
    const auto w = psd_witness(m, v);
    EXPECT_GE(w.direct, -1e-9);
    EXPECT_NEAR(w.direct, w.sum_of_squares, 1e-9 * std::max(1.0, w.sum_of_squares));
  }
  EXPECT_EQ(code_of([&] { psd_witness(m, Eigen::VectorXd::Ones(3)); }), ErrorCode::DimensionMismatch);
}

TEST(Trace, RoutesAgree) {
  for (const char* dsl : {"ap(n=6)", "geo(q=3,n=7)", "rand(n=15,seed=2,max=60)"}) {
    const GSet a = generate(dsl);
    for (std::uint64_t delta : {std::uint64_t{1}, std::uint64_t{2}, a.size()}) {
      const auto t = trace_m2r(build_matrices(a, delta));
      EXPECT_NEAR(t.direct, t.combinatorial, 1e-6 * std::abs(t.combinatorial)) << dsl;
    }
  }
  const auto t = trace_m2r(build_matrices(ints({1, 2, 3}), 3));
  EXPECT_NEAR(t.direct, 118.4337476, 1e-6);
}

TEST(Eigen, PowerIterationOnKnownMatrix) {
  Eigen::MatrixXd m(2, 2);
  m << 2, 1, 1, 2;
  const auto e = principal_eigen(m);
  EXPECT_NEAR(e.mu1, 3, 1e-9);
  EXPECT_NEAR(e.v1[0], std::sqrt(0.5), 1e-6);
  EXPECT_GT(e.v1[1], 0);
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(3, 3);
  EXPECT_NEAR(principal_eigen(z).mu1, 0, 1e-12);
}

TEST(Eigen, AgreesWithDenseSolver) {
  const auto mats = build_matrices(generate("rand(n=20,seed=6,max=80)"), 2);
  const auto e = principal_eigen(mats.R);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(mats.R);
  EXPECT_NEAR(e.mu1, solver.eigenvalues().maxCoeff(), 1e-6 * e.mu1);
}

TEST(Chain, WorkedCaseDeltaThree) {
  const auto c = spectral_chain_check(ints({1, 2, 3}), 3);
  EXPECT_NEAR(c.mu1, 3.679038, 1e-6);
  EXPECT_NEAR(c.bound_i, 3.656552, 1e-6);
  EXPECT_TRUE(c.holds());
  EXPECT_EQ(c.E3, 45);
  EXPECT_EQ(c.sigma, 319);
}

TEST(Chain, FinalInequalityNumbers) {
  // E' = 19 at Δ = 3 (every r <= 3), so E'^6 = 47045881 against
  // |A|^6 E3 Δ² Σ = 729 · 45 · 9 · 319.
  const auto c = spectral_chain_check(ints({1, 2, 3}), 3);
  EXPECT_EQ(c.Eprime, 19);
  EXPECT_EQ(c.lhs, 47045881);
  EXPECT_EQ(c.rhs, 94183155);
  EXPECT_TRUE(c.final_ok);
}

TEST(Chain, HoldsAcrossDeltas) {
  for (const char* dsl : {"ap(n=10)", "geo(q=2,n=9)", "rand(n=14,seed=3,max=40)"}) {
    const GSet a = generate(dsl);
    for (std::uint64_t delta : {std::uint64_t{1}, (a.size() + 1) / 2, a.size()}) {
      EXPECT_TRUE(spectral_chain_check(a, delta).holds()) << dsl << " delta=" << delta;
    }
  }
}
