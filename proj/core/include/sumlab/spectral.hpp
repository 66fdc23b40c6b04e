#pragma once

// Dense matrices built from r_{A-A}: M[a][b] = sqrt r(a-b), the truncation
// M', and R[a][b] = r(a-b); quadratic forms, traces, principal eigenpairs.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "sumlab/ground.hpp"
#include "sumlab/setops.hpp"

namespace sumlab {

inline constexpr std::size_t kDenseOrderLimit = 512;

struct EnergyMatrices {
  GSet set;                    // rows/columns follow set order
  std::uint64_t delta = 1;
  Eigen::MatrixXd M;           // sqrt r(a-b)
  Eigen::MatrixXd Mprime;      // Δ^{-1/2} r(a-b) where r(a-b) <= Δ, else 0
  Eigen::MatrixXd R;           // r(a-b)
  std::vector<std::uint64_t> r_exact;  // R row-major, exact

  std::size_t order() const { return set.size(); }
};

/// Throws TooLarge when |A| exceeds kDenseOrderLimit, BadSpec when delta < 1.
EnergyMatrices build_matrices(const GSet& a, std::uint64_t delta);

struct PsdWitness {
  double direct = 0;          // vᵀRv
  double sum_of_squares = 0;  // Σ_x (Σ_a 1[x+a ∈ A] v_a)²
};

/// Throws DimensionMismatch.
PsdWitness psd_witness(const EnergyMatrices& mats, const Eigen::VectorXd& v);

struct TraceRoutes {
  double direct = 0;         // tr(M M R)
  double combinatorial = 0;  // Σ_{d,d'} √r(d) √r(d') r(d-d') |A ∩ (A+d) ∩ (A+d')|
};
TraceRoutes trace_m2r(const EnergyMatrices& mats);

struct Eigenpair {
  double mu1 = 0;
  Eigen::VectorXd v1;  // unit norm, first nonzero coordinate positive
  std::size_t iterations = 0;
};

inline constexpr std::size_t kPowerIterationCap = 100'000;

/// Power iteration on mat + sI (s = max row sum) from the all-ones vector,
/// stopping once successive Rayleigh quotients differ by less than
/// tol·max(1, |μ|).
/// Requires a symmetric entrywise-nonnegative matrix.  Throws NoConvergence.
Eigenpair principal_eigen(const Eigen::MatrixXd& mat, double tol = 1e-12);

struct SpectralChain {
  std::uint64_t delta = 0;
  std::size_t size = 0;
  BigInt Eprime;
  double mu1 = 0;
  double rayleigh_R = 0;  // v1ᵀ R v1
  double trace = 0;       // tr(M M R)
  double trace_combinatorial = 0;
  BigInt E3;
  BigInt sigma;
  BigInt lhs;  // E'^6
  BigInt rhs;  // |A|^6 E3 Δ² Σ
  double bound_i = 0;   // Δ^{-1/2} E'/|A|
  double bound_ii = 0;  // Δ^{1/2} μ1
  bool step_i = false;    // μ1 >= bound_i - tol
  bool step_ii = false;   // v1ᵀRv1 >= bound_ii - tol and bound_ii >= E'/|A| - tol
  bool final_ok = false;  // lhs <= rhs
  bool holds() const { return step_i && step_ii && final_ok; }
};

inline constexpr double kSpectralTolerance = 1e-6;

SpectralChain spectral_chain_check(const GSet& a, std::uint64_t delta);

}  // namespace sumlab
