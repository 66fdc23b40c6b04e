#pragma once

// Energy-type functionals of finite sets: E(A,B), E_q, T_k, Σ, popular
// differences, dyadic levels, tail splits.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "sumlab/ground.hpp"
#include "sumlab/setops.hpp"

namespace sumlab {

/// E(A,B) = Σ_d |A ∩ (B+d)|².
BigInt energy_pair(const GSet& a, const GSet& b);
inline BigInt energy(const GSet& a) { return energy_pair(a, a); }

/// E_q(A) = Σ_d r_{A-A}(d)^q for integral q >= 1.
BigInt moment_energy(const GSet& a, unsigned q);
/// Floating-point E_q for any real q >= 1 (E_{3/2} in practice).
double moment_energy_real(const GSet& a, double q);

/// T_k(A) = Σ_s r_{kA}(s)².
BigInt t_k(const GSet& a, int k);
/// T_k of a set of residues modulo any m (used for subgroups of (Z/p²Z)^×).
BigInt t_k_residues(std::span<const std::uint64_t> values, std::uint64_t modulus, int k);

inline constexpr std::size_t kSigmaSupportLimit = 100'000;

/// Σ = Σ_{d,d'} r(d) r(d') r(d-d')² over the support of r = r_{A-A}.
/// Throws TooLarge when |A-A| exceeds `limit`.
BigInt sigma_sum(const GSet& a, std::size_t limit = kSigmaSupportLimit);

/// Σ_{d,d'} r(d) r(d') r(d-d').
BigInt weighted_triple_sum(const GSet& a, std::size_t limit = kSigmaSupportLimit);

/// #{(d,d') ∈ D × R : d - d' ∈ D}, D = A-A, R = restrict or D.
/// Throws RestrictNotSubset.
BigInt difference_triple_count(const GSet& a, const std::optional<GSet>& restrict = std::nullopt);

/// The three independent evaluations of E_3.
struct E3Routes {
  BigInt moment;         // Σ_x r³(x)
  BigInt intersections;  // Σ_{d,d'} |A ∩ (A+d) ∩ (A+d')|²
  BigInt energies;       // Σ_d E(A, A_d), A_d = A ∩ (A+d)
  bool agree() const { return moment == intersections && moment == energies; }
};
E3Routes e3_routes(const GSet& a);

struct PopularSet {
  Rational delta;  // |A|² / (2|A-A|)
  GSet members;    // {d : r(d) >= Δ}
  BigInt mass;     // Σ_{d∈P} r(d)
};
PopularSet popular_differences(const GSet& a);

struct DyadicLevel {
  std::uint64_t delta = 0;  // members have r ∈ [Δ, 2Δ)
  GSet members;
  BigInt mass_sq;           // Σ_{members} r²
  unsigned classes = 0;     // number of nonempty dyadic classes
};
/// Dyadic class with the largest Σ r²; ties go to the smaller Δ.
DyadicLevel dyadic_energy_level(const GSet& a);

struct TailSplit {
  BigInt e_low;   // Σ_{r<=Δ} r²
  BigInt e_high;  // Σ_{r>Δ} r²
  std::uint64_t tail_support = 0;
};
TailSplit tail_decompose(const GSet& a, std::uint64_t delta);

struct EnergyProfile {
  std::size_t size = 0;
  BigInt E;
  BigInt E3;
  double E32 = 0;
  std::map<int, BigInt> Tk;
  std::optional<BigInt> sigma;

  /// Flat JSON object; integers as decimal strings.
  std::string to_json() const;
};

EnergyProfile energy_profile(const GSet& a, std::span<const int> ks = {}, bool with_sigma = false);

}  // namespace sumlab
