#pragma once

// Line statistics of Cartesian grids X × Y: per-line point counts, collinear
// triples, unit-slope line counts, and subgroup lines ux + vy = 1.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sumlab/ground.hpp"
#include "sumlab/setops.hpp"
#include "sumlab/subgroups.hpp"

namespace sumlab {

/// Line ax + by = c.  Rational grids: integers with gcd(a,b,c) = 1 and the
/// leading nonzero coefficient positive.  Mod-p grids: residues with the
/// leading nonzero coefficient equal to 1.
struct LineKey {
  BigInt a, b, c;
  friend bool operator==(const LineKey&, const LineKey&) = default;
  friend std::strong_ordering operator<=>(const LineKey& x, const LineKey& y);
};

class LineProfile {
 public:
  LineProfile() = default;
  LineProfile(Kind kind, std::size_t points, std::vector<std::pair<LineKey, std::uint64_t>> lines);

  const Kind& kind() const { return kind_; }
  std::size_t points() const { return points_; }
  /// Lines with k >= 2 grid points, sorted by key.
  const std::vector<std::pair<LineKey, std::uint64_t>>& lines() const { return lines_; }
  std::uint64_t lines_with(std::uint64_t k) const;

  BigInt pair_sum() const;    // Σ k(k-1), equals N(N-1)
  BigInt triple_sum() const;  // Σ k(k-1)(k-2)
  std::string to_csv() const;  // header "a,b,c,k"

 private:
  Kind kind_;
  std::size_t points_ = 0;
  std::vector<std::pair<LineKey, std::uint64_t>> lines_;
};

inline constexpr std::size_t kGridPointLimit = 100'000;

/// Throws TooLarge when |X||Y| exceeds kGridPointLimit.
LineProfile line_profile(const GSet& x, const GSet& y);

enum class TripleConvention {
  distinct,      // ordered triples of pairwise-distinct points
  with_repeats,  // ordered triples, repeated points allowed
};

/// Collinear triples of X × Y by anchor/direction grouping.
BigInt collinear_triples(const GSet& x, const GSet& y, TripleConvention convention = TripleConvention::distinct);
inline constexpr std::size_t kRatioWorkLimit = 200'000'000;

/// Collinear triples of X × X from the ratio classes (x3-x1)/(x2-x1), in
/// O(|X|³) time.  Throws TooLarge when |X|³ exceeds kRatioWorkLimit.
BigInt square_grid_triples(const GSet& x, TripleConvention convention = TripleConvention::distinct);

/// Square grids go through square_grid_triples.
inline BigInt collinear_triples(const GSet& a, TripleConvention convention = TripleConvention::distinct) {
  return square_grid_triples(a, convention);
}

/// 𝒯(Γ) on Γ × Γ, using that (x,y) -> (λx, μy), λ, μ ∈ Γ, is transitive on
/// the grid and preserves lines: t² times the count at the anchor (1,1).
BigInt subgroup_collinear_triples(const SubgroupCtx& ctx, TripleConvention convention = TripleConvention::distinct);

/// k_d = #{(x,y) ∈ A×A : y = x + d} for each d with k_d >= 1, sorted by d.
std::vector<std::pair<GroundElement, std::uint64_t>> unit_slope_line_counts(const GSet& a);

/// Σ_{(u,v)} l_{u,v}^exponent, l_{u,v} = #{(x,y) ∈ Γ×Γ : ux + vy = 1}.
/// Throws ZeroCoefficient.
BigInt subgroup_line_counts(const SubgroupCtx& ctx, std::span<const std::pair<std::uint64_t, std::uint64_t>> pairs,
                            unsigned exponent);

}  // namespace sumlab
