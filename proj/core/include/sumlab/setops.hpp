#pragma once

// Finite-set constructions: sumsets, difference/product/ratio sets,
// ordered-pair representation counts, iterated sums.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sumlab/ground.hpp"

namespace sumlab {

class SubgroupCtx;

/// Sorted, deduplicated finite set of ground elements of one kind.
///
/// Zero is admitted so that difference sets and popular-difference sets can
/// be housed here; theorem inputs are checked with `require_theorem_input`.
class GSet {
 public:
  GSet() = default;
  explicit GSet(Kind kind) : kind_(kind) {}

  /// Sorts and deduplicates.  Throws MixedKinds on a foreign element.
  static GSet from(std::vector<GroundElement> elements, Kind kind);
  static GSet of_integers(std::span<const long> values);
  static GSet of_integers(std::initializer_list<long> values);
  static GSet of_residues(std::span<const std::uint64_t> values, std::uint64_t p);
  static GSet of_residues(std::initializer_list<std::uint64_t> values, std::uint64_t p);

  const Kind& kind() const { return kind_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  const std::vector<GroundElement>& elements() const { return elements_; }
  const GroundElement& operator[](std::size_t i) const { return elements_[i]; }
  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  bool contains(const GroundElement& e) const;
  bool contains_zero() const;
  bool is_subset_of(const GSet& other) const;

  /// Throws ZeroElement when 0 is present and DegenerateInput when |A| < 2.
  void require_theorem_input() const;

  std::string str() const;  // "{a, b, ...}"

  friend bool operator==(const GSet& a, const GSet& b) {
    return a.kind_ == b.kind_ && a.elements_ == b.elements_;
  }

 private:
  Kind kind_;
  std::vector<GroundElement> elements_;
};

enum class SetOp { add, sub, mul, div };

/// Value -> ordered-pair (or tuple) multiplicity.
class CountTable {
 public:
  CountTable() = default;
  CountTable(Kind kind, std::vector<std::pair<GroundElement, std::uint64_t>> sorted_entries);

  const Kind& kind() const { return kind_; }
  std::size_t support_size() const { return entries_.size(); }
  /// Entries sorted by key.
  const std::vector<std::pair<GroundElement, std::uint64_t>>& entries() const { return entries_; }
  std::uint64_t count(const GroundElement& x) const;
  BigInt total() const;
  GSet support() const;

 private:
  Kind kind_;
  std::vector<std::pair<GroundElement, std::uint64_t>> entries_;
};

/// Table of a∘b over all ordered pairs.  ÷ skips nothing: B is zero-free by
/// precondition and ZeroDenominator is raised otherwise.
CountTable combine(const GSet& a, const GSet& b, SetOp op);

/// Support of combine(a, b, op).
GSet combine_set(const GSet& a, const GSet& b, SetOp op);

struct DoublingStats {
  Rational mult;  // |AA| / |A|
  Rational div;   // |A/A| / |A|
  Rational add;   // |A+A| / |A|
};
DoublingStats doubling_stats(const GSet& a);

/// r_{kA}(s): ordered k-tuples summing to s.  Total is |A|^k.
CountTable iterated_sum_counts(const GSet& a, int k);

/// A ∩ (A + d).
GSet translate_intersect(const GSet& a, const GroundElement& d);

/// Union of the cosets g^j Γ for the given indices.
GSet invariant_union(const SubgroupCtx& ctx, std::span<const std::uint64_t> coset_indices);

// Set file format: header "kind: rational" or "kind: modp p=<prime>", one
// element per line, '#' comments.
GSet parse_set_text(const std::string& text);
GSet read_set_file(const std::string& path);
std::string format_set_text(const GSet& a);

}  // namespace sumlab
