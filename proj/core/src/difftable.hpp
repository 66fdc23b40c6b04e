#pragma once

// Representation-count table with fast point lookups: a dense array when the
// key range is small, the hash map otherwise.

#include <type_traits>
#include <utility>
#include <vector>

#include "lattice.hpp"

namespace sumlab::detail {

inline constexpr std::uint64_t kDenseLimit = 1ULL << 26U;

template <class Ops>
class DiffTable {
 public:
  using V = typename Ops::value_type;

  DiffTable(const Ops& ops, CountMap<Ops> counts) : map_(std::move(counts)) {
    entries_.assign(map_.begin(), map_.end());
    std::uint64_t max_count = 0;
    for (const auto& [_, c] : entries_) max_count = std::max(max_count, c);
    if (max_count >= (1ULL << 32U)) return;
    if constexpr (std::is_same_v<Ops, ResidueOps>) {
      if (ops.m <= kDenseLimit) {
        dense_.assign(ops.m, 0);
        for (const auto& [k, c] : entries_) dense_[k] = static_cast<std::uint32_t>(c);
      }
    } else if constexpr (std::is_same_v<Ops, I128Ops>) {
      if (entries_.empty()) return;
      i128 lo = entries_.front().first, hi = lo;
      for (const auto& [k, _] : entries_) {
        lo = std::min(lo, k);
        hi = std::max(hi, k);
      }
      if (hi - lo < static_cast<i128>(kDenseLimit)) {
        lo_ = lo;
        hi_ = hi;
        dense_.assign(static_cast<std::size_t>(hi - lo + 1), 0);
        for (const auto& [k, c] : entries_) dense_[static_cast<std::size_t>(k - lo)] = static_cast<std::uint32_t>(c);
      }
    }
  }

  std::uint64_t get(const V& key) const {
    if constexpr (std::is_same_v<Ops, ResidueOps>) {
      if (!dense_.empty()) return dense_[key];
    } else if constexpr (std::is_same_v<Ops, I128Ops>) {
      if (!dense_.empty()) return (key < lo_ || key > hi_) ? 0 : dense_[static_cast<std::size_t>(key - lo_)];
    }
    return lookup<Ops>(map_, key);
  }

  bool contains(const V& key) const { return get(key) != 0; }
  const std::vector<std::pair<V, std::uint64_t>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  CountMap<Ops> map_;
  std::vector<std::pair<V, std::uint64_t>> entries_;
  std::vector<std::uint32_t> dense_;
  i128 lo_ = 0, hi_ = -1;
};

/// r_{A-A} of one encoded set as a DiffTable.
template <class Ops>
DiffTable<Ops> self_differences(const Ops& ops, const std::vector<typename Ops::value_type>& a) {
  return DiffTable<Ops>(ops, difference_counts(ops, std::span<const typename Ops::value_type>(a),
                                               std::span<const typename Ops::value_type>(a)));
}

inline unsigned __int128 u128(std::uint64_t x) { return static_cast<unsigned __int128>(x); }

}  // namespace sumlab::detail
