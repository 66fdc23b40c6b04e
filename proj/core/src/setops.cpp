#include "sumlab/setops.hpp"

#include <algorithm>

#include <absl/container/flat_hash_map.h>

#include "lattice.hpp"
#include "sumlab/subgroups.hpp"

namespace sumlab {

// ---------------------------------------------------------------- GSet

GSet GSet::from(std::vector<GroundElement> elements, Kind kind) {
  for (const auto& e : elements) {
    if (!(e.kind() == kind)) {
      throw Error(ErrorCode::MixedKinds, "element " + e.str() + " in a " + kind.str() + " set");
    }
  }
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  GSet s(kind);
  s.elements_ = std::move(elements);
  return s;
}

GSet GSet::of_integers(std::span<const long> values) {
  std::vector<GroundElement> v;
  v.reserve(values.size());
  for (long x : values) v.emplace_back(Rational(x));
  return from(std::move(v), Kind::rational());
}

GSet GSet::of_integers(std::initializer_list<long> values) {
  return of_integers(std::span<const long>(values.begin(), values.size()));
}

GSet GSet::of_residues(std::span<const std::uint64_t> values, std::uint64_t p) {
  std::vector<GroundElement> v;
  v.reserve(values.size());
  for (auto x : values) v.emplace_back(ModP(x, p));
  return from(std::move(v), Kind::modp(p));
}

GSet GSet::of_residues(std::initializer_list<std::uint64_t> values, std::uint64_t p) {
  return of_residues(std::span<const std::uint64_t>(values.begin(), values.size()), p);
}

bool GSet::contains(const GroundElement& e) const {
  return std::binary_search(elements_.begin(), elements_.end(), e);
}

bool GSet::contains_zero() const {
  return std::any_of(elements_.begin(), elements_.end(), [](const auto& e) { return e.is_zero(); });
}

bool GSet::is_subset_of(const GSet& other) const {
  return kind_ == other.kind_ &&
         std::includes(other.elements_.begin(), other.elements_.end(), elements_.begin(), elements_.end());
}

void GSet::require_theorem_input() const {
  if (contains_zero()) throw Error(ErrorCode::ZeroElement, "0 must not belong to the set");
  if (size() < 2) throw Error(ErrorCode::DegenerateInput, "set needs at least two elements");
}

std::string GSet::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (i) out += ", ";
    out += elements_[i].is_modp() ? std::to_string(elements_[i].modp().value()) : elements_[i].str();
  }
  return out + "}";
}

// ---------------------------------------------------------------- CountTable

CountTable::CountTable(Kind kind, std::vector<std::pair<GroundElement, std::uint64_t>> sorted_entries)
    : kind_(kind), entries_(std::move(sorted_entries)) {}

std::uint64_t CountTable::count(const GroundElement& x) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), x,
                             [](const auto& entry, const GroundElement& key) { return entry.first < key; });
  return (it != entries_.end() && it->first == x) ? it->second : 0;
}

BigInt CountTable::total() const {
  BigInt t = 0;
  for (const auto& [_, c] : entries_) t += static_cast<unsigned long>(c);
  return t;
}

GSet CountTable::support() const {
  std::vector<GroundElement> keys;
  keys.reserve(entries_.size());
  for (const auto& [k, _] : entries_) keys.push_back(k);
  return GSet::from(std::move(keys), kind_);
}

using detail::Scale;

namespace {

template <class Map>
CountTable table_from_map(const Kind& kind, const Map& m) {
  std::vector<std::pair<GroundElement, std::uint64_t>> entries(m.begin(), m.end());
  std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return CountTable(kind, std::move(entries));
}

template <class Ops>
CountTable decode_table(const Scale& scale, const detail::CountMap<Ops>& m) {
  std::vector<std::pair<GroundElement, std::uint64_t>> entries;
  entries.reserve(m.size());
  for (const auto& [k, c] : m) entries.emplace_back(detail::decode(k, scale), c);
  std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return CountTable(scale.kind, std::move(entries));
}

}  // namespace

CountTable combine(const GSet& a, const GSet& b, SetOp op) {
  if (!(a.kind() == b.kind())) throw Error(ErrorCode::MixedKinds, "combine of different kinds");
  if (op == SetOp::add || op == SetOp::sub) {
    return detail::with_lattice(a, b, [&](const auto& ops, const Scale& scale, const auto& enc) {
      using Ops = std::decay_t<decltype(ops)>;
      detail::CountMap<Ops> m;
      m.reserve(enc[0].size() * enc[1].size());
      for (const auto& x : enc[0]) {
        for (const auto& y : enc[1]) ++m[op == SetOp::add ? ops.add(x, y) : ops.sub(x, y)];
      }
      return decode_table<Ops>(scale, m);
    });
  }
  absl::flat_hash_map<GroundElement, std::uint64_t, GroundHash> m;
  m.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) ++m[op == SetOp::mul ? x * y : x / y];
  }
  return table_from_map(a.kind(), m);
}

GSet combine_set(const GSet& a, const GSet& b, SetOp op) { return combine(a, b, op).support(); }

DoublingStats doubling_stats(const GSet& a) {
  if (a.size() < 2) throw Error(ErrorCode::DegenerateInput, "doubling needs |A| >= 2");
  const BigInt n = static_cast<unsigned long>(a.size());
  auto ratio = [&](SetOp op) {
    return Rational::normalize(BigInt(static_cast<unsigned long>(combine(a, a, op).support_size())), n);
  };
  return {ratio(SetOp::mul), ratio(SetOp::div), ratio(SetOp::add)};
}

CountTable iterated_sum_counts(const GSet& a, int k) {
  if (k < 1) throw Error(ErrorCode::BadSpec, "k must be at least 1");
  // total |A|^k must fit the 64-bit multiplicities
  long double bound = 1;
  for (int i = 0; i < k; ++i) bound *= static_cast<long double>(a.size());
  if (bound >= 1.8e19L) throw Error(ErrorCode::TooLarge, "|A|^k exceeds 64-bit tuple counts");
  return detail::with_lattice(
      a,
      [&](const auto& ops, const Scale& scale, const auto& enc) {
        using Ops = std::decay_t<decltype(ops)>;
        detail::CountMap<Ops> cur;
        for (const auto& x : enc[0]) cur[x] += 1;
        for (int step = 1; step < k; ++step) {
          detail::CountMap<Ops> next;
          next.reserve(cur.size() * 2);
          for (const auto& [s, c] : cur) {
            for (const auto& x : enc[0]) next[ops.add(s, x)] += c;
          }
          cur = std::move(next);
        }
        return decode_table<Ops>(scale, cur);
      },
      /*headroom=*/static_cast<unsigned>(detail::kDefaultHeadroom + 64 - __builtin_clzll(static_cast<unsigned long long>(k))));
}

GSet translate_intersect(const GSet& a, const GroundElement& d) {
  std::vector<GroundElement> out;
  for (const auto& x : a) {
    if (a.contains(x - d)) out.push_back(x);
  }
  return GSet::from(std::move(out), a.kind());
}

GSet invariant_union(const SubgroupCtx& ctx, std::span<const std::uint64_t> coset_indices) {
  std::vector<GroundElement> out;
  for (auto j : coset_indices) {
    if (j >= ctx.index()) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "coset index " + std::to_string(j) + " outside [0, " + std::to_string(ctx.index()) + ")");
    }
    for (auto x : ctx.coset(j)) out.emplace_back(ModP(x, ctx.p()));
  }
  return GSet::from(std::move(out), Kind::modp(ctx.p()));
}

}  // namespace sumlab
