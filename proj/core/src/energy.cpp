#include "sumlab/energy.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "difftable.hpp"
#include "lattice.hpp"

namespace sumlab {

using detail::BigAccumulator;
using detail::CountMap;
using detail::DiffTable;
using detail::Scale;
using detail::u128;

namespace {

template <class Ops>
std::vector<std::pair<typename Ops::value_type, std::uint64_t>> diff_entries(
    const Ops& ops, const std::vector<typename Ops::value_type>& a) {
  auto m = detail::difference_counts(ops, std::span<const typename Ops::value_type>(a),
                                     std::span<const typename Ops::value_type>(a));
  return {m.begin(), m.end()};
}

/// Calls f(count) for each value of r_{A-A}.
template <class F>
void for_each_r(const GSet& a, F&& f) {
  detail::with_lattice(a, [&](const auto& ops, const Scale&, const auto& enc) {
    for (const auto& [_, c] : diff_entries(ops, enc[0])) f(c);
    return 0;
  });
}

template <class Ops>
CountMap<Ops> iterated_counts(const Ops& ops, std::span<const typename Ops::value_type> a, int k) {
  CountMap<Ops> cur;
  for (const auto& x : a) cur[x] += 1;
  for (int step = 1; step < k; ++step) {
    CountMap<Ops> next;
    next.reserve(cur.size() * 2);
    for (const auto& [s, c] : cur) {
      for (const auto& x : a) next[ops.add(s, x)] += c;
    }
    cur = std::move(next);
  }
  return cur;
}

void guard_tuple_total(std::size_t n, int k) {
  if (k < 2) throw Error(ErrorCode::BadSpec, "T_k needs k >= 2");
  long double bound = 1;
  for (int i = 0; i < k; ++i) bound *= static_cast<long double>(n);
  if (bound >= 1.8e19L) throw Error(ErrorCode::TooLarge, "|A|^k exceeds 64-bit tuple counts");
}

template <class Map>
BigInt sum_of_squares(const Map& m) {
  BigAccumulator acc;
  for (const auto& [_, c] : m) acc.add(u128(c) * c);
  return acc.value();
}

unsigned headroom_for(int k) {
  return detail::kDefaultHeadroom + static_cast<unsigned>(64 - __builtin_clzll(static_cast<unsigned long long>(k)));
}

void guard_support(std::size_t support, std::size_t limit) {
  if (support > limit) {
    throw Error(ErrorCode::TooLarge, "|A-A| = " + std::to_string(support) + " exceeds the pair-sum limit " +
                                         std::to_string(limit));
  }
}

}  // namespace

BigInt energy_pair(const GSet& a, const GSet& b) {
  return detail::with_lattice(a, b, [](const auto& ops, const Scale&, const auto& enc) {
    using Ops = std::decay_t<decltype(ops)>;
    using V = typename Ops::value_type;
    return sum_of_squares(detail::difference_counts(ops, std::span<const V>(enc[0]), std::span<const V>(enc[1])));
  });
}

BigInt moment_energy(const GSet& a, unsigned q) {
  if (q < 1) throw Error(ErrorCode::BadSpec, "E_q needs q >= 1");
  BigAccumulator acc;
  for_each_r(a, [&](std::uint64_t r) {
    if (q <= 3) {
      unsigned __int128 v = 1;
      for (unsigned i = 0; i < q; ++i) v *= r;
      acc.add(v);
    } else {
      BigInt v;
      mpz_ui_pow_ui(v.get_mpz_t(), r, q);
      acc.add(v);
    }
  });
  return acc.value();
}

double moment_energy_real(const GSet& a, double q) {
  if (!(q >= 1)) throw Error(ErrorCode::BadSpec, "E_q needs q >= 1");
  // Group equal r values so each power is taken once; the sum is then exact
  // integers times correctly rounded powers.
  std::map<std::uint64_t, std::uint64_t> hist;
  for_each_r(a, [&](std::uint64_t r) { ++hist[r]; });
  long double total = 0;
  for (const auto& [r, mult] : hist) {
    total += static_cast<long double>(mult) * std::pow(static_cast<long double>(r), static_cast<long double>(q));
  }
  return static_cast<double>(total);
}

BigInt t_k(const GSet& a, int k) {
  guard_tuple_total(a.size(), k);
  return detail::with_lattice(
      a,
      [&](const auto& ops, const Scale&, const auto& enc) {
        using Ops = std::decay_t<decltype(ops)>;
        using V = typename Ops::value_type;
        return sum_of_squares(iterated_counts(ops, std::span<const V>(enc[0]), k));
      },
      headroom_for(k));
}

BigInt t_k_residues(std::span<const std::uint64_t> values, std::uint64_t modulus, int k) {
  guard_tuple_total(values.size(), k);
  if (modulus == 0 || modulus > (1ULL << 62U)) throw Error(ErrorCode::BadSpec, "modulus out of range");
  std::vector<std::uint64_t> v(values.begin(), values.end());
  for (auto& x : v) x %= modulus;
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  detail::ResidueOps ops{modulus};
  return sum_of_squares(iterated_counts(ops, std::span<const std::uint64_t>(v), k));
}

BigInt sigma_sum(const GSet& a, std::size_t limit) {
  return detail::with_lattice(a, [&](const auto& ops, const Scale&, const auto& enc) {
    const auto r = detail::self_differences(ops, enc[0]);
    guard_support(r.size(), limit);
    BigAccumulator acc;
    for (const auto& [d, rd] : r.entries()) {
      unsigned __int128 row = 0;
      for (const auto& [e, re] : r.entries()) {
        const std::uint64_t rde = r.get(ops.sub(d, e));
        if (rde != 0) row += u128(re) * rde * rde;
      }
      // row <= |A|^2 · |A|^2 per entry sum; scale by r(d) in big arithmetic when large
      if (row < (static_cast<unsigned __int128>(1) << 90U)) {
        acc.add(row * rd);
      } else {
        acc.add(detail::to_big(row) * static_cast<unsigned long>(rd));
      }
    }
    return acc.value();
  });
}

BigInt weighted_triple_sum(const GSet& a, std::size_t limit) {
  return detail::with_lattice(a, [&](const auto& ops, const Scale&, const auto& enc) {
    const auto r = detail::self_differences(ops, enc[0]);
    guard_support(r.size(), limit);
    BigAccumulator acc;
    for (const auto& [d, rd] : r.entries()) {
      unsigned __int128 row = 0;
      for (const auto& [e, re] : r.entries()) row += u128(re) * r.get(ops.sub(d, e));
      acc.add(row * rd);
    }
    return acc.value();
  });
}

BigInt difference_triple_count(const GSet& a, const std::optional<GSet>& restrict) {
  const GSet& rset = restrict ? *restrict : a;
  return detail::with_lattice(a, rset, [&](const auto& ops, const Scale&, const auto& enc) {
    using V = typename std::decay_t<decltype(ops)>::value_type;
    const auto r = detail::self_differences(ops, enc[0]);
    std::vector<V> right;
    if (restrict) {
      for (const auto& x : enc[1]) {
        if (!r.contains(x)) {
          throw Error(ErrorCode::RestrictNotSubset, "restriction set is not contained in A-A");
        }
        right.push_back(x);
      }
    } else {
      for (const auto& [d, _] : r.entries()) right.push_back(d);
    }
    std::uint64_t count = 0;
    for (const auto& [d, _] : r.entries()) {
      for (const auto& e : right) count += r.contains(ops.sub(d, e)) ? 1 : 0;
    }
    return BigInt(static_cast<unsigned long>(count));
  });
}

E3Routes e3_routes(const GSet& a) {
  return detail::with_lattice(a, [&](const auto& ops, const Scale&, const auto& enc) {
    using Ops = std::decay_t<decltype(ops)>;
    using V = typename Ops::value_type;
    const auto& av = enc[0];
    const auto r = detail::self_differences(ops, av);
    const long double work = static_cast<long double>(r.size()) * av.size() * av.size();
    if (work > 4e9L) throw Error(ErrorCode::TooLarge, "three-route E_3 is limited to small sets");
    CountMap<Ops> member_map;
    for (const auto& x : av) member_map[x] = 1;
    const DiffTable<Ops> member(ops, std::move(member_map));

    E3Routes out;
    BigAccumulator moment;
    for (const auto& [_, c] : r.entries()) moment.add(u128(c) * c * c);
    out.moment = moment.value();

    // A_d = A ∩ (A + d) for each d ∈ D.
    std::vector<std::vector<V>> slices;
    slices.reserve(r.size());
    for (const auto& [d, _] : r.entries()) {
      auto& s = slices.emplace_back();
      for (const auto& x : av) {
        if (member.contains(ops.sub(x, d))) s.push_back(x);
      }
    }

    BigAccumulator inter;
    for (const auto& s : slices) {
      for (const auto& [e, _] : r.entries()) {
        std::uint64_t c = 0;
        for (const auto& x : s) c += member.contains(ops.sub(x, e)) ? 1 : 0;
        inter.add(u128(c) * c);
      }
    }
    out.intersections = inter.value();

    BigAccumulator en;
    for (const auto& s : slices) {
      en.add(sum_of_squares(detail::difference_counts(ops, std::span<const V>(av), std::span<const V>(s))));
    }
    out.energies = en.value();
    return out;
  });
}

PopularSet popular_differences(const GSet& a) {
  return detail::with_lattice(a, [&](const auto& ops, const Scale& scale, const auto& enc) {
    const auto r = detail::self_differences(ops, enc[0]);
    const BigInt n = static_cast<unsigned long>(a.size());
    const BigInt dsize = static_cast<unsigned long>(r.size());
    PopularSet out;
    out.delta = Rational::normalize(n * n, 2 * dsize);
    std::vector<GroundElement> members;
    BigInt mass = 0;
    for (const auto& [d, c] : r.entries()) {
      // r >= |A|²/(2|D|)  <=>  2|D| r >= |A|²
      if (2 * dsize * static_cast<unsigned long>(c) >= n * n) {
        members.push_back(detail::decode(d, scale));
        mass += static_cast<unsigned long>(c);
      }
    }
    out.members = GSet::from(std::move(members), a.kind());
    out.mass = mass;
    return out;
  });
}

DyadicLevel dyadic_energy_level(const GSet& a) {
  if (a.size() < 2) throw Error(ErrorCode::DegenerateInput, "dyadic level needs |A| >= 2");
  return detail::with_lattice(a, [&](const auto& ops, const Scale& scale, const auto& enc) {
    const auto r = detail::self_differences(ops, enc[0]);
    std::map<unsigned, BigInt> mass_by_class;
    for (const auto& [_, c] : r.entries()) {
      const unsigned i = 63U - static_cast<unsigned>(__builtin_clzll(c));
      mass_by_class[i] += BigInt(static_cast<unsigned long>(c)) * static_cast<unsigned long>(c);
    }
    unsigned best = mass_by_class.begin()->first;
    for (const auto& [i, m] : mass_by_class) {
      if (m > mass_by_class[best]) best = i;
    }
    DyadicLevel out;
    out.delta = 1ULL << best;
    out.mass_sq = mass_by_class[best];
    out.classes = static_cast<unsigned>(mass_by_class.size());
    std::vector<GroundElement> members;
    for (const auto& [d, c] : r.entries()) {
      if (c >= out.delta && c < 2 * out.delta) members.push_back(detail::decode(d, scale));
    }
    out.members = GSet::from(std::move(members), a.kind());
    return out;
  });
}

TailSplit tail_decompose(const GSet& a, std::uint64_t delta) {
  if (delta < 1) throw Error(ErrorCode::BadSpec, "tail split needs delta >= 1");
  TailSplit out;
  BigAccumulator low, high;
  for_each_r(a, [&](std::uint64_t c) {
    if (c > delta) {
      high.add(u128(c) * c);
      ++out.tail_support;
    } else {
      low.add(u128(c) * c);
    }
  });
  out.e_low = low.value();
  out.e_high = high.value();
  return out;
}

std::string EnergyProfile::to_json() const {
  nlohmann::ordered_json j;
  j["size"] = size;
  j["E"] = to_decimal(E);
  j["E3"] = to_decimal(E3);
  j["E32"] = E32;
  for (const auto& [k, v] : Tk) j["T" + std::to_string(k)] = to_decimal(v);
  if (sigma) j["sigma"] = to_decimal(*sigma);
  return j.dump();
}

EnergyProfile energy_profile(const GSet& a, std::span<const int> ks, bool with_sigma) {
  EnergyProfile p;
  p.size = a.size();
  p.E = energy(a);
  p.E3 = moment_energy(a, 3);
  p.E32 = moment_energy_real(a, 1.5);
  for (int k : ks) p.Tk[k] = k == 2 ? p.E : t_k(a, k);
  if (with_sigma) p.sigma = sigma_sum(a);
  return p;
}

}  // namespace sumlab
