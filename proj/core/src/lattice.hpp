#pragma once

// Integer encodings used by the counting kernels.
//
// Every additive statistic (energies, T_k, Σ, collinear triples, ...) is
// invariant under a common dilation, so a rational set is multiplied by the
// lcm L of its denominators and the kernels run on integers.  Values that fit
// comfortably in 126 bits use __int128; anything larger falls back to GMP.
// Residue sets run on uint64 with modular add/sub.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "sumlab/ground.hpp"
#include "sumlab/setops.hpp"

namespace sumlab::detail {

using i128 = __int128;

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31U);
}

struct I128Ops {
  using value_type = i128;
  static i128 add(i128 a, i128 b) { return a + b; }
  static i128 sub(i128 a, i128 b) { return a - b; }
  static i128 neg(i128 a) { return -a; }
  static bool is_zero(i128 a) { return a == 0; }
  struct Hash {
    std::size_t operator()(i128 v) const noexcept {
      const auto u = static_cast<unsigned __int128>(v);
      return mix64(static_cast<std::uint64_t>(u) ^ mix64(static_cast<std::uint64_t>(u >> 64U)));
    }
  };
};

struct BigOps {
  using value_type = mpz_class;
  static mpz_class add(const mpz_class& a, const mpz_class& b) { return a + b; }
  static mpz_class sub(const mpz_class& a, const mpz_class& b) { return a - b; }
  static mpz_class neg(const mpz_class& a) { return -a; }
  static bool is_zero(const mpz_class& a) { return sgn(a) == 0; }
  struct Hash {
    std::size_t operator()(const mpz_class& v) const noexcept { return hash_mpz(v); }
  };
};

struct ResidueOps {
  using value_type = std::uint64_t;
  std::uint64_t m = 0;
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t s = a + b;
    return s >= m ? s - m : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + (m - b); }
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : m - a; }
  static bool is_zero(std::uint64_t a) { return a == 0; }
  struct Hash {
    std::size_t operator()(std::uint64_t v) const noexcept { return mix64(v); }
  };
};

template <class Ops>
using CountMap = absl::flat_hash_map<typename Ops::value_type, std::uint64_t, typename Ops::Hash>;

/// How encoded integers map back to ground elements.
struct Scale {
  Kind kind;
  BigInt denominator = 1;  // rational kind: element = z / denominator
};

inline mpz_class to_mpz(i128 v) {
  const bool negative = v < 0;
  auto u = negative ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  mpz_class hi(static_cast<unsigned long>(u >> 64U));
  mpz_class lo(static_cast<unsigned long>(u & 0xFFFFFFFFFFFFFFFFULL));
  mpz_class out = (hi << 64) + lo;
  return negative ? mpz_class(-out) : out;
}

inline i128 to_i128(const mpz_class& z) {
  mpz_class a = abs(z);
  mpz_class lo_part = a & mpz_class("18446744073709551615");
  mpz_class hi_part = a >> 64;
  const auto u = (static_cast<unsigned __int128>(hi_part.get_ui()) << 64U) | lo_part.get_ui();
  const auto v = static_cast<i128>(u);
  return sgn(z) < 0 ? -v : v;
}

inline GroundElement decode(i128 v, const Scale& s) {
  return GroundElement(Rational::normalize(to_mpz(v), s.denominator));
}
inline GroundElement decode(const mpz_class& v, const Scale& s) {
  return GroundElement(Rational::normalize(v, s.denominator));
}
inline GroundElement decode(std::uint64_t v, const Scale& s) { return GroundElement(ModP(v, s.kind.p)); }

inline i128 encode_value(const GroundElement& e, const Scale& s, I128Ops /*tag*/) {
  const auto& r = e.rational();
  return to_i128(mpz_class(r.num() * (s.denominator / r.den())));
}
inline mpz_class encode_value(const GroundElement& e, const Scale& s, BigOps /*tag*/) {
  const auto& r = e.rational();
  return mpz_class(r.num() * (s.denominator / r.den()));
}
inline std::uint64_t encode_value(const GroundElement& e, const Scale& /*s*/, ResidueOps /*tag*/) {
  return e.modp().value();
}

/// Bits of headroom reserved above the largest encoded magnitude.
inline constexpr unsigned kDefaultHeadroom = 10;

/// Invokes f(ops, scale, encoded) where encoded[i] is the encoding of sets[i].
/// All sets must share one kind.
template <class F>
decltype(auto) with_lattice(std::span<const GSet* const> sets, F&& f, unsigned headroom = kDefaultHeadroom) {
  Kind kind = sets.empty() ? Kind::rational() : sets.front()->kind();
  for (const GSet* s : sets) {
    if (!(s->kind() == kind)) throw Error(ErrorCode::MixedKinds, "sets of different kinds");
  }
  Scale scale{kind, 1};
  if (kind.is_modp()) {
    ResidueOps ops{kind.p};
    std::vector<std::vector<std::uint64_t>> enc;
    for (const GSet* s : sets) {
      auto& v = enc.emplace_back();
      v.reserve(s->size());
      for (const auto& e : *s) v.push_back(encode_value(e, scale, ops));
    }
    return f(ops, scale, enc);
  }
  mpz_class lcm_den = 1;
  for (const GSet* s : sets) {
    for (const auto& e : *s) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), e.rational().den().get_mpz_t());
  }
  scale.denominator = lcm_den;
  std::size_t max_bits = 0;
  for (const GSet* s : sets) {
    for (const auto& e : *s) {
      const auto& r = e.rational();
      mpz_class z = r.num() * (lcm_den / r.den());
      max_bits = std::max(max_bits, mpz_sizeinbase(z.get_mpz_t(), 2));
    }
  }
  if (max_bits + headroom < 126) {
    I128Ops ops;
    std::vector<std::vector<i128>> enc;
    for (const GSet* s : sets) {
      auto& v = enc.emplace_back();
      v.reserve(s->size());
      for (const auto& e : *s) v.push_back(encode_value(e, scale, ops));
    }
    return f(ops, scale, enc);
  }
  BigOps ops;
  std::vector<std::vector<mpz_class>> enc;
  for (const GSet* s : sets) {
    auto& v = enc.emplace_back();
    v.reserve(s->size());
    for (const auto& e : *s) v.push_back(encode_value(e, scale, ops));
  }
  return f(ops, scale, enc);
}

template <class F>
decltype(auto) with_lattice(const GSet& a, F&& f, unsigned headroom = kDefaultHeadroom) {
  const GSet* sets[] = {&a};
  return with_lattice(std::span<const GSet* const>(sets), std::forward<F>(f), headroom);
}

template <class F>
decltype(auto) with_lattice(const GSet& a, const GSet& b, F&& f, unsigned headroom = kDefaultHeadroom) {
  const GSet* sets[] = {&a, &b};
  return with_lattice(std::span<const GSet* const>(sets), std::forward<F>(f), headroom);
}

/// r_{A-B}(x) over ordered pairs.
template <class Ops>
CountMap<Ops> difference_counts(const Ops& ops, std::span<const typename Ops::value_type> a,
                                std::span<const typename Ops::value_type> b) {
  CountMap<Ops> r;
  r.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) ++r[ops.sub(x, y)];
  }
  return r;
}

template <class Ops>
std::uint64_t lookup(const CountMap<Ops>& m, const typename Ops::value_type& key) {
  auto it = m.find(key);
  return it == m.end() ? 0 : it->second;
}

/// Unsigned 128-bit accumulator converted to a big integer.
inline BigInt to_big(unsigned __int128 v) { return to_mpz(static_cast<i128>(v >> 1U)) * 2 + static_cast<unsigned long>(v & 1U); }

/// Exact accumulator: 128-bit fast path spilling into GMP on overflow risk.
class BigAccumulator {
 public:
  void add(unsigned __int128 v) {
    if (fast_ > (static_cast<unsigned __int128>(1) << 126U)) flush();
    if (v > (static_cast<unsigned __int128>(1) << 125U)) {
      slow_ += to_big(v);
      return;
    }
    fast_ += v;
  }
  void add(const BigInt& v) { slow_ += v; }
  BigInt value() const { return slow_ + to_big(fast_); }

 private:
  void flush() {
    slow_ += to_big(fast_);
    fast_ = 0;
  }
  unsigned __int128 fast_ = 0;
  BigInt slow_ = 0;
};

}  // namespace sumlab::detail
