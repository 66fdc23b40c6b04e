#pragma once

// Brute-force reference counts, written straight from the definitions and
// sharing no code with the library.  Integer sets use long long arithmetic;
// residue sets carry their modulus.

#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "sumlab/ground.hpp"
#include "sumlab/setops.hpp"

namespace oracle {

using i64 = long long;

struct IntRing {
  i64 add(i64 a, i64 b) const { return a + b; }
  i64 sub(i64 a, i64 b) const { return a - b; }
  i64 mul(i64 a, i64 b) const { return a * b; }
  bool zero(i64 a) const { return a == 0; }
};

struct ModRing {
  i64 p;
  i64 add(i64 a, i64 b) const { return (a + b) % p; }
  i64 sub(i64 a, i64 b) const { return ((a - b) % p + p) % p; }
  i64 mul(i64 a, i64 b) const { return static_cast<i64>(static_cast<__int128>(a) * b % p); }
  bool zero(i64 a) const { return a % p == 0; }
};

/// Integer multiples of a rational set by the lcm of its denominators.
inline std::vector<i64> scaled(const sumlab::GSet& a) {
  std::vector<i64> out;
  if (a.kind().is_modp()) {
    for (const auto& e : a) out.push_back(static_cast<i64>(e.modp().value()));
    return out;
  }
  mpz_class l = 1;
  for (const auto& e : a) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.rational().den().get_mpz_t());
  for (const auto& e : a) {
    mpz_class z = e.rational().num() * (l / e.rational().den());
    out.push_back(z.get_si());
  }
  return out;
}

template <class R>
std::map<i64, i64> diff_counts(const R& ring, const std::vector<i64>& a) {
  std::map<i64, i64> r;
  for (i64 x : a) {
    for (i64 y : a) ++r[ring.sub(x, y)];
  }
  return r;
}

/// #{(a,b,c,d) : a + b = c + d}.
template <class R>
i64 energy(const R& ring, const std::vector<i64>& a) {
  i64 n = 0;
  for (i64 x : a)
    for (i64 y : a)
      for (i64 z : a)
        for (i64 w : a) n += ring.sub(ring.add(x, y), ring.add(z, w)) == 0 ? 1 : 0;
  return n;
}

/// #{(a1,a2,a3,b1,b2,b3) : a1 - b1 = a2 - b2 = a3 - b3}.
template <class R>
i64 e3_tuples(const R& ring, const std::vector<i64>& a) {
  i64 n = 0;
  for (i64 a1 : a)
    for (i64 b1 : a) {
      const i64 d = ring.sub(a1, b1);
      for (i64 a2 : a)
        for (i64 b2 : a) {
          if (ring.sub(a2, b2) != d) continue;
          for (i64 a3 : a)
            for (i64 b3 : a) n += ring.sub(a3, b3) == d ? 1 : 0;
        }
    }
  return n;
}

/// Σ_x r(x)³ from the difference counts.
template <class R>
i64 e3_moment(const R& ring, const std::vector<i64>& a) {
  i64 s = 0;
  for (const auto& [_, r] : diff_counts(ring, a)) s += r * r * r;
  return s;
}

/// #{(a1,a2,a3,b1,b2,b3) : a1 + a2 + a3 = b1 + b2 + b3}.
template <class R>
i64 t3(const R& ring, const std::vector<i64>& a) {
  std::map<i64, i64> sums;
  for (i64 x : a)
    for (i64 y : a)
      for (i64 z : a) ++sums[ring.add(ring.add(x, y), z)];
  i64 n = 0;
  for (i64 x : a)
    for (i64 y : a)
      for (i64 z : a) n += sums[ring.add(ring.add(x, y), z)];
  return n;
}

/// Σ_{d,d'} r(d) r(d') r(d-d')².
template <class R>
i64 sigma(const R& ring, const std::vector<i64>& a) {
  const auto r = diff_counts(ring, a);
  i64 s = 0;
  for (const auto& [d, rd] : r)
    for (const auto& [e, re] : r) {
      auto it = r.find(ring.sub(d, e));
      if (it != r.end()) s += rd * re * it->second * it->second;
    }
  return s;
}

/// #{(d,d') ∈ D × D : d - d' ∈ D}, D = A - A.
template <class R>
i64 difference_triples(const R& ring, const std::vector<i64>& a) {
  const auto r = diff_counts(ring, a);
  i64 n = 0;
  for (const auto& [d, _] : r)
    for (const auto& [e, __] : r) n += r.count(ring.sub(d, e));
  return n;
}

/// Ordered triples of pairwise-distinct collinear points of X × Y.
template <class R>
i64 collinear_distinct(const R& ring, const std::vector<i64>& x, const std::vector<i64>& y) {
  std::vector<std::pair<i64, i64>> pts;
  for (i64 u : x)
    for (i64 v : y) pts.emplace_back(u, v);
  i64 n = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j == i) continue;
      for (std::size_t k = 0; k < pts.size(); ++k) {
        if (k == i || k == j) continue;
        const i64 dx1 = ring.sub(pts[j].first, pts[i].first), dy1 = ring.sub(pts[j].second, pts[i].second);
        const i64 dx2 = ring.sub(pts[k].first, pts[i].first), dy2 = ring.sub(pts[k].second, pts[i].second);
        n += ring.sub(ring.mul(dx1, dy2), ring.mul(dx2, dy1)) == 0 ? 1 : 0;
      }
    }
  return n;
}

// ---------------------------------------------------------------- F_p

inline i64 powmod(i64 b, i64 e, i64 m) {
  __int128 r = 1, x = b % m;
  for (; e > 0; e >>= 1) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
  }
  return static_cast<i64>(r);
}

/// {x ∈ [1, m) : gcd(x, m) = 1, x^t ≡ 1 (mod m)}.
inline std::vector<i64> roots_of_unity(i64 m, i64 t) {
  std::vector<i64> out;
  for (i64 x = 1; x < m; ++x) {
    if (std::gcd(x, m) == 1 && powmod(x, t, m) == 1) out.push_back(x);
  }
  return out;
}

/// #{(u, x, y) : u ∈ Γ, 0 < |x|, |y| <= h, ux ≡ y (mod p)}.
inline i64 window_congruences(i64 p, const std::vector<i64>& gamma, i64 h) {
  i64 n = 0;
  for (i64 u : gamma)
    for (i64 x = -h; x <= h; ++x) {
      if (x == 0) continue;
      const i64 y = ((u * x) % p + p) % p;
      n += (y >= 1 && y <= h) || (y >= p - h && y <= p - 1) ? 1 : 0;
    }
  return n;
}

/// Longest run of consecutive residues avoiding some coset aΓ; circular
/// runs wrap through 0, linear ones stay inside 0..p-1.
inline i64 gap_h(i64 p, const std::vector<i64>& gamma, bool circular) {
  std::set<std::set<i64>> cosets;
  for (i64 a = 1; a < p; ++a) {
    std::set<i64> c;
    for (i64 g : gamma) c.insert(a * g % p);
    cosets.insert(c);
  }
  i64 best = 0;
  for (const auto& c : cosets) {
    for (i64 s = 0; s < p; ++s) {
      i64 k = 0;
      if (circular) {
        while (k < p && !c.count((s + k) % p)) ++k;
      } else {
        while (s + k < p && !c.count(s + k)) ++k;
      }
      best = std::max(best, k);
    }
  }
  return best;
}

}  // namespace oracle
