#include "sumlab/incidence.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>

#include <absl/container/flat_hash_map.h>

#include "lattice.hpp"
#include "sumlab/numtheory.hpp"

namespace sumlab {

std::strong_ordering operator<=>(const LineKey& x, const LineKey& y) {
  if (int c = cmp(x.a, y.a); c != 0) return c <=> 0;
  if (int c = cmp(x.b, y.b); c != 0) return c <=> 0;
  return cmp(x.c, y.c) <=> 0;
}

LineProfile::LineProfile(Kind kind, std::size_t points, std::vector<std::pair<LineKey, std::uint64_t>> lines)
    : kind_(kind), points_(points), lines_(std::move(lines)) {}

std::uint64_t LineProfile::lines_with(std::uint64_t k) const {
  return static_cast<std::uint64_t>(
      std::count_if(lines_.begin(), lines_.end(), [k](const auto& l) { return l.second == k; }));
}

BigInt LineProfile::pair_sum() const {
  BigInt s = 0;
  for (const auto& [_, k] : lines_) s += BigInt(static_cast<unsigned long>(k)) * static_cast<unsigned long>(k - 1);
  return s;
}

BigInt LineProfile::triple_sum() const {
  BigInt s = 0;
  for (const auto& [_, k] : lines_) {
    s += BigInt(static_cast<unsigned long>(k)) * static_cast<unsigned long>(k - 1) * static_cast<unsigned long>(k - 2);
  }
  return s;
}

std::string LineProfile::to_csv() const {
  std::ostringstream out;
  out << "a,b,c,k\n";
  for (const auto& [key, k] : lines_) out << key.a << ',' << key.b << ',' << key.c << ',' << k << '\n';
  return out.str();
}

namespace {

/// Points sharing a line with the anchor, in one direction class.
struct Group {
  std::uint64_t count = 0;
  std::size_t j = 0, l = 0;  // a representative point (x_j, y_l)
};

/// Direction grouping on a grid X × Y, one implementation per arithmetic.
class Grid {
 public:
  Grid(std::size_t nx, std::size_t ny) : nx_(nx), ny_(ny) {}
  virtual ~Grid() = default;
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }

  /// Groups of grid points collinear with anchor (x_i, y_k), excluding the
  /// anchor; with only_later, just points after it in row-major order.
  virtual void groups(std::size_t i, std::size_t k, bool only_later, std::vector<Group>& out) = 0;
  virtual LineKey line_through(std::size_t i, std::size_t k, std::size_t j, std::size_t l) const = 0;

 protected:
  bool skip(std::size_t i, std::size_t k, std::size_t j, std::size_t l, bool only_later) const {
    const std::size_t a = i * ny_ + k, b = j * ny_ + l;
    return only_later ? b <= a : b == a;
  }

 private:
  std::size_t nx_, ny_;
};

// ------------------------------------------------------------ mod p

class ModGrid final : public Grid {
 public:
  ModGrid(std::vector<std::uint64_t> xs, std::vector<std::uint64_t> ys, std::uint64_t p)
      : Grid(xs.size(), ys.size()), xs_(std::move(xs)), ys_(std::move(ys)), p_(p) {
    inv_dx_.resize(nx() * nx());
    for (std::size_t i = 0; i < nx(); ++i) {
      for (std::size_t j = 0; j < nx(); ++j) {
        const std::uint64_t dx = (xs_[j] + p_ - xs_[i]) % p_;
        inv_dx_[i * nx() + j] = dx == 0 ? 0 : *nt::invmod(dx, p_);
      }
    }
    if (p_ <= (1ULL << 24U)) dense_.assign(p_ + 1, 0);
  }

  void groups(std::size_t i, std::size_t k, bool only_later, std::vector<Group>& out) override {
    out.clear();
    touched_.clear();
    for (std::size_t j = 0; j < nx(); ++j) {
      const std::uint64_t inv = inv_dx_[i * nx() + j];
      for (std::size_t l = 0; l < ny(); ++l) {
        if (skip(i, k, j, l, only_later)) continue;
        const std::uint64_t key = inv == 0 ? p_ : nt::mulmod((ys_[l] + p_ - ys_[k]) % p_, inv, p_);
        bump(key, j, l);
      }
    }
    for (const auto& [key, g] : touched_) {
      out.push_back({dense_.empty() ? sparse_[key] : dense_[key], g.j, g.l});
      if (dense_.empty()) {
        sparse_.erase(key);
      } else {
        dense_[key] = 0;
      }
    }
  }

  LineKey line_through(std::size_t i, std::size_t k, std::size_t j, std::size_t l) const override {
    const std::uint64_t a = (ys_[l] + p_ - ys_[k]) % p_;
    const std::uint64_t b = (xs_[i] + p_ - xs_[j]) % p_;
    std::uint64_t c = (nt::mulmod(a, xs_[i], p_) + nt::mulmod(b, ys_[k], p_)) % p_;
    const std::uint64_t lead = a != 0 ? a : b;
    const std::uint64_t inv = *nt::invmod(lead, p_);
    auto norm = [&](std::uint64_t v) { return BigInt(static_cast<unsigned long>(nt::mulmod(v, inv, p_))); };
    return {norm(a), norm(b), norm(c)};
  }

 private:
  void bump(std::uint64_t key, std::size_t j, std::size_t l) {
    std::uint32_t& c = dense_.empty() ? sparse_[key] : dense_[key];
    if (c++ == 0) touched_.push_back({key, Group{0, j, l}});
  }

  std::vector<std::uint64_t> xs_, ys_;
  std::uint64_t p_;
  std::vector<std::uint64_t> inv_dx_;
  std::vector<std::uint32_t> dense_;
  absl::flat_hash_map<std::uint64_t, std::uint32_t> sparse_;
  std::vector<std::pair<std::uint64_t, Group>> touched_;
};

// ------------------------------------------------------------ integers

LineKey normalized_line(BigInt a, BigInt b, BigInt c) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  a /= g;
  b /= g;
  c /= g;
  if (sgn(a) < 0 || (sgn(a) == 0 && sgn(b) < 0)) {
    a = -a;
    b = -b;
    c = -c;
  }
  return {a, b, c};
}

/// Line ax + by = c through two lattice points, in the original (unscaled)
/// coordinates x = X / L.
LineKey integer_line(const BigInt& x1, const BigInt& y1, const BigInt& x2, const BigInt& y2, const BigInt& scale) {
  const BigInt a = y2 - y1;
  const BigInt b = x1 - x2;
  const BigInt c = a * x1 + b * y1;
  return normalized_line(a * scale, b * scale, c);
}

/// Values below 2^60: slopes hashed as dy·dx^{-1} mod 2^61-1, with every hash
/// hit confirmed by an exact cross-multiplication.
class SmallIntGrid final : public Grid {
 public:
  static constexpr std::uint64_t kMod = (1ULL << 61U) - 1;
  static constexpr std::uint64_t kVertical = kMod;

  SmallIntGrid(std::vector<std::int64_t> xs, std::vector<std::int64_t> ys, BigInt scale)
      : Grid(xs.size(), ys.size()), xs_(std::move(xs)), ys_(std::move(ys)), scale_(std::move(scale)) {
    inv_dx_.resize(nx() * nx());
    for (std::size_t i = 0; i < nx(); ++i) {
      for (std::size_t j = 0; j < nx(); ++j) {
        const std::int64_t dx = xs_[j] - xs_[i];
        inv_dx_[i * nx() + j] = dx == 0 ? 0 : nt::powmod(residue(dx), kMod - 2, kMod);
      }
    }
    dy_res_.resize(ny() * ny());
    for (std::size_t k = 0; k < ny(); ++k) {
      for (std::size_t l = 0; l < ny(); ++l) dy_res_[k * ny() + l] = residue(ys_[l] - ys_[k]);
    }
  }

  void groups(std::size_t i, std::size_t k, bool only_later, std::vector<Group>& out) override {
    out.clear();
    map_.clear();
    for (std::size_t j = 0; j < nx(); ++j) {
      const std::uint64_t inv = inv_dx_[i * nx() + j];
      for (std::size_t l = 0; l < ny(); ++l) {
        if (skip(i, k, j, l, only_later)) continue;
        const std::uint64_t key = inv == 0 ? kVertical : nt::mulmod(dy_res_[k * ny() + l], inv, kMod);
        auto [it, fresh] = map_.try_emplace(key, Group{0, j, l});
        if (!fresh && !same_direction(i, k, j, l, it->second.j, it->second.l)) {
          exact_groups(i, k, only_later, out);
          return;
        }
        ++it->second.count;
      }
    }
    for (const auto& [_, g] : map_) out.push_back(g);
  }

  LineKey line_through(std::size_t i, std::size_t k, std::size_t j, std::size_t l) const override {
    return integer_line(BigInt(static_cast<long>(xs_[i])), BigInt(static_cast<long>(ys_[k])),
                        BigInt(static_cast<long>(xs_[j])), BigInt(static_cast<long>(ys_[l])), scale_);
  }

 private:
  static std::uint64_t residue(std::int64_t v) {
    const std::int64_t r = v % static_cast<std::int64_t>(kMod);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(kMod) : r);
  }

  bool same_direction(std::size_t i, std::size_t k, std::size_t j, std::size_t l, std::size_t rj,
                      std::size_t rl) const {
    const __int128 dx1 = xs_[j] - xs_[i], dy1 = ys_[l] - ys_[k];
    const __int128 dx2 = xs_[rj] - xs_[i], dy2 = ys_[rl] - ys_[k];
    return dx1 * dy2 == dx2 * dy1;
  }

  /// Collision fallback: directions reduced by gcd.
  void exact_groups(std::size_t i, std::size_t k, bool only_later, std::vector<Group>& out) const {
    std::map<std::pair<std::int64_t, std::int64_t>, Group> m;
    for (std::size_t j = 0; j < nx(); ++j) {
      for (std::size_t l = 0; l < ny(); ++l) {
        if (skip(i, k, j, l, only_later)) continue;
        std::int64_t dx = xs_[j] - xs_[i], dy = ys_[l] - ys_[k];
        const std::int64_t g = std::gcd(dx, dy);
        dx /= g;
        dy /= g;
        if (dx < 0 || (dx == 0 && dy < 0)) {
          dx = -dx;
          dy = -dy;
        }
        auto [it, _] = m.try_emplace({dx, dy}, Group{0, j, l});
        ++it->second.count;
      }
    }
    out.clear();
    for (const auto& [_, g] : m) out.push_back(g);
  }

  std::vector<std::int64_t> xs_, ys_;
  BigInt scale_;
  std::vector<std::uint64_t> inv_dx_;
  std::vector<std::uint64_t> dy_res_;
  absl::flat_hash_map<std::uint64_t, Group> map_;
};

/// Arbitrary-size integers: directions reduced by gcd in GMP.
class BigIntGrid final : public Grid {
 public:
  BigIntGrid(std::vector<BigInt> xs, std::vector<BigInt> ys, BigInt scale)
      : Grid(xs.size(), ys.size()), xs_(std::move(xs)), ys_(std::move(ys)), scale_(std::move(scale)) {}

  void groups(std::size_t i, std::size_t k, bool only_later, std::vector<Group>& out) override {
    std::map<std::pair<BigInt, BigInt>, Group, Less> m;
    BigInt g;
    for (std::size_t j = 0; j < nx(); ++j) {
      for (std::size_t l = 0; l < ny(); ++l) {
        if (skip(i, k, j, l, only_later)) continue;
        BigInt dx = xs_[j] - xs_[i], dy = ys_[l] - ys_[k];
        mpz_gcd(g.get_mpz_t(), dx.get_mpz_t(), dy.get_mpz_t());
        dx /= g;
        dy /= g;
        if (sgn(dx) < 0 || (sgn(dx) == 0 && sgn(dy) < 0)) {
          dx = -dx;
          dy = -dy;
        }
        auto [it, _] = m.try_emplace({dx, dy}, Group{0, j, l});
        ++it->second.count;
      }
    }
    out.clear();
    for (const auto& [_, grp] : m) out.push_back(grp);
  }

  LineKey line_through(std::size_t i, std::size_t k, std::size_t j, std::size_t l) const override {
    return integer_line(xs_[i], ys_[k], xs_[j], ys_[l], scale_);
  }

 private:
  struct Less {
    bool operator()(const std::pair<BigInt, BigInt>& a, const std::pair<BigInt, BigInt>& b) const {
      if (int c = cmp(a.first, b.first); c != 0) return c < 0;
      return cmp(a.second, b.second) < 0;
    }
  };
  std::vector<BigInt> xs_, ys_;
  BigInt scale_;
};

std::unique_ptr<Grid> make_grid(const GSet& x, const GSet& y) {
  if (!(x.kind() == y.kind())) throw Error(ErrorCode::MixedKinds, "grid axes of different kinds");
  return detail::with_lattice(x, y, [&](const auto& ops, const detail::Scale& scale, const auto& enc)
                                        -> std::unique_ptr<Grid> {
    using Ops = std::decay_t<decltype(ops)>;
    if constexpr (std::is_same_v<Ops, detail::ResidueOps>) {
      return std::make_unique<ModGrid>(enc[0], enc[1], ops.m);
    } else {
      std::vector<BigInt> xs, ys;
      std::size_t bits = 0;
      auto big = [](const auto& v) {
        if constexpr (std::is_same_v<Ops, detail::I128Ops>) {
          return detail::to_mpz(v);
        } else {
          return BigInt(v);
        }
      };
      for (const auto& v : enc[0]) xs.push_back(big(v));
      for (const auto& v : enc[1]) ys.push_back(big(v));
      for (const auto* vs : {&xs, &ys}) {
        for (const auto& v : *vs) bits = std::max(bits, mpz_sizeinbase(v.get_mpz_t(), 2));
      }
      if (bits <= 60) {
        std::vector<std::int64_t> sx, sy;
        for (const auto& v : xs) sx.push_back(v.get_si());
        for (const auto& v : ys) sy.push_back(v.get_si());
        return std::make_unique<SmallIntGrid>(std::move(sx), std::move(sy), scale.denominator);
      }
      return std::make_unique<BigIntGrid>(std::move(xs), std::move(ys), scale.denominator);
    }
  });
}

void guard_grid(std::size_t nx, std::size_t ny) {
  if (nx * ny > kGridPointLimit) {
    throw Error(ErrorCode::TooLarge, "grid of " + std::to_string(nx * ny) + " points exceeds the limit " +
                                         std::to_string(kGridPointLimit));
  }
}

BigInt with_repeats(const BigInt& distinct, std::size_t n_points, TripleConvention convention) {
  if (convention == TripleConvention::distinct) return distinct;
  const BigInt n = static_cast<unsigned long>(n_points);
  // Every triple with a repeated point is collinear.
  return distinct + n * n * n - n * (n - 1) * (n - 2);
}

}  // namespace

LineProfile line_profile(const GSet& x, const GSet& y) {
  guard_grid(x.size(), y.size());
  auto grid = make_grid(x, y);
  std::map<LineKey, std::uint64_t> lines;
  std::vector<Group> gs;
  for (std::size_t i = 0; i < grid->nx(); ++i) {
    for (std::size_t k = 0; k < grid->ny(); ++k) {
      grid->groups(i, k, /*only_later=*/true, gs);
      // A line is first met at its earliest point, where all others are later.
      for (const auto& g : gs) lines.try_emplace(grid->line_through(i, k, g.j, g.l), g.count + 1);
    }
  }
  return LineProfile(x.kind(), x.size() * y.size(), {lines.begin(), lines.end()});
}

namespace {

struct RatioKey {
  std::int64_t num, den;
  friend bool operator==(const RatioKey&, const RatioKey&) = default;
  template <class H>
  friend H AbslHashValue(H h, const RatioKey& k) {
    return H::combine(std::move(h), k.num, k.den);
  }
};

/// Σ_ρ c(ρ)², c(ρ) = #{(x1,x2,x3) : x2 != x1, (x3-x1)/(x2-x1) = ρ}, or
/// nullopt when the encoding is too wide for the 64-bit path.
std::optional<unsigned __int128> ratio_class_square_sum(const GSet& x) {
  return detail::with_lattice(x, [&](const auto& ops, const detail::Scale&, const auto& enc)
                                     -> std::optional<unsigned __int128> {
    using Ops = std::decay_t<decltype(ops)>;
    const auto& v = enc[0];
    const std::size_t n = v.size();
    unsigned __int128 sum = 0;
    if constexpr (std::is_same_v<Ops, detail::ResidueOps>) {
      const std::uint64_t p = ops.m;
      std::vector<std::uint64_t> dense;
      absl::flat_hash_map<std::uint64_t, std::uint64_t> sparse;
      if (p <= (1ULL << 24U)) dense.assign(p, 0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j) continue;
          const std::uint64_t inv = *nt::invmod(ops.sub(v[j], v[i]), p);
          for (std::size_t k = 0; k < n; ++k) {
            const std::uint64_t rho = nt::mulmod(ops.sub(v[k], v[i]), inv, p);
            if (dense.empty()) {
              ++sparse[rho];
            } else {
              ++dense[rho];
            }
          }
        }
      }
      for (auto c : dense) sum += static_cast<unsigned __int128>(c) * c;
      for (const auto& [_, c] : sparse) sum += static_cast<unsigned __int128>(c) * c;
      return sum;
    } else if constexpr (std::is_same_v<Ops, detail::I128Ops>) {
      for (const auto& e : v) {
        if (e >= (static_cast<detail::i128>(1) << 60U) || e <= -(static_cast<detail::i128>(1) << 60U)) {
          return std::nullopt;
        }
      }
      absl::flat_hash_map<RatioKey, std::uint64_t> counts;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j) continue;
          const auto den = static_cast<std::int64_t>(v[j] - v[i]);
          for (std::size_t k = 0; k < n; ++k) {
            auto num = static_cast<std::int64_t>(v[k] - v[i]);
            auto d = den;
            const std::int64_t g = std::gcd(num, d);
            num /= g;
            d /= g;
            if (d < 0) {
              num = -num;
              d = -d;
            }
            ++counts[RatioKey{num, d}];
          }
        }
      }
      for (const auto& [_, c] : counts) sum += static_cast<unsigned __int128>(c) * c;
      return sum;
    } else {
      return std::nullopt;
    }
  });
}

}  // namespace

BigInt square_grid_triples(const GSet& x, TripleConvention convention) {
  const std::size_t n = x.size();
  if (n * n * n > kRatioWorkLimit) {
    throw Error(ErrorCode::TooLarge, "ratio classes of a set of size " + std::to_string(n) + " exceed the limit " +
                                         std::to_string(kRatioWorkLimit) + " triples");
  }
  const auto classes = ratio_class_square_sum(x);
  if (!classes) return collinear_triples(x, x, convention);
  // Triples with x2 = x1 or y2 = y1 are collinear exactly when a further
  // coordinate coincides: n^4 + n^3(n-1) and n^3(n-1) of them.
  const BigInt nn = static_cast<unsigned long>(n);
  const BigInt repeats = detail::to_big(*classes) + nn * nn * nn * nn + 2 * nn * nn * nn * (nn - 1);
  if (convention == TripleConvention::with_repeats) return repeats;
  const BigInt pts = nn * nn;
  return repeats - (pts * pts * pts - pts * (pts - 1) * (pts - 2));
}

BigInt collinear_triples(const GSet& x, const GSet& y, TripleConvention convention) {
  guard_grid(x.size(), y.size());
  auto grid = make_grid(x, y);
  detail::BigAccumulator acc;
  std::vector<Group> gs;
  for (std::size_t i = 0; i < grid->nx(); ++i) {
    for (std::size_t k = 0; k < grid->ny(); ++k) {
      grid->groups(i, k, /*only_later=*/false, gs);
      unsigned __int128 s = 0;
      for (const auto& g : gs) s += static_cast<unsigned __int128>(g.count) * (g.count - 1);
      acc.add(s);
    }
  }
  return with_repeats(acc.value(), x.size() * y.size(), convention);
}

BigInt subgroup_collinear_triples(const SubgroupCtx& ctx, TripleConvention convention) {
  const std::uint64_t t = ctx.order();
  guard_grid(t, t);
  ModGrid grid(ctx.gamma(), ctx.gamma(), ctx.p());
  std::vector<Group> gs;
  grid.groups(0, 0, /*only_later=*/false, gs);  // gamma()[0] == 1
  BigInt at_anchor = 0;
  for (const auto& g : gs) at_anchor += BigInt(static_cast<unsigned long>(g.count)) * static_cast<unsigned long>(g.count - 1);
  const BigInt tt = static_cast<unsigned long>(t);
  return with_repeats(at_anchor * tt * tt, t * t, convention);
}

std::vector<std::pair<GroundElement, std::uint64_t>> unit_slope_line_counts(const GSet& a) {
  // The points of A×A on y = x + d are the pairs with y - x = d.
  return combine(a, a, SetOp::sub).entries();
}

BigInt subgroup_line_counts(const SubgroupCtx& ctx, std::span<const std::pair<std::uint64_t, std::uint64_t>> pairs,
                            unsigned exponent) {
  const std::uint64_t p = ctx.p();
  BigInt total = 0;
  for (const auto& [u0, v0] : pairs) {
    const std::uint64_t u = u0 % p, v = v0 % p;
    if (u == 0 || v == 0) throw Error(ErrorCode::ZeroCoefficient, "line ux + vy = 1 needs u, v nonzero");
    const std::uint64_t vinv = *nt::invmod(v, p);
    std::uint64_t l = 0;
    for (auto x : ctx.gamma()) {
      const std::uint64_t y = nt::mulmod((1 + p - nt::mulmod(u, x, p)) % p, vinv, p);
      l += ctx.contains(y) ? 1 : 0;
    }
    BigInt term;
    mpz_ui_pow_ui(term.get_mpz_t(), l, exponent);
    total += term;
  }
  return total;
}

}  // namespace sumlab
