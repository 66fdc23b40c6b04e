#include <bit>
#include <cmath>
#include <map>

#include <absl/container/flat_hash_map.h>
#include <absl/container/flat_hash_set.h>

#include "sumlab/energy.hpp"
#include "sumlab/harness.hpp"

namespace sumlab {

const char* to_string(RectCase c) { return c == RectCase::case1 ? "case1" : "case2-iterated"; }

namespace {

using ElementSet = absl::flat_hash_set<GroundElement, GroundHash>;

/// Dyadic class of a positive count c: the i >= 1 with 2^{i-1} <= c < 2^i.
std::uint32_t dyadic_class(std::uint64_t c) { return static_cast<std::uint32_t>(std::bit_width(c)); }

std::uint64_t ceil_log2(std::size_t n) { return n <= 1 ? 0 : std::bit_width(n - 1); }

/// Ordinates b with a - b ∈ P, for each a of the set.
std::vector<std::vector<std::size_t>> popular_fibres(const GSet& a, const GSet& P) {
  absl::flat_hash_map<GroundElement, std::size_t, GroundHash> index;
  for (std::size_t i = 0; i < a.size(); ++i) index.emplace(a[i], i);
  std::vector<std::vector<std::size_t>> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (const auto& d : P) {
      auto it = index.find(a[i] - d);
      if (it != index.end()) out[i].push_back(it->second);
    }
    std::sort(out[i].begin(), out[i].end());
  }
  return out;
}

GSet subset(const GSet& a, const std::vector<std::size_t>& idx) {
  std::vector<GroundElement> v;
  v.reserve(idx.size());
  for (auto i : idx) v.push_back(a[i]);
  return GSet::from(std::move(v), a.kind());
}

struct RoundState {
  RectCover cover;
  std::vector<std::vector<std::size_t>> fibres;
  // Per rectangle: abscissa indices and ordinate indices into cover.current.
  std::vector<std::vector<std::size_t>> xs, ys;
};

RoundState build_round(const GSet& current) {
  RoundState st;
  RectCover& c = st.cover;
  c.current = current;
  const auto level = dyadic_energy_level(current);
  c.delta = level.delta;
  c.P = level.members;
  st.fibres = popular_fibres(current, c.P);

  std::map<std::uint32_t, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < current.size(); ++i) {
    c.mass += st.fibres[i].size();
    if (!st.fibres[i].empty()) by_class[dyadic_class(st.fibres[i].size())].push_back(i);
  }
  for (const auto& [ci, members] : by_class) {
    std::map<std::size_t, std::uint64_t> ord_count;
    for (auto i : members) {
      for (auto b : st.fibres[i]) ++ord_count[b];
    }
    std::map<std::uint32_t, std::pair<std::vector<std::size_t>, std::uint64_t>> by_ord;
    for (const auto& [b, m] : ord_count) {
      auto& slot = by_ord[dyadic_class(m)];
      slot.first.push_back(b);
      slot.second += m;
    }
    for (auto& [cj, slot] : by_ord) {
      Rectangle r;
      r.abscissa_class = ci;
      r.ordinate_class = cj;
      r.abscissae = subset(current, members);
      r.ordinates = subset(current, slot.first);
      r.points = slot.second;
      c.rectangles.push_back(std::move(r));
      st.xs.push_back(members);
      st.ys.push_back(slot.first);
    }
  }
  // At most (floor(log2|Ã|) + 1)² rectangles, so those holding a 1/(2K)
  // share of the mass together hold at least half of it.
  const std::uint64_t k = std::bit_width(current.size());
  for (auto& r : c.rectangles) {
    r.rich = 2 * k * k * r.points >= c.mass;
    if (r.rich) c.rich_mass += r.points;
  }
  return st;
}

/// Points of the rectangle per abscissa (or per ordinate when mirrored).
std::vector<std::pair<std::size_t, std::uint64_t>> base_counts(const RoundState& st, std::size_t r, bool mirrored) {
  const auto& xs = st.xs[r];
  const auto& ys = st.ys[r];
  std::vector<std::pair<std::size_t, std::uint64_t>> out;
  if (!mirrored) {
    for (auto i : xs) {
      std::uint64_t n = 0;
      for (auto b : st.fibres[i]) n += std::binary_search(ys.begin(), ys.end(), b) ? 1 : 0;
      out.emplace_back(i, n);
    }
  } else {
    std::map<std::size_t, std::uint64_t> m;
    for (auto i : xs) {
      for (auto b : st.fibres[i]) {
        if (std::binary_search(ys.begin(), ys.end(), b)) ++m[b];
      }
    }
    out.assign(m.begin(), m.end());
  }
  return out;
}

}  // namespace

RectCover rect_decompose(const GSet& a, const RectProfile& profile) {
  if (a.size() < 4) throw Error(ErrorCode::DegenerateInput, "rectangle decomposition needs |A| >= 4");
  a.require_theorem_input();
  const double L = std::max(1.0, static_cast<double>(ceil_log2(a.size())));
  const auto max_rounds = static_cast<std::uint32_t>(std::min(std::pow(L, 5.0), 1e6));

  GSet current = a;
  std::vector<BigInt> ledger;
  for (std::uint32_t round = 0;; ++round) {
    ledger.push_back(energy(current));
    RoundState st = build_round(current);
    RectCover& c = st.cover;
    c.profile = profile.name;
    c.rounds = round;

    const double n = static_cast<double>(current.size());
    const double width = profile.c1 * n / std::pow(std::max(1.0, std::log2(n)), profile.c2);
    std::optional<std::size_t> pick;
    bool mirrored = false;
    for (std::size_t r = 0; r < c.rectangles.size(); ++r) {
      const auto& rect = c.rectangles[r];
      if (!rect.rich) continue;
      const bool wide = static_cast<double>(rect.abscissae.size()) >= width;
      const bool tall = static_cast<double>(rect.ordinates.size()) >= width;
      if (!wide && !tall) continue;
      if (!pick || rect.points > c.rectangles[*pick].points || (wide && mirrored && rect.points == c.rectangles[*pick].points)) {
        pick = r;
        mirrored = !wide;
      }
    }

    if (pick) {
      const auto& rect = c.rectangles[*pick];
      c.which = RectCase::case1;
      c.mirrored = mirrored;
      const auto& base_idx = mirrored ? st.ys[*pick] : st.xs[*pick];
      const auto& other_idx = mirrored ? st.xs[*pick] : st.ys[*pick];
      c.base_class_size = base_idx.size();
      c.class_cap = std::uint64_t{1} << (mirrored ? rect.ordinate_class : rect.abscissa_class);
      const double lc = std::max(1.0, static_cast<double>(ceil_log2(current.size())));
      c.q = std::max<std::uint64_t>(
          1, static_cast<std::uint64_t>(std::floor(static_cast<double>(c.mass) / (16.0 * base_idx.size() * lc * lc))));
      std::vector<std::size_t> keep;
      for (const auto& [i, cnt] : base_counts(st, *pick, mirrored)) {
        if (cnt >= c.q) keep.push_back(i);
      }
      c.Aprime = subset(current, keep);
      c.Adoubleprime = subset(current, other_idx);
      c.energy_ledger = std::move(ledger);
      return std::move(c);
    }

    // Case 2: drop every rich rectangle's abscissae and ordinates.
    std::vector<bool> drop(current.size(), false);
    for (std::size_t r = 0; r < c.rectangles.size(); ++r) {
      if (!c.rectangles[r].rich) continue;
      for (auto i : st.xs[r]) drop[i] = true;
      for (auto i : st.ys[r]) drop[i] = true;
    }
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < current.size(); ++i) {
      if (!drop[i]) rest.push_back(i);
    }
    if (rest.size() < 4 || round + 1 >= max_rounds) {
      c.which = RectCase::case2_iterated;
      c.rounds = round + 1;
      c.energy_ledger = std::move(ledger);
      return std::move(c);
    }
    current = subset(current, rest);
  }
}

RectAudit audit_rect_cover(const RectCover& c) {
  RectAudit out;
  const auto fibres = popular_fibres(c.current, c.P);
  std::uint64_t mass = 0;
  bool disjoint = true;
  std::uint64_t covered = 0;
  for (std::size_t i = 0; i < c.current.size(); ++i) {
    for (auto b : fibres[i]) {
      ++mass;
      int hits = 0;
      for (const auto& r : c.rectangles) {
        if (r.abscissae.contains(c.current[i]) && r.ordinates.contains(c.current[b])) ++hits;
      }
      disjoint = disjoint && hits == 1;
      covered += hits;
    }
  }
  std::uint64_t listed = 0;
  std::uint64_t rich = 0;
  for (const auto& r : c.rectangles) {
    listed += r.points;
    if (r.rich) rich += r.points;
  }
  out.partition = disjoint && mass == c.mass && listed == mass && covered == mass;
  out.half_mass = 2 * rich >= mass && rich == c.rich_mass;
  if (c.which == RectCase::case1) {
    for (const auto& x : c.Aprime) {
      std::uint64_t n = 0;
      for (const auto& y : c.Adoubleprime) n += c.P.contains(x - y) ? 1 : 0;
      out.pointwise_q = out.pointwise_q && n >= c.q;
    }
    out.bookkeeping = BigInt(static_cast<unsigned long>(c.q)) * static_cast<unsigned long>(c.base_class_size) <=
                      BigInt(2) * static_cast<unsigned long>(mass);
    out.bookkeeping = out.bookkeeping &&
                      BigInt(static_cast<unsigned long>(c.base_class_size)) * static_cast<unsigned long>(c.class_cap) <=
                          BigInt(2) * static_cast<unsigned long>(mass);
  }
  return out;
}

SumConstruction sum_construction_stats(const GSet& a, const RectProfile& profile) {
  a.require_theorem_input();
  SumConstruction s;
  std::optional<RectCover> cover;
  if (a.size() >= 4) cover = rect_decompose(a, profile);
  if (cover && cover->which == RectCase::case1 && !cover->Aprime.empty()) {
    s.from_case1 = true;
    s.A = cover->current;
    s.Aprime = cover->Aprime;
    s.Adoubleprime = cover->Adoubleprime;
    s.P = cover->P;
  } else {
    s.A = a;
    s.Aprime = a;
    s.Adoubleprime = a;
    s.P = dyadic_energy_level(a).members;
  }
  const GSet ratios = combine_set(s.A, s.A, SetOp::div);
  s.ratio_set_size = ratios.size();
  if (ratios.size() > kRatioSetLimit) {
    throw Error(ErrorCode::InfeasibleSize, "|A/A| = " + std::to_string(ratios.size()) + " exceeds " +
                                               std::to_string(kRatioSetLimit));
  }

  ElementSet in_aprime(s.Aprime.begin(), s.Aprime.end());
  ElementSet in_p(s.P.begin(), s.P.end());
  std::vector<std::vector<GroundElement>> fibre(ratios.size());
  std::uint64_t total = 0;
  for (std::size_t l = 0; l < ratios.size(); ++l) {
    for (const auto& x : s.A) {
      if (in_aprime.contains(ratios[l] * x)) fibre[l].push_back(x);
    }
    total += fibre[l].size();
    const auto sz = static_cast<unsigned long>(fibre[l].size());
    s.e_times += BigInt(sz) * sz;
    s.lambda_profile.emplace_back(ratios[l], fibre[l].size());
  }
  const BigInt pairs = BigInt(static_cast<unsigned long>(s.A.size())) * static_cast<unsigned long>(s.Aprime.size());
  s.fibre_identity = BigInt(static_cast<unsigned long>(total)) == pairs;
  s.cauchy_schwarz = s.e_times * static_cast<unsigned long>(ratios.size()) >= pairs * pairs;

  if (s.e_times * static_cast<unsigned long>(s.Adoubleprime.size()) > 20'000'000) {
    throw Error(ErrorCode::InfeasibleSize, "Q_λ construction exceeds the work limit");
  }
  s.lines_ok = true;
  for (std::size_t l = 0; l < ratios.size(); ++l) {
    const GroundElement& lambda = ratios[l];
    std::vector<std::pair<GroundElement, GroundElement>> points;
    ElementSet intercepts;
    for (const auto& ap : fibre[l]) {
      const GroundElement x0 = lambda * ap;
      for (const auto& y0 : s.Adoubleprime) {
        if (!in_p.contains(y0 - x0)) continue;
        for (const auto& b : fibre[l]) {
          GroundElement x = ap + b;
          GroundElement y = y0 + lambda * b;
          const GroundElement c = y - lambda * x;
          s.lines_ok = s.lines_ok && in_p.contains(c);
          intercepts.insert(c);
          points.emplace_back(std::move(x), std::move(y));
        }
      }
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    s.lines_ok = s.lines_ok && intercepts.size() <= s.P.size();
    s.q_sizes.emplace_back(lambda, points.size());
  }
  return s;
}

}  // namespace sumlab
