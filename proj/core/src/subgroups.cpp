#include "sumlab/subgroups.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <regex>

#include "sumlab/energy.hpp"
#include "sumlab/numtheory.hpp"

namespace sumlab {

// ---------------------------------------------------------------- PrimeField

PrimeField::PrimeField(std::uint64_t p, std::uint64_t g) : p_(p), g_(g) {
  if (p <= kLogTableLimit) {
    log_.assign(p, 0);
    std::uint64_t x = 1;
    for (std::uint64_t k = 0; k + 1 < p; ++k) {
      log_[x] = static_cast<std::uint32_t>(k);
      x = x * g % p;
    }
  }
}

std::shared_ptr<const PrimeField> PrimeField::make(std::uint64_t p) {
  if (!nt::is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  return std::shared_ptr<const PrimeField>(new PrimeField(p, nt::primitive_root(p)));
}

// ---------------------------------------------------------------- SubgroupCtx

SubgroupCtx::SubgroupCtx(std::shared_ptr<const PrimeField> field, std::uint64_t t)
    : field_(std::move(field)), t_(t) {
  const std::uint64_t p = field_->p();
  if (t == 0 || (p - 1) % t != 0) {
    throw Error(ErrorCode::OrderDoesNotDivide,
                "t = " + std::to_string(t) + " does not divide p-1 = " + std::to_string(p - 1));
  }
  n_ = (p - 1) / t;
  const std::uint64_t h = nt::powmod(field_->generator(), n_, p);
  gamma_.reserve(t);
  std::uint64_t x = 1;
  for (std::uint64_t i = 0; i < t; ++i) {
    gamma_.push_back(x);
    x = nt::mulmod(x, h, p);
  }
  std::sort(gamma_.begin(), gamma_.end());
  if (p <= PrimeField::kLogTableLimit) {
    member_.assign(p, false);
    for (auto y : gamma_) member_[y] = true;
  }
}

bool SubgroupCtx::contains(std::uint64_t x) const {
  x %= p();
  if (!member_.empty()) return member_[x];
  return std::binary_search(gamma_.begin(), gamma_.end(), x);
}

std::uint64_t SubgroupCtx::coset_index(std::uint64_t x) const {
  x %= p();
  if (x == 0) throw Error(ErrorCode::ZeroElement, "0 lies in no coset");
  if (!field_->has_log_table()) {
    throw Error(ErrorCode::TooLarge, "no discrete-log table for p = " + std::to_string(p()));
  }
  return field_->log(x) % n_;
}

std::vector<std::uint64_t> SubgroupCtx::coset(std::uint64_t j) const {
  if (j >= n_) {
    throw Error(ErrorCode::IndexOutOfRange,
                "coset index " + std::to_string(j) + " outside [0, " + std::to_string(n_) + ")");
  }
  const std::uint64_t c = nt::powmod(g(), j, p());
  std::vector<std::uint64_t> out;
  out.reserve(t_);
  for (auto x : gamma_) out.push_back(nt::mulmod(c, x, p()));
  std::sort(out.begin(), out.end());
  return out;
}

GSet SubgroupCtx::as_gset() const { return GSet::of_residues(gamma_, p()); }

std::string SubgroupCtx::label() const { return "p=" + std::to_string(p()) + ",t=" + std::to_string(t_); }

SubgroupCtx subgroup_context(std::uint64_t p, std::uint64_t t) { return SubgroupCtx(PrimeField::make(p), t); }

SubgroupCtx parse_subgroup_spec(const std::string& spec) {
  static const std::regex re(R"(\s*p\s*=\s*(\d+)\s*,\s*t\s*=\s*(\d+)\s*)");
  std::smatch m;
  if (!std::regex_match(spec, m, re)) {
    throw Error(ErrorCode::ParseError, "subgroup spec must look like p=<prime>,t=<order>: '" + spec + "'");
  }
  try {
    return subgroup_context(std::stoull(m[1]), std::stoull(m[2]));
  } catch (const std::out_of_range&) {
    throw Error(ErrorCode::ParseError, "number out of range in '" + spec + "'");
  }
}

BigInt subgroup_energy(const SubgroupCtx& ctx) {
  const std::uint64_t p = ctx.p();
  const std::uint64_t t = ctx.order();
  // r(λs) = r(s) for λ ∈ Γ, so each nonzero coset contributes t·r(g^j)².
  BigInt sum_sq = 0;
  std::uint64_t c = 1;
  for (std::uint64_t j = 0; j < ctx.index(); ++j) {
    std::uint64_t r = 0;
    for (auto x : ctx.gamma()) r += ctx.contains((c + p - x) % p) ? 1 : 0;
    sum_sq += BigInt(static_cast<unsigned long>(r)) * static_cast<unsigned long>(r);
    c = nt::mulmod(c, ctx.g(), p);
  }
  const std::uint64_t r0 = ctx.contains(p - 1) ? t : 0;
  return BigInt(static_cast<unsigned long>(r0)) * static_cast<unsigned long>(r0) +
         sum_sq * static_cast<unsigned long>(t);
}

// ---------------------------------------------------------------- gaps

GapReport gap_H(const SubgroupCtx& ctx, GapConvention convention) {
  const std::uint64_t p = ctx.p();
  const std::uint64_t n = ctx.index();
  constexpr std::uint64_t kNone = ~0ULL;
  std::vector<std::uint64_t> first(n, kNone), last(n, kNone);
  std::vector<std::uint64_t> best(n, 0), best_u(n, 0);

  // Interior runs: between consecutive members x < y the values x+1..y-1 avoid the coset.
  for (std::uint64_t x = 1; x < p; ++x) {
    const std::uint64_t j = ctx.coset_index(x);
    if (first[j] == kNone) {
      first[j] = x;
    } else {
      const std::uint64_t run = x - last[j] - 1;
      if (run > best[j]) {
        best[j] = run;
        best_u[j] = last[j];
      }
    }
    last[j] = x;
  }

  GapReport rep;
  std::uint64_t best_circ = 0, best_lin = 0;
  std::uint64_t circ_j = 0, circ_u = 0, lin_j = 0, lin_u = 0;
  for (std::uint64_t j = 0; j < n; ++j) {
    // Circular: last+1, ..., p-1, 0, 1, ..., first-1.
    std::uint64_t c = best[j], cu = best_u[j];
    const std::uint64_t wrap = p - last[j] + first[j] - 1;
    if (wrap > c) {
      c = wrap;
      cu = last[j];
    }
    // Linear: runs inside 0..p-1 without wrapping.
    std::uint64_t l = best[j], lu = best_u[j];
    if (first[j] > l) {
      l = first[j];
      lu = p - 1;  // u+1 ≡ 0
    }
    if (p - 1 - last[j] > l) {
      l = p - 1 - last[j];
      lu = last[j];
    }
    if (c > best_circ) {
      best_circ = c;
      circ_j = j;
      circ_u = cu;
    }
    if (l > best_lin) {
      best_lin = l;
      lin_j = j;
      lin_u = lu;
    }
  }
  rep.H_circular = best_circ;
  rep.H_linear = best_lin;
  const bool circ = convention == GapConvention::circular;
  rep.H = circ ? best_circ : best_lin;
  rep.witness_coset = circ ? circ_j : lin_j;
  rep.witness_start = circ ? circ_u : lin_u;

  auto in_witness = [&](std::uint64_t v) { return v != 0 && ctx.coset_index(v) == rep.witness_coset; };
  for (std::uint64_t i = 1; i <= rep.H; ++i) {
    if (in_witness((rep.witness_start + i) % p)) {
      throw Error(ErrorCode::CrossCheckMismatch, "gap witness hits its coset at offset " + std::to_string(i));
    }
  }
  return rep;
}

// ---------------------------------------------------------------- windows

WindowCounts window_counts(const SubgroupCtx& ctx, std::uint64_t h) {
  const std::uint64_t p = ctx.p();
  if (h < 1 || 2 * h >= p) throw Error(ErrorCode::BadSpec, "window needs 1 <= h < p/2");
  WindowCounts w;
  w.per_coset.assign(ctx.index(), 0);
  for (std::uint64_t u = 1; u <= h; ++u) {
    ++w.per_coset[ctx.coset_index(u)];
    ++w.per_coset[ctx.coset_index(p - u)];
  }
  std::uint64_t via_cosets = 0;
  for (auto c : w.per_coset) via_cosets += c * c;

  // Direct congruence count #{(u,x,y) : ux ≡ y, u ∈ Γ, 0 < |x|,|y| <= h}.
  auto in_window = [&](std::uint64_t y) { return y != 0 && (y <= h || y >= p - h); };
  std::uint64_t direct = 0;
  const std::uint64_t t = ctx.order();
  if (t <= 2 * h) {
    for (std::uint64_t xi = 1; xi <= h; ++xi) {
      for (std::uint64_t x : {xi, p - xi}) {
        for (auto u : ctx.gamma()) direct += in_window(nt::mulmod(u, x, p)) ? 1 : 0;
      }
    }
  } else {
    std::vector<std::uint64_t> window;
    for (std::uint64_t xi = 1; xi <= h; ++xi) {
      window.push_back(xi);
      window.push_back(p - xi);
    }
    for (auto x : window) {
      const std::uint64_t xinv = *nt::invmod(x, p);
      for (auto y : window) direct += ctx.contains(nt::mulmod(y, xinv, p)) ? 1 : 0;
    }
  }
  if (direct != via_cosets) {
    throw Error(ErrorCode::CrossCheckMismatch, "N(Γ,h): coset route " + std::to_string(via_cosets) +
                                                   " vs congruence route " + std::to_string(direct));
  }
  w.n_gamma_h = direct;
  return w;
}

// ---------------------------------------------------------------- characters

namespace {

std::complex<double> e_p(std::uint64_t k, std::uint64_t p) {
  const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(p);
  return {std::cos(theta), std::sin(theta)};
}

void guard_work(std::uint64_t work, std::uint64_t max_work, const char* what) {
  if (work > max_work) {
    throw Error(ErrorCode::TooLarge, std::string(what) + ": " + std::to_string(work) +
                                         " terms exceed the limit " + std::to_string(max_work));
  }
}

}  // namespace

CharSums char_sums(const SubgroupCtx& ctx, std::uint64_t max_work) {
  const std::uint64_t p = ctx.p();
  const std::uint64_t t = ctx.order();
  guard_work(t * ctx.index(), max_work, "character sweep");
  CharSums cs;
  cs.s.assign(ctx.index(), {0.0, 0.0});
  std::uint64_t c = 1;
  for (std::uint64_t j = 0; j < ctx.index(); ++j) {
    std::complex<double> acc{0.0, 0.0};
    for (auto x : ctx.gamma()) acc += e_p(nt::mulmod(c, x, p), p);
    cs.s[j] = acc;
    c = nt::mulmod(c, ctx.g(), p);
  }
  for (const auto& s : cs.s) {
    const double m2 = std::norm(s);
    cs.fourth_moment += m2 * m2;
  }
  const double e = subgroup_energy(ctx).get_d();
  const double pd = static_cast<double>(p);
  const double td = static_cast<double>(t);
  cs.orthogonality_bound = pd / td * e;
  cs.orthogonality_exact = (pd * e - td * td * td * td) / td;
  return cs;
}

double parseval_sum(const SubgroupCtx& ctx, std::uint64_t max_work) {
  const std::uint64_t p = ctx.p();
  guard_work((p - 1) * ctx.order(), max_work, "Parseval sum");
  double total = 0;
  for (std::uint64_t c = 1; c < p; ++c) {
    std::complex<double> acc{0.0, 0.0};
    for (auto x : ctx.gamma()) acc += e_p(nt::mulmod(c, x, p), p);
    total += std::norm(acc);
  }
  return total;
}

KsCriterion ks_criterion(const SubgroupCtx& ctx, std::uint64_t h, std::uint64_t max_work) {
  const auto w = window_counts(ctx, h);
  const auto cs = char_sums(ctx, max_work);
  const std::uint64_t n = ctx.index();
  std::vector<std::pair<std::uint64_t, double>> support;
  for (std::uint64_t j = 0; j < n; ++j) {
    if (w.per_coset[j] > 0) support.emplace_back(j, static_cast<double>(w.per_coset[j]));
  }
  guard_work(support.size() * n, max_work, "criterion sweep");
  std::vector<double> mag(n);
  for (std::uint64_t j = 0; j < n; ++j) mag[j] = std::abs(cs.s[j]);

  KsCriterion out;
  out.max_sum = -1;
  for (std::uint64_t k = 0; k < n; ++k) {
    double sum = 0;
    for (const auto& [j, nj] : support) sum += nj * mag[(j + k) % n];
    if (sum > out.max_sum) {
      out.max_sum = sum;
      out.worst_k = k;
    }
  }
  const double half_t = 0.5 * static_cast<double>(ctx.order());
  out.margin = half_t - out.max_sum;
  out.holds = out.max_sum <= half_t;
  return out;
}

// ---------------------------------------------------------------- mod p²

ModP2Subgroup mod_p2_subgroup(std::uint64_t p, std::uint64_t t) {
  if (!nt::is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  if (t == 0 || (p - 1) % t != 0) {
    throw Error(ErrorCode::OrderDoesNotDivide,
                "t = " + std::to_string(t) + " does not divide p-1 = " + std::to_string(p - 1));
  }
  if (p > 0xFFFFFFFFULL) throw Error(ErrorCode::TooLarge, "p² must fit 64 bits");
  if (t > 1000) throw Error(ErrorCode::TooLarge, "T_3 of the lifted subgroup needs t <= 1000");
  const std::uint64_t m = p * p;
  std::uint64_t g2 = nt::primitive_root(p);
  if (nt::powmod(g2, p - 1, m) == 1) g2 += p;
  const std::uint64_t h = nt::powmod(g2, p * (p - 1) / t, m);

  ModP2Subgroup out;
  out.p = p;
  out.t = t;
  std::uint64_t x = 1;
  for (std::uint64_t i = 0; i < t; ++i) {
    out.gamma2.push_back(x);
    x = nt::mulmod(x, h, m);
  }
  std::sort(out.gamma2.begin(), out.gamma2.end());
  std::vector<std::uint64_t> red;
  red.reserve(t);
  for (auto y : out.gamma2) red.push_back(y % p);
  out.reduced = GSet::of_residues(red, p);
  if (out.reduced.size() != t) {
    throw Error(ErrorCode::CrossCheckMismatch, "reduction mod p is not injective on the lifted subgroup");
  }
  std::sort(red.begin(), red.end());
  out.t2_lifted = t_k_residues(out.gamma2, m, 2);
  out.t2_reduced = t_k_residues(red, p, 2);
  out.t3_lifted = t_k_residues(out.gamma2, m, 3);
  out.t3_reduced = t_k_residues(red, p, 3);
  if (out.t2_lifted > out.t2_reduced || out.t3_lifted > out.t3_reduced) {
    throw Error(ErrorCode::CrossCheckMismatch, "T_k grew under reduction mod p");
  }
  return out;
}

// ---------------------------------------------------------------- scans

std::uint64_t ScanBound::resolve(std::uint64_t p, bool upper) const {
  switch (kind) {
    case Kind::literal:
      return value;
    case Kind::p_minus_1:
      return p - 1;
    case Kind::sqrt_p: {
      std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(p)));
      while (r * r > p) --r;
      while ((r + 1) * (r + 1) <= p) ++r;
      return (upper || r * r == p) ? r : r + 1;
    }
  }
  return value;
}

namespace {

ScanBound parse_bound(const std::string& tok) {
  if (tok == "sqrt(p)") return {ScanBound::Kind::sqrt_p, 0};
  if (tok == "p-1") return {ScanBound::Kind::p_minus_1, 0};
  if (!tok.empty() && std::all_of(tok.begin(), tok.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
    try {
      return {ScanBound::Kind::literal, std::stoull(tok)};
    } catch (const std::out_of_range&) {
    }
  }
  throw Error(ErrorCode::ParseError, "bad t bound '" + tok + "'");
}

}  // namespace

ScanSpec parse_scan_spec(const std::string& text) {
  std::string s;
  for (std::size_t i = 0; i < text.size(); ++i) {
    // U+2212 MINUS SIGN
    if (text.compare(i, 3, "\xE2\x88\x92") == 0) {
      s += '-';
      i += 2;
    } else if (text[i] != ' ' && text[i] != '\t') {
      s += text[i];
    }
  }
  static const std::regex re(R"(pin\[(\d+),(\d+)\](?:,t\|p-1)?(?:,tin\[([^,\]]+),([^,\]]+)\])?)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) {
    throw Error(ErrorCode::ParseError, "scan spec must look like 'p in [a,b], t | p-1, t in [c,d]': '" + text + "'");
  }
  ScanSpec spec;
  try {
    spec.p_lo = std::stoull(m[1]);
    spec.p_hi = std::stoull(m[2]);
  } catch (const std::out_of_range&) {
    throw Error(ErrorCode::ParseError, "p bound out of range in '" + text + "'");
  }
  if (spec.p_lo > spec.p_hi) throw Error(ErrorCode::ParseError, "empty p range in '" + text + "'");
  if (m[3].matched) {
    spec.t_lo = parse_bound(m[3]);
    spec.t_hi = parse_bound(m[4]);
  }
  return spec;
}

bool gap_scan(const ScanSpec& spec, const std::function<void(const GapScanRow&)>& sink,
              std::optional<std::chrono::steady_clock::time_point> deadline, GapConvention convention) {
  if (spec.p_hi > spec.p_cap) {
    throw Error(ErrorCode::TooLarge,
                "p up to " + std::to_string(spec.p_hi) + " exceeds the scan cap " + std::to_string(spec.p_cap));
  }
  for (auto p : nt::primes_in(spec.p_lo, spec.p_hi)) {
    const auto field = PrimeField::make(p);
    const std::uint64_t lo = spec.t_lo.resolve(p, false);
    const std::uint64_t hi = spec.t_hi.resolve(p, true);
    for (auto t : nt::divisors(p - 1)) {
      if (t < lo || t > hi) continue;
      if (deadline && std::chrono::steady_clock::now() > *deadline) return false;
      GapScanRow row;
      row.p = p;
      row.t = t;
      row.gap = gap_H(SubgroupCtx(field, t), convention);
      row.exponent = std::log(static_cast<double>(row.gap.H)) / std::log(static_cast<double>(p));
      sink(row);
    }
  }
  return true;
}

}  // namespace sumlab
