#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <thread>

#include <absl/container/flat_hash_set.h>

#include "sumlab/energy.hpp"
#include "sumlab/families.hpp"
#include "sumlab/harness.hpp"
#include "sumlab/incidence.hpp"
#include "sumlab/numtheory.hpp"
#include "sumlab/spectral.hpp"

namespace sumlab {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::proved_exact: return "proved-exact";
    case CheckStatus::ratio_only: return "ratio-only";
    case CheckStatus::violated: return "violated";
    case CheckStatus::skipped: return "skipped";
  }
  return "?";
}

CheckStatus parse_check_status(const std::string& s) {
  for (auto st : {CheckStatus::proved_exact, CheckStatus::ratio_only, CheckStatus::violated, CheckStatus::skipped}) {
    if (s == to_string(st)) return st;
  }
  throw Error(ErrorCode::ParseError, "unknown check status '" + s + "'");
}

CheckInput CheckInput::of_set(std::string label, GSet a) {
  CheckInput in;
  in.label = std::move(label);
  in.set = std::move(a);
  return in;
}

CheckInput CheckInput::of_subgroup(SubgroupCtx ctx) {
  CheckInput in;
  in.label = "subgroup(" + ctx.label() + ")";
  in.set = ctx.as_gset();
  in.subgroup = std::move(ctx);
  return in;
}

const GSet& CheckInput::as_set() const {
  if (!set) throw Error(ErrorCode::BadSpec, "check input '" + label + "' carries no set");
  return *set;
}

namespace {

struct Skip {
  std::string why;
  bool guard = false;
};

struct Eval {
  std::string lhs, rhs;
  double ratio = 0;
  bool holds = true;
  std::string note;
};

BigInt big(std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); }

BigInt pow_big(const BigInt& b, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

double lg(const BigInt& z) {
  if (sgn(z) <= 0) return -std::numeric_limits<double>::infinity();
  long e = 0;
  const double m = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log2(m) + static_cast<double>(e);
}

double lg(double x) { return std::log2(x); }

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// Decimal text of 2^l.
std::string real_from_log(double l) {
  if (l < 1000 && l > -1000) return fmt(std::exp2(l));
  const double dec = l * std::log10(2.0);
  const double e = std::floor(dec);
  return fmt(std::pow(10.0, dec - e)) + "e" + fmt(e);
}

double ratio_of(const BigInt& l, const BigInt& r) {
  if (sgn(r) == 0) return sgn(l) == 0 ? 1.0 : std::numeric_limits<double>::infinity();
  if (sgn(l) == 0) return 0;
  return std::exp2(lg(l) - lg(r));
}

Eval exact_le(const BigInt& l, const BigInt& r) { return {to_decimal(l), to_decimal(r), ratio_of(l, r), l <= r, {}}; }
Eval exact_ge(const BigInt& l, const BigInt& r) { return {to_decimal(l), to_decimal(r), ratio_of(l, r), l >= r, {}}; }
Eval exact_eq(const BigInt& l, const BigInt& r) { return {to_decimal(l), to_decimal(r), ratio_of(l, r), l == r, {}}; }

/// Ratio check with an exact lhs and a real rhs given by its base-2 log.
Eval ratio_big(const BigInt& l, double rhs_log2) {
  return {to_decimal(l), real_from_log(rhs_log2), std::exp2(lg(l) - rhs_log2), true, {}};
}
Eval ratio_real(double l, double r) { return {fmt(l), fmt(r), l / r, true, {}}; }

std::size_t card(const GSet& a, const GSet& b, SetOp op) { return combine_set(a, b, op).size(); }

const GSet& theorem_set(const CheckInput& in) {
  const GSet& a = in.as_set();
  try {
    a.require_theorem_input();
  } catch (const Error& e) {
    throw Skip{e.what()};
  }
  return a;
}

void need_size(const GSet& a, std::size_t lo, std::size_t hi = std::numeric_limits<std::size_t>::max()) {
  if (a.size() < lo) throw Skip{"needs |A| >= " + std::to_string(lo)};
  if (a.size() > hi) throw Skip{"needs |A| <= " + std::to_string(hi)};
}

const SubgroupCtx& subgroup_of(const CheckInput& in) {
  if (!in.subgroup) throw Error(ErrorCode::BadSpec, "check needs a subgroup input, got '" + in.label + "'");
  return *in.subgroup;
}

/// M = |AA| / |A| as a double, with the product set size.
double mult_doubling(const GSet& a) { return static_cast<double>(card(a, a, SetOp::mul)) / static_cast<double>(a.size()); }

std::vector<std::uint64_t> spectral_deltas(std::size_t n) {
  std::vector<std::uint64_t> d{1, (n + 1) / 2, n};
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  return d;
}

// ---------------------------------------------------------- exact, sets

Eval e3_identity(const CheckInput& in, const CheckOptions&) {
  const auto r = e3_routes(theorem_set(in));
  Eval e = exact_eq(r.moment, r.intersections);
  e.holds = r.agree();
  e.note = "energies=" + to_decimal(r.energies);
  return e;
}

Eval cs_difference(const CheckInput& in, const CheckOptions&) {
  const GSet& a = theorem_set(in);
  return exact_ge(big(card(a, a, SetOp::sub)) * energy(a), pow_big(big(a.size()), 4));
}

Eval cs_sum(const CheckInput& in, const CheckOptions&) {
  const GSet& a = theorem_set(in);
  return exact_ge(big(card(a, a, SetOp::add)) * energy(a), pow_big(big(a.size()), 4));
}

Eval plunnecke(const CheckInput& in, const CheckOptions&) {
  const GSet& a = theorem_set(in);
  const GSet aa = combine_set(a, a, SetOp::mul);
  const std::size_t aaa = card(aa, a, SetOp::div);
  return exact_le(big(aaa) * pow_big(big(a.size()), 2), pow_big(big(aa.size()), 3));
}

Eval holder(const CheckInput& in, const CheckOptions&) {
  const GSet& a = theorem_set(in);
  const BigInt e = energy(a);
  const BigInt e3 = moment_energy(a, 3);
  const double e32 = moment_energy_real(a, 1.5);
  const double rhs_log = lg(e3) + 2 * lg(e32);
  const double lhs_log = 3 * lg(e);
  Eval out{to_decimal(pow_big(e, 3)), real_from_log(rhs_log), std::exp2(lhs_log - rhs_log), false, {}};
  out.holds = lhs_log <= rhs_log + 1e-9;
  return out;
}

Eval cor1_lower(const CheckInput& in, const CheckOptions&) {
  const GSet& a = theorem_set(in);
  return exact_ge(difference_triple_count(a) * moment_energy(a, 3), pow_big(big(a.size()), 6));
}

Eval lemma_key(const CheckInput& in, const CheckOptions&) {
  const GSet& a = theorem_set(in);
  const auto pop = popular_differences(a);
  const BigInt count = difference_triple_count(a, pop.members);
  Eval e = exact_ge(4 * moment_energy(a, 3) * count, pow_big(big(a.size()), 6));
  e.note = "count=" + to_decimal(count) + ",|P|=" + std::to_string(pop.members.size());
  return e;
}

Eval pigeonhole(const CheckInput& in, const CheckOptions&) {
  const GSet& a = theorem_set(in);
  const auto pop = popular_differences(a);
  return exact_ge(2 * pop.mass, pow_big(big(a.size()), 2));
}

Eval dyadic_level(const CheckInput& in, const CheckOptions&) {
  const GSet& a = theorem_set(in);
  const auto lvl = dyadic_energy_level(a);
  Eval e = exact_ge(lvl.mass_sq * static_cast<unsigned long>(lvl.classes), energy(a));
  // Every member must sit in [Δ, 2Δ).
  const auto r = combine(a, a, SetOp::sub);
  for (const auto& d : lvl.members) {
    const auto c = r.count(d);
    e.holds = e.holds && c >= lvl.delta && c < 2 * lvl.delta;
  }
  e.note = "delta=" + std::to_string(lvl.delta) + ",classes=" + std::to_string(lvl.classes);
  return e;
}

Eval tail_split(const CheckInput& in, const CheckOptions&) {
  const GSet& a = theorem_set(in);
  const BigInt e = energy(a);
  const auto r = combine(a, a, SetOp::sub);
  Eval out;
  for (auto delta : spectral_deltas(a.size())) {
    const auto t = tail_decompose(a, delta);
    std::uint64_t support = 0;
    for (const auto& [_, c] : r.entries()) support += c > delta ? 1 : 0;
    out = exact_eq(t.e_low + t.e_high, e);
    if (!out.holds || support != t.tail_support) {
      out.holds = false;
      out.note = "delta=" + std::to_string(delta);
      return out;
    }
  }
  return out;
}

Eval lemma_brl(const CheckInput& in, const CheckOptions& opt) {
  const GSet& a = theorem_set(in);
  const GSet aa = combine_set(a, a, SetOp::mul);
  const GSet aa_a = combine_set(aa, a, SetOp::div);
  const GSet a_aa = combine_set(a, aa, SetOp::div);
  const GSet a_a = combine_set(a, a, SetOp::div);
  for (const GSet* x : {&aa, &aa_a, &a_aa, &a_a}) {
    if (x->size() > opt.max_grid) {
      throw Skip{"grid side " + std::to_string(x->size()) + " exceeds --max-grid " + std::to_string(opt.max_grid), true};
    }
  }
  constexpr auto conv = TripleConvention::with_repeats;
  const BigInt t3 = t_k(a, 3);
  const BigInt n2 = big(a.size()) * big(a.size());
  const BigInt lhs = pow_big(t3 * n2, 2);
  const BigInt s = big(aa_a.size()) * big(aa_a.size());
  const BigInt b1 = s * big(aa.size()) * big(aa.size()) * collinear_triples(a_aa, conv) * collinear_triples(aa, conv);
  const BigInt b2 = s * big(a_a.size()) * big(a_a.size()) * collinear_triples(aa_a, conv) * collinear_triples(a_a, conv);
  Eval e = exact_le(lhs, b1 < b2 ? b1 : b2);
  e.holds = lhs <= b1 && lhs <= b2;
  e.note = "branch1=" + to_decimal(b1) + ",branch2=" + to_decimal(b2);
  return e;
}

Eval lemma_spectral(const CheckInput& in, const CheckOptions&) {
  const GSet& a = theorem_set(in);
  const BigInt e3 = moment_energy(a, 3);
  const BigInt sigma = sigma_sum(a);
  const BigInt n6 = pow_big(big(a.size()), 6);
  Eval worst;
  bool first = true;
  bool all = true;
  for (auto delta : spectral_deltas(a.size())) {
    const BigInt ep = tail_decompose(a, delta).e_low;
    Eval e = exact_le(pow_big(ep, 6), n6 * e3 * big(delta) * big(delta) * sigma);
    e.note = "delta=" + std::to_string(delta);
    all = all && e.holds;
    if (first || e.ratio > worst.ratio) worst = e;
    first = false;
  }
  worst.holds = all;
  return worst;
}

Eval psd_check(const CheckInput& in, const CheckOptions& opt) {
  const GSet& a = theorem_set(in);
  need_size(a, 2, opt.spectral_max);
  const auto mats = build_matrices(a, 1);
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  double worst = std::numeric_limits<double>::infinity();
  bool agree = true;
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t k = 0; k < opt.psd_vectors; ++k) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
    const auto w = psd_witness(mats, v);
    worst = std::min(worst, w.direct);
    agree = agree && std::abs(w.direct - w.sum_of_squares) <= 1e-9 * std::max(1.0, std::abs(w.sum_of_squares));
  }
  Eval e{fmt(worst), "-1e-09", 0, worst >= -1e-9 && agree, "routes_agree=" + std::string(agree ? "1" : "0")};
  e.ratio = worst / -1e-9;
  return e;
}

Eval trace_routes(const CheckInput& in, const CheckOptions& opt) {
  const GSet& a = theorem_set(in);
  need_size(a, 2, opt.spectral_max);
  const auto tr = trace_m2r(build_matrices(a, 1));
  Eval e = ratio_real(tr.direct, tr.combinatorial);
  e.holds = std::abs(tr.direct - tr.combinatorial) <= 1e-6 * std::max(1.0, std::abs(tr.combinatorial));
  return e;
}

Eval spectral_chain(const CheckInput& in, const CheckOptions& opt) {
  const GSet& a = theorem_set(in);
  need_size(a, 2, opt.spectral_max);
  Eval out;
  bool first = true;
  bool all = true;
  for (auto delta : spectral_deltas(a.size())) {
    const auto c = spectral_chain_check(a, delta);
    const bool ok = c.step_i && c.step_ii;
    all = all && ok;
    Eval e = ratio_real(c.mu1, c.bound_i);
    e.note = "delta=" + std::to_string(delta) + ",vRv=" + fmt(c.rayleigh_R) + ",sqrt_delta_mu1=" + fmt(c.bound_ii);
    if (first || e.ratio < out.ratio) out = e;
    first = false;
  }
  out.holds = all;
  return out;
}

Eval prop7(const CheckInput& in, const CheckOptions&) {
  const GSet& a = theorem_set(in);
  const GSet diff = combine_set(a, a, SetOp::sub);
  const GSet aa = combine_set(a, a, SetOp::mul);
  if (aa.size() * aa.size() > 4'000'000) throw Skip{"|AA|² exceeds 4e6", true};
  const auto dd = combine(diff, diff, SetOp::sub);
  if (a.size() * dd.support_size() > 5'000'000) throw Skip{"|A|·|D-D| exceeds 5e6", true};
  const auto pop = popular_differences(a);
  const auto r_aa = combine(aa, aa, SetOp::sub);
  // S = {s ∈ AA-AA : r(s) >= Δ}, Δ = |A|² / (2|A-A|).
  const BigInt n2 = big(a.size()) * big(a.size());
  const BigInt twice_d = 2 * big(diff.size());
  std::vector<GroundElement> s;
  for (const auto& [x, c] : r_aa.entries()) {
    if (big(c) * twice_d >= n2) s.push_back(x);
  }
  const GSet S = GSet::from(std::move(s), a.kind());
  const absl::flat_hash_set<GroundElement, GroundHash> in_s(S.begin(), S.end());
  // |S| Δ <= |AA|², cross-multiplied.
  const bool s_bound = big(S.size()) * n2 <= twice_d * big(aa.size()) * big(aa.size());
  // |A| · #{(d,d') ∈ D×P : d-d' ∈ D} <= Σ_x #{(d,d'') ∈ D² : x(d-d'') ∈ S}.
  const BigInt left = big(a.size()) * difference_triple_count(a, pop.members);
  BigInt right = 0;
  for (const auto& x : a) {
    for (const auto& [e, c] : dd.entries()) {
      if (in_s.contains(x * e)) right += big(c);
    }
  }
  Eval out = exact_le(left, right);
  out.holds = out.holds && s_bound;
  // Szemerédi–Trotter form of the line count, reported only.
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(aa.size()) / n;
  const double delta = n * n / (2.0 * static_cast<double>(diff.size()));
  const double st = n * n * std::pow(m, 4.0 / 3) * std::pow(static_cast<double>(diff.size()), 4.0 / 3) *
                    std::pow(delta, -2.0 / 3);
  out.note = "|S|=" + std::to_string(S.size()) + ",st_ratio=" + fmt(std::exp2(lg(right)) / st);
  return out;
}

Eval rect_structure(const CheckInput& in, const CheckOptions& opt) {
  const GSet& a = theorem_set(in);
  need_size(a, 4);
  const auto cover = rect_decompose(a, opt.profile);
  const auto audit = audit_rect_cover(cover);
  Eval e = exact_ge(2 * big(cover.rich_mass), big(cover.mass));
  e.holds = audit.ok();
  e.note = std::string(to_string(cover.which)) + ",rounds=" + std::to_string(cover.rounds) +
           ",q=" + std::to_string(cover.q) + ",|A'|=" + std::to_string(cover.Aprime.size()) +
           ",partition=" + (audit.partition ? "1" : "0") + ",pointwise=" + (audit.pointwise_q ? "1" : "0") +
           ",bookkeeping=" + (audit.bookkeeping ? "1" : "0");
  return e;
}

Eval sum_construction(const CheckInput& in, const CheckOptions& opt) {
  const GSet& a = theorem_set(in);
  const auto s = sum_construction_stats(a, opt.profile);
  const BigInt pairs = big(s.A.size()) * big(s.Aprime.size());
  Eval e = exact_ge(s.e_times * big(s.ratio_set_size), pairs * pairs);
  e.holds = s.fibre_identity && s.cauchy_schwarz && s.lines_ok;
  e.note = std::string(s.from_case1 ? "case1" : "fallback") + ",E_times=" + to_decimal(s.e_times) +
           ",fibres=" + (s.fibre_identity ? "1" : "0") + ",lines=" + (s.lines_ok ? "1" : "0");
  return e;
}

// ---------------------------------------------------------- exact, subgroups

std::vector<std::uint64_t> window_hs(std::uint64_t p) {
  std::vector<std::uint64_t> hs;
  for (std::uint64_t h : {std::uint64_t{1}, std::uint64_t{2}, p / 10}) {
    if (h >= 1 && 2 * h < p && std::find(hs.begin(), hs.end(), h) == hs.end()) hs.push_back(h);
  }
  return hs;
}

Eval window_dual(const CheckInput& in, const CheckOptions&) {
  const auto& ctx = subgroup_of(in);
  BigInt lhs = 0;
  BigInt rhs = 0;
  std::string note;
  for (auto h : window_hs(ctx.p())) {
    const auto w = window_counts(ctx, h);
    BigInt sq = 0;
    for (auto n : w.per_coset) sq += big(n) * big(n);
    lhs += sq;
    rhs += big(w.n_gamma_h);
    note += (note.empty() ? "" : ",") + ("N(h=" + std::to_string(h) + ")=" + std::to_string(w.n_gamma_h));
  }
  if (sgn(rhs) == 0) throw Skip{"no admissible window length"};
  Eval e = exact_eq(lhs, rhs);
  e.note = note;
  return e;
}

Eval orthogonality(const CheckInput& in, const CheckOptions&) {
  const auto cs = char_sums(subgroup_of(in));
  Eval e = ratio_real(cs.fourth_moment, cs.orthogonality_bound);
  e.holds = cs.fourth_moment < cs.orthogonality_bound &&
            std::abs(cs.fourth_moment - cs.orthogonality_exact) <= 1e-6 * std::max(1.0, cs.orthogonality_exact);
  return e;
}

Eval parseval(const CheckInput& in, const CheckOptions&) {
  const auto& ctx = subgroup_of(in);
  const double got = parseval_sum(ctx);
  const double want = static_cast<double>(ctx.order()) * static_cast<double>(ctx.p() - ctx.order());
  Eval e = ratio_real(got, want);
  e.holds = std::abs(got - want) <= 1e-6 * std::max(1.0, want);
  return e;
}

Eval subgroup_energy_routes(const CheckInput& in, const CheckOptions&) {
  const auto& ctx = subgroup_of(in);
  return exact_eq(subgroup_energy(ctx), energy(in.as_set()));
}

Eval mod_p2(const CheckInput& in, const CheckOptions&) {
  const auto& ctx = subgroup_of(in);
  const auto m = mod_p2_subgroup(ctx.p(), ctx.order());
  Eval e = exact_le(m.t3_lifted, m.t3_reduced);
  e.holds = m.t3_lifted <= m.t3_reduced && m.t2_lifted <= m.t2_reduced;
  e.note = "T2=" + to_decimal(m.t2_lifted) + "<=" + to_decimal(m.t2_reduced);
  return e;
}

// ---------------------------------------------------------- ratio, sets

Eval elekes(const CheckInput& in, const CheckOptions&) {
  const GSet& a = theorem_set(in);
  const BigInt s = big(card(a, a, SetOp::add));
  const BigInt p = big(card(a, a, SetOp::mul));
  return ratio_big(s * s * p * p, 5 * lg(static_cast<double>(a.size())));
}

Eval sh(const CheckInput& in, const CheckOptions&) {
  const GSet& a = theorem_set(in);
  const BigInt lhs = pow_big(big(card(a, a, SetOp::sub)), 6) * pow_big(big(card(a, a, SetOp::mul)), 13);
  return ratio_big(lhs, 23 * lg(static_cast<double>(a.size())));
}

Eval main_thm(const CheckInput& in, const CheckOptions&) {
  const GSet& a = theorem_set(in);
  const double n = static_cast<double>(a.size());
  const BigInt lhs = pow_big(big(card(a, a, SetOp::sub)), 3) * pow_big(big(card(a, a, SetOp::mul)), 5);
  return ratio_big(lhs, 10 * lg(n) - 0.5 * lg(lg(n)));
}

Eval energy_thm(const CheckInput& in, const CheckOptions&) {
  const GSet& a = theorem_set(in);
  const double n = static_cast<double>(a.size());
  const double m = mult_doubling(a);
  return ratio_big(energy(a), 1.6 * lg(m) + 2.45 * lg(n) + 0.2 * lg(lg(n)));
}

Eval sum_est(const CheckInput& in, const CheckOptions&) {
  const GSet& a = theorem_set(in);
  const BigInt lhs = pow_big(big(card(a, a, SetOp::add)), 10) * pow_big(big(card(a, a, SetOp::mul)), 17);
  return ratio_big(lhs, 33 * lg(static_cast<double>(a.size())));
}

Eval cor11(const CheckInput& in, const CheckOptions&) {
  const GSet& a = theorem_set(in);
  const double n = static_cast<double>(a.size());
  return ratio_big(t_k(a, 3), 12 * lg(mult_doubling(a)) + 4 * lg(n) + lg(lg(n)));
}

Eval sig_est(const CheckInput& in, const CheckOptions&) {
  const GSet& a = theorem_set(in);
  return ratio_big(sigma_sum(a), 4.6 * lg(static_cast<double>(a.size())));
}

Eval b1_e3(const CheckInput& in, const CheckOptions&) {
  const GSet& a = theorem_set(in);
  const double n = static_cast<double>(a.size());
  return ratio_big(moment_energy(a, 3), 2 * lg(mult_doubling(a)) + 3 * lg(n) + lg(lg(n)));
}

std::uint64_t tail_delta(std::size_t n) {
  return static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(n))));
}

Eval b3_tail(const CheckInput& in, const CheckOptions&) {
  const GSet& a = theorem_set(in);
  need_size(a, 3);
  const auto delta = tail_delta(a.size());
  const double n = static_cast<double>(a.size());
  Eval e = ratio_big(tail_decompose(a, delta).e_high, 2 * lg(mult_doubling(a)) + 3 * lg(n) - lg(static_cast<double>(delta)));
  e.note = "delta=" + std::to_string(delta);
  return e;
}

Eval b31_count(const CheckInput& in, const CheckOptions&) {
  const GSet& a = theorem_set(in);
  need_size(a, 3);
  const auto delta = tail_delta(a.size());
  const double n = static_cast<double>(a.size());
  Eval e = ratio_big(big(tail_decompose(a, delta).tail_support),
                     2 * lg(mult_doubling(a)) + 3 * lg(n) - 3 * lg(static_cast<double>(delta)));
  e.note = "delta=" + std::to_string(delta);
  return e;
}

Eval trip(const CheckInput& in, const CheckOptions&) {
  const GSet& a = theorem_set(in);
  need_size(a, 3);
  const double n = static_cast<double>(a.size());
  return ratio_big(collinear_triples(a), 4 * lg(n) + lg(lg(n)));
}

// ---------------------------------------------------------- ratio, subgroups

const SubgroupCtx& subgroup_min3(const CheckInput& in) {
  const auto& ctx = subgroup_of(in);
  if (ctx.order() < 3) throw Skip{"needs t >= 3"};
  return ctx;
}

Eval subgr_1(const CheckInput& in, const CheckOptions&) {
  const auto& ctx = subgroup_min3(in);
  const BigInt t3 = t_k(in.as_set(), 3);
  const BigInt tt = subgroup_collinear_triples(ctx, TripleConvention::with_repeats);
  Eval e = ratio_big(tt, 4 * lg(static_cast<double>(ctx.order())) + lg(lg(static_cast<double>(ctx.order()))));
  e.note = "T3=" + to_decimal(t3) + ",T3_over_triples=" + fmt(ratio_of(t3, tt));
  return e;
}

Eval subgr_2(const CheckInput& in, const CheckOptions&) {
  const auto& ctx = subgroup_min3(in);
  const double t = static_cast<double>(ctx.order());
  return ratio_big(subgroup_energy(ctx), 2.45 * lg(t) + 0.2 * lg(lg(t)));
}

Eval b2_e3(const CheckInput& in, const CheckOptions&) {
  const auto& ctx = subgroup_min3(in);
  const double t = static_cast<double>(ctx.order());
  return ratio_big(moment_energy(in.as_set(), 3), 3 * lg(t) + lg(lg(t)));
}

Eval thm17(const CheckInput& in, const CheckOptions&) {
  const auto& ctx = subgroup_min3(in);
  const double t = static_cast<double>(ctx.order());
  const double p = static_cast<double>(ctx.p());
  double bound = 0;
  std::string range;
  if (t >= std::pow(p, 2.0 / 3)) {
    bound = std::sqrt(p) * std::pow(t, 3.5);
    range = "t>=p^(2/3)";
  } else if (t >= std::sqrt(p) * lg(p)) {
    bound = std::pow(t, 5) / std::sqrt(p);
    range = "p^(1/2)log(p)<=t<p^(2/3)";
  } else {
    bound = std::pow(t, 4) * lg(t);
    range = "t<p^(1/2)log(p)";
  }
  const double main = std::pow(t, 6) / p;
  Eval e = ratio_big(subgroup_collinear_triples(ctx), lg(main + bound));
  e.note = "range=" + range;
  return e;
}

GSet lemma18_q(const SubgroupCtx& ctx) {
  std::vector<std::uint64_t> idx{0};
  if (ctx.index() >= 2) idx.push_back(1);
  return invariant_union(ctx, idx);
}

Eval lemma18(const CheckInput& in, const CheckOptions&) {
  const auto& ctx = subgroup_min3(in);
  const GSet q = lemma18_q(ctx);
  const double t = static_cast<double>(ctx.order());
  const double qs = static_cast<double>(q.size());
  const double p = static_cast<double>(ctx.p());
  Eval e = ratio_big(energy_pair(q, in.as_set()), lg(t * t * qs * qs / p + t * std::pow(qs, 1.5)));
  e.note = "|Q|=" + std::to_string(q.size());
  return e;
}

Eval thm19(const CheckInput& in, const CheckOptions&) {
  const auto& ctx = subgroup_min3(in);
  const double t = static_cast<double>(ctx.order());
  const double p = static_cast<double>(ctx.p());
  if (t * t < p || t > std::pow(p, 2.0 / 3)) throw Skip{"needs p^(1/2) <= t <= p^(2/3)"};
  const double l1 = (104 * lg(t) - 3 * lg(p)) / 40;
  const double l2 = (68 * lg(t) - 5 * lg(p)) / 24;
  return ratio_big(subgroup_energy(ctx), 0.25 * lg(lg(t)) + std::max(l1, l2));
}

Eval thm20(const CheckInput& in, const CheckOptions&) {
  const auto& ctx = subgroup_of(in);
  if (ctx.order() * ctx.order() < ctx.p()) throw Skip{"needs t >= p^(1/2)"};
  const auto gap = gap_H(ctx);
  Eval e = ratio_big(big(gap.H), 437.0 / 480 * lg(static_cast<double>(ctx.p())));
  e.note = "exponent=" + fmt(lg(static_cast<double>(gap.H)) / lg(static_cast<double>(ctx.p())));
  return e;
}

std::uint64_t interval_h(std::uint64_t p) {
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(p), 43.0 / 480))));
}

Eval subgr_int(const CheckInput& in, const CheckOptions&) {
  const auto& ctx = subgroup_of(in);
  if (ctx.order() * ctx.order() < ctx.p()) throw Skip{"needs t >= p^(1/2)"};
  const std::uint64_t h = interval_h(ctx.p());
  if (2 * h >= ctx.p()) throw Skip{"window too long for p"};
  const double t = static_cast<double>(ctx.order());
  const double p = static_cast<double>(ctx.p());
  const double hd = static_cast<double>(h);
  constexpr double nu = 6;
  const double bound = hd * std::pow(t, (2 * nu + 1) / (2 * nu * (nu + 1))) * std::pow(p, -1 / (2 * (nu + 1))) +
                       hd * hd * std::pow(t, 1 / nu) * std::pow(p, -1 / nu);
  Eval e = ratio_big(big(window_counts(ctx, h).n_gamma_h), lg(bound));
  e.note = "h=" + std::to_string(h) + ",nu=6";
  return e;
}

Eval ks_check(const CheckInput& in, const CheckOptions&) {
  const auto& ctx = subgroup_of(in);
  if (ctx.order() * ctx.order() < ctx.p()) throw Skip{"needs t >= p^(1/2)"};
  const std::uint64_t h = interval_h(ctx.p());
  if (2 * h >= ctx.p()) throw Skip{"window too long for p"};
  const auto ks = ks_criterion(ctx, h);
  Eval e = ratio_real(ks.max_sum, 0.5 * static_cast<double>(ctx.order()));
  e.note = std::string("holds=") + (ks.holds ? "1" : "0") + ",h=" + std::to_string(h);
  return e;
}

// ---------------------------------------------------------- registry

using CheckFn = Eval (*)(const CheckInput&, const CheckOptions&);

struct Entry {
  CheckInfo info;
  CheckFn fn;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r = {
      {{"e3_identity", true, InputKind::set, "Σ r³ = Σ|A∩(A+d)∩(A+d')|² = Σ E(A, A_d)"}, e3_identity},
      {{"cs_difference", true, InputKind::set, "|A-A| E(A) >= |A|^4"}, cs_difference},
      {{"cs_sum", true, InputKind::set, "|A+A| E(A) >= |A|^4"}, cs_sum},
      {{"plunnecke", true, InputKind::set, "|AA/A| |A|² <= |AA|³"}, plunnecke},
      {{"holder", true, InputKind::set, "E³ <= E₃ E_{3/2}²"}, holder},
      {{"cor1_lower", true, InputKind::set, "#{d-d' ∈ D} E₃ >= |A|^6"}, cor1_lower},
      {{"lemma_key", true, InputKind::set, "4 E₃ #{(d,d',d'') ∈ D×P×D : d'' = d-d'} >= |A|^6"}, lemma_key},
      {{"pigeonhole", true, InputKind::set, "Σ_{d∈P} r(d) >= |A|²/2"}, pigeonhole},
      {{"dyadic_level", true, InputKind::set, "classes · Σ_{level} r² >= E"}, dyadic_level},
      {{"tail_split", true, InputKind::set, "E' + E'' = E"}, tail_split},
      {{"lemma_brl", true, InputKind::set, "T₃ bound by collinear triples, both branches, squared"}, lemma_brl},
      {{"lemma_spectral", true, InputKind::set, "E'^6 <= |A|^6 E₃ Δ² Σ"}, lemma_spectral},
      {{"psd_witness", true, InputKind::set, "vᵀRv >= -1e-9, two routes"}, psd_check},
      {{"trace_routes", true, InputKind::set, "tr(M M R) by two routes"}, trace_routes},
      {{"spectral_chain", true, InputKind::set, "Perron–Frobenius chain steps (i), (ii)"}, spectral_chain},
      {{"prop7", true, InputKind::set, "S-set size and the injective count"}, prop7},
      {{"rect_structure", true, InputKind::set, "rectangle cover postconditions"}, rect_structure},
      {{"sum_construction", true, InputKind::set, "E^× fibre identity, Cauchy–Schwarz, Q_λ lines"}, sum_construction},
      {{"window_dual", true, InputKind::subgroup, "Σ_j N_j(h)² = N(Γ,h)"}, window_dual},
      {{"orthogonality", true, InputKind::subgroup, "Σ|S_j|^4 < (p/t) E(Γ)"}, orthogonality},
      {{"parseval", true, InputKind::subgroup, "Σ_{c≠0}|S(c,Γ)|² = t(p-t)"}, parseval},
      {{"subgroup_energy", true, InputKind::subgroup, "E(Γ) by coset counting and by enumeration"},
       subgroup_energy_routes},
      {{"mod_p2", true, InputKind::subgroup, "T₃ of the mod-p² lift <= T₃ mod p"}, mod_p2},
      {{"elekes", false, InputKind::set, "|A+A|²|AA|² vs |A|^5"}, elekes},
      {{"sh", false, InputKind::set, "|A-A|^6|AA|^13 vs |A|^23"}, sh},
      {{"main_thm", false, InputKind::set, "|A-A|³|AA|^5 vs |A|^10 / log^{1/2}|A|"}, main_thm},
      {{"energy_thm", false, InputKind::set, "E vs M^{8/5}|A|^{49/20} log^{1/5}|A|"}, energy_thm},
      {{"sum_est", false, InputKind::set, "|A+A|^10|AA|^17 vs |A|^33"}, sum_est},
      {{"cor11", false, InputKind::set, "T₃ vs M^12 |A|^4 log|A|"}, cor11},
      {{"sig_est", false, InputKind::set, "Σ vs |A|^{23/5}"}, sig_est},
      {{"b1_e3", false, InputKind::set, "E₃ vs M²|A|³ log|A|"}, b1_e3},
      {{"b3_tail", false, InputKind::set, "Σ_{r>Δ} r² vs M²|A|³/Δ"}, b3_tail},
      {{"b31_count", false, InputKind::set, "#{r>Δ} vs M²|A|³/Δ³"}, b31_count},
      {{"trip", false, InputKind::set, "collinear triples vs |A|^4 log|A|"}, trip},
      {{"subgr_1", false, InputKind::subgroup, "collinear triples of Γ vs t^4 log t"}, subgr_1},
      {{"subgr_2", false, InputKind::subgroup, "E(Γ) vs t^{49/20} log^{1/5} t"}, subgr_2},
      {{"b2_e3", false, InputKind::subgroup, "E₃(Γ) vs t³ log t"}, b2_e3},
      {{"thm17", false, InputKind::subgroup, "collinear triples of Γ vs t^6/p + range bound"}, thm17},
      {{"lemma18", false, InputKind::subgroup, "E(Q,Γ) vs t²|Q|²/p + t|Q|^{3/2}"}, lemma18},
      {{"thm19", false, InputKind::subgroup, "E(Γ) for p^{1/2} <= t <= p^{2/3}"}, thm19},
      {{"thm20", false, InputKind::subgroup, "H_p(t) vs p^{437/480}"}, thm20},
      {{"subgr_int", false, InputKind::subgroup, "N(Γ,h) vs the ν = 6 interval bound"}, subgr_int},
      {{"ks_criterion", false, InputKind::subgroup, "max_k Σ_j N_j |S_{j+k}| vs t/2"}, ks_check},
  };
  return r;
}

const Entry& find_entry(const std::string& id) {
  for (const auto& e : registry()) {
    if (e.info.id == id) return e;
  }
  throw Error(ErrorCode::UnknownCheck, "unknown check '" + id + "'");
}

}  // namespace

const std::vector<CheckInfo>& list_checks() {
  static const std::vector<CheckInfo> infos = [] {
    std::vector<CheckInfo> out;
    for (const auto& e : registry()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

std::vector<std::string> resolve_check_list(const std::string& spec) {
  std::vector<std::string> out;
  if (spec == "all" || spec == "all-exact" || spec == "all-ratio") {
    for (const auto& e : registry()) {
      if (spec == "all" || e.info.exact == (spec == "all-exact")) out.push_back(e.info.id);
    }
    return out;
  }
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    find_entry(cur);
    if (std::find(out.begin(), out.end(), cur) == out.end()) out.push_back(cur);
    cur.clear();
  };
  for (char c : spec) {
    if (c == ',') {
      flush();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  flush();
  if (out.empty()) throw Error(ErrorCode::UnknownCheck, "empty check list");
  return out;
}

CheckResult run_check(const std::string& check_id, const CheckInput& input, const CheckOptions& options) {
  const Entry& entry = find_entry(check_id);
  CheckResult res;
  res.check_id = check_id;
  res.input = input.label;
  if (entry.info.input == InputKind::subgroup && !input.subgroup) {
    res.status = CheckStatus::skipped;
    res.note = "needs a subgroup input";
    return res;
  }
  const auto start = std::chrono::steady_clock::now();
  try {
    const Eval e = entry.fn(input, options);
    res.lhs = e.lhs;
    res.rhs = e.rhs;
    res.ratio = e.ratio;
    res.note = e.note;
    if (entry.info.exact) {
      res.status = e.holds ? CheckStatus::proved_exact : CheckStatus::violated;
    } else {
      res.status = CheckStatus::ratio_only;
    }
  } catch (const Skip& s) {
    res.status = CheckStatus::skipped;
    res.note = s.why;
    res.guard = s.guard;
  } catch (const Error& e) {
    if (is_guard_error(e.code())) {
      res.status = CheckStatus::skipped;
      res.guard = true;
      res.note = e.what();
    } else if (e.code() == ErrorCode::DegenerateInput || e.code() == ErrorCode::ZeroElement) {
      res.status = CheckStatus::skipped;
      res.note = e.what();
    } else if (e.code() == ErrorCode::CrossCheckMismatch && entry.info.exact) {
      res.status = CheckStatus::violated;
      res.note = e.what();
    } else {
      throw;
    }
  }
  res.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return res;
}

std::vector<CheckResult> run_checks(const std::vector<std::string>& check_ids, const std::vector<CheckInput>& inputs,
                                    const CheckOptions& options, unsigned jobs) {
  for (const auto& id : check_ids) find_entry(id);
  const std::size_t total = check_ids.size() * inputs.size();
  std::vector<CheckResult> out(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      try {
        out[k] = run_check(check_ids[k / inputs.size()], inputs[k % inputs.size()], options);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, total))));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<CheckInput> standard_corpus() {
  std::vector<CheckInput> out;
  auto add = [&](const std::string& dsl) {
    const FamilySpec spec = parse_family(dsl);
    out.push_back(CheckInput::of_set(spec.label(), generate(spec)));
  };
  for (int n = 4; n <= 16; ++n) add("geo(q=2,n=" + std::to_string(n) + ")");
  for (int n = 4; n <= 32; ++n) add("ap(n=" + std::to_string(n) + ")");
  for (int n = 4; n <= 6; ++n) {
    for (int seed = 1; seed <= 3; ++seed) add("rand(n=" + std::to_string(n) + ",seed=" + std::to_string(seed) + ",max=12)");
  }
  for (int n = 8; n <= 32; n += 4) add("rand(n=" + std::to_string(n) + ",seed=1,max=10^6)");
  for (std::uint64_t p : {7, 11, 13, 31, 61, 101, 211, 401, 1009}) {
    for (auto t : nt::divisors(p - 1)) {
      if (t >= 2 && t * t <= p) out.push_back(CheckInput::of_subgroup(subgroup_context(p, t)));
    }
  }
  return out;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return 0;
  const double den = static_cast<double>(n) * sxx - sx * sx;
  return den == 0 ? 0 : (static_cast<double>(n) * sxy - sx * sy) / den;
}

namespace {

std::vector<TrendRow> slopes(const std::vector<std::string>& ids, const std::vector<double>& sizes,
                             const std::vector<CheckResult>& res, const std::string& series) {
  std::vector<TrendRow> out;
  const std::size_t n = sizes.size();
  for (std::size_t c = 0; c < ids.size(); ++c) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& r = res[c * n + i];
      if (r.status == CheckStatus::skipped) continue;
      x.push_back(sizes[i]);
      y.push_back(std::stod(r.lhs));
    }
    out.push_back({ids[c], series, x.size(), log_log_slope(x, y)});
  }
  return out;
}

}  // namespace

std::vector<TrendRow> geometric_trends(const std::vector<std::string>& check_ids, const CheckOptions& options,
                                       std::vector<CheckResult>* rows, unsigned jobs) {
  std::vector<CheckInput> inputs;
  std::vector<double> sizes;
  for (int n = 8; n <= 64; n += 8) {
    const FamilySpec spec = parse_family("geo(q=2,n=" + std::to_string(n) + ")");
    inputs.push_back(CheckInput::of_set(spec.label(), generate(spec)));
    sizes.push_back(n);
  }
  const auto res = run_checks(check_ids, inputs, options, jobs);
  if (rows) rows->insert(rows->end(), res.begin(), res.end());
  return slopes(check_ids, sizes, res, "geo(q=2,n=8..64)");
}

std::vector<TrendRow> subgroup_trends(const std::vector<std::uint64_t>& primes, const std::vector<std::string>& check_ids,
                                      const CheckOptions& options, std::vector<CheckResult>* rows, unsigned jobs) {
  std::vector<CheckInput> inputs;
  std::vector<double> sizes;
  for (auto p : primes) {
    for (auto t : nt::divisors(p - 1)) {
      if (t * t >= p) {
        inputs.push_back(CheckInput::of_subgroup(subgroup_context(p, t)));
        sizes.push_back(static_cast<double>(p));
        break;
      }
    }
  }
  const auto res = run_checks(check_ids, inputs, options, jobs);
  if (rows) rows->insert(rows->end(), res.begin(), res.end());
  return slopes(check_ids, sizes, res, "subgroups(t>=sqrt(p))");
}

std::vector<std::uint64_t> prime_ladder() {
  std::vector<std::uint64_t> out;
  for (double e = 2; e < 5; e += 0.5) {
    auto x = static_cast<std::uint64_t>(std::ceil(std::pow(10.0, e)));
    while (!nt::is_prime(x)) ++x;
    out.push_back(x);
  }
  std::uint64_t top = 100'000;
  while (!nt::is_prime(top)) --top;
  out.push_back(top);
  return out;
}

}  // namespace sumlab
