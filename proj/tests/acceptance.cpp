// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "oracles.hpp"
#include "sumlab/energy.hpp"
#include "sumlab/families.hpp"
#include "sumlab/harness.hpp"
#include "sumlab/incidence.hpp"
#include "sumlab/numtheory.hpp"
#include "sumlab/spectral.hpp"
#include "sumlab/subgroups.hpp"

using namespace sumlab;
using i64 = long long;

namespace {

/// Collects failures for one criterion.
struct Probe {
  std::size_t cases = 0;
  std::vector<std::string> failures;
  std::vector<std::string> info;

  void expect(bool ok, const std::string& what) {
    ++cases;
    if (!ok && failures.size() < 20) failures.push_back(what);
    if (!ok && failures.size() == 20) failures.push_back("...");
  }
  template <class A, class B>
  void expect_eq(const A& got, const B& want, const std::string& what) {
    std::ostringstream s;
    s << what << ": got " << got << ", want " << want;
    expect(got == want, s.str());
  }
};

BigInt big(i64 v) { return BigInt(static_cast<long>(v)); }

std::vector<CheckInput> corpus_sets(const std::vector<CheckInput>& corpus) {
  std::vector<CheckInput> out;
  for (const auto& in : corpus)
    if (!in.subgroup) out.push_back(in);
  return out;
}

std::vector<CheckInput> corpus_subgroups(const std::vector<CheckInput>& corpus) {
  std::vector<CheckInput> out;
  for (const auto& in : corpus)
    if (in.subgroup) out.push_back(in);
  return out;
}

/// Tallies a batch of check results; violated results are failures.
void tally(Probe& pr, const std::vector<CheckResult>& results, bool allow_guard_skips) {
  std::map<std::string, std::array<std::size_t, 3>> by_check;  // proved, skipped, violated
  for (const auto& r : results) {
    auto& c = by_check[r.check_id];
    if (r.status == CheckStatus::violated) {
      ++c[2];
      pr.expect(false, r.check_id + " violated on " + r.input + " lhs=" + r.lhs + " rhs=" + r.rhs);
    } else if (r.status == CheckStatus::skipped) {
      ++c[1];
      pr.expect(allow_guard_skips && r.guard, r.check_id + " skipped on " + r.input + ": " + r.note);
    } else {
      ++c[0];
      pr.expect(true, "");
    }
  }
  for (const auto& [id, c] : by_check) {
    pr.info.push_back(id + ": " + std::to_string(c[0]) + " proved, " + std::to_string(c[1]) + " guard-skipped, " +
                      std::to_string(c[2]) + " violated");
  }
}

// ------------------------------------------------------------------ criteria

void c1_e3_identity(Probe& pr, const std::vector<CheckInput>& corpus) {
  std::size_t used = 0;
  const oracle::IntRing ring;
  for (const auto& in : corpus_sets(corpus)) {
    const GSet& a = *in.set;
    if (a.size() > 30 || used == 20) continue;
    ++used;
    const auto r = e3_routes(a);
    pr.expect(r.agree(), "routes disagree on " + in.label);
    pr.expect_eq(r.moment, big(oracle::e3_tuples(ring, oracle::scaled(a))), "E3 vs 6-tuple count on " + in.label);
  }
  pr.expect_eq(used, std::size_t{20}, "sets used");
}

void c2_window_dual(Probe& pr) {
  for (std::uint64_t p : {7ULL, 11ULL, 13ULL, 101ULL, 1009ULL}) {
    for (std::uint64_t t : nt::divisors(p - 1)) {
      const auto ctx = subgroup_context(p, t);
      const std::vector<i64> g(ctx.gamma().begin(), ctx.gamma().end());
      for (std::uint64_t h : {std::uint64_t{1}, std::uint64_t{2}, p / 10}) {
        if (h == 0) continue;
        const auto w = window_counts(ctx, h);
        std::uint64_t sq = 0;
        for (auto n : w.per_coset) sq += n * n;
        const std::string tag = "(" + std::to_string(p) + "," + std::to_string(t) + "," + std::to_string(h) + ")";
        pr.expect_eq(sq, w.n_gamma_h, "Σ N_j² vs N at " + tag);
        pr.expect_eq(static_cast<i64>(w.n_gamma_h), oracle::window_congruences(static_cast<i64>(p), g, static_cast<i64>(h)),
                     "N vs congruence count at " + tag);
      }
    }
  }
  pr.expect_eq(window_counts(subgroup_context(7, 3), 2).n_gamma_h, std::uint64_t{8}, "N at (7,3,2)");
}

template <class Ring>
void compare_with_oracle(Probe& pr, const Ring& ring, const GSet& a) {
  const auto v = oracle::scaled(a);
  const std::string s = a.str();
  pr.expect_eq(energy(a), big(oracle::energy(ring, v)), "E " + s);
  pr.expect_eq(moment_energy(a, 3), big(oracle::e3_tuples(ring, v)), "E3 " + s);
  pr.expect_eq(t_k(a, 3), big(oracle::t3(ring, v)), "T3 " + s);
  pr.expect_eq(sigma_sum(a), big(oracle::sigma(ring, v)), "Σ " + s);
  pr.expect_eq(collinear_triples(a), big(oracle::collinear_distinct(ring, v, v)), "𝒯 " + s);
}

void c3_oracles(Probe& pr) {
  const std::vector<std::string> universe{"-3", "-1", "1/3", "1/2", "1", "2", "3", "5", "7/2"};
  const std::size_t u = universe.size();
  std::size_t sets = 0;
  for (std::uint32_t mask = 1; mask < (1U << u); ++mask) {
    if (__builtin_popcount(mask) > 5) continue;
    std::vector<GroundElement> el;
    for (std::size_t i = 0; i < u; ++i)
      if (mask >> i & 1U) el.emplace_back(Rational::parse(universe[i]));
    compare_with_oracle(pr, oracle::IntRing{}, GSet::from(el, Kind::rational()));
    ++sets;
  }
  for (std::uint64_t p : {7ULL, 11ULL}) {
    for (std::uint32_t mask = 1; mask < (1U << p); ++mask) {
      if (__builtin_popcount(mask) > 5) continue;
      std::vector<std::uint64_t> v;
      for (std::uint64_t i = 0; i < p; ++i)
        if (mask >> i & 1U) v.push_back(i);
      compare_with_oracle(pr, oracle::ModRing{static_cast<i64>(p)}, GSet::of_residues(std::span<const std::uint64_t>(v), p));
      ++sets;
    }
  }
  for (std::uint64_t p : {7ULL, 11ULL, 13ULL, 31ULL, 61ULL, 101ULL, 211ULL, 1009ULL}) {
    for (std::uint64_t t : nt::divisors(p - 1)) {
      if (t > 5) continue;
      const auto ctx = subgroup_context(p, t);
      compare_with_oracle(pr, oracle::ModRing{static_cast<i64>(p)}, ctx.as_gset());
      pr.expect_eq(subgroup_collinear_triples(ctx), collinear_triples(ctx.as_gset()), "subgroup 𝒯 route");
      pr.expect_eq(subgroup_energy(ctx), energy(ctx.as_gset()), "subgroup E route");
      ++sets;
    }
  }
  const GSet a = GSet::of_integers(std::vector<long>{1, 2, 3});
  pr.expect_eq(energy(a), 19, "E({1,2,3})");
  pr.expect_eq(moment_energy(a, 3), 45, "E3({1,2,3})");
  pr.expect_eq(t_k(a, 3), 141, "T3({1,2,3})");
  pr.expect_eq(sigma_sum(a), 319, "Σ({1,2,3})");
  pr.expect_eq(collinear_triples(a), 48, "𝒯({1,2,3})");
  pr.info.push_back(std::to_string(sets) + " sets compared");
}

void c4_exact_inequalities(Probe& pr, const std::vector<CheckInput>& corpus) {
  const std::vector<std::string> ids{"cor1_lower", "lemma_key", "lemma_brl", "lemma_spectral", "cs_difference", "cs_sum"};
  // lemma_brl runs where every grid of its bound fits under max_grid; larger
  // inputs are guard-skipped by design.
  tally(pr, run_checks(ids, corpus), true);
}

void c5_mod_p2(Probe& pr) {
  for (auto [p, t] : {std::pair{3ULL, 2ULL}, {5ULL, 4ULL}, {7ULL, 3ULL}, {11ULL, 5ULL}}) {
    const auto m = mod_p2_subgroup(p, t);
    const std::string tag = "(" + std::to_string(p) + "," + std::to_string(t) + ")";
    pr.expect(m.t3_lifted <= m.t3_reduced, "T3 lifted > reduced at " + tag);
    const i64 pp = static_cast<i64>(p * p);
    const auto g2 = oracle::roots_of_unity(pp, static_cast<i64>(t));
    pr.expect_eq(m.t3_lifted, big(oracle::t3(oracle::ModRing{pp}, g2)), "lifted T3 oracle " + tag);
    std::vector<i64> red;
    for (auto x : g2) red.push_back(x % static_cast<i64>(p));
    pr.expect_eq(m.t3_reduced, big(oracle::t3(oracle::ModRing{static_cast<i64>(p)}, red)), "reduced T3 oracle " + tag);
    pr.info.push_back(tag + ": " + to_decimal(m.t3_lifted) + " <= " + to_decimal(m.t3_reduced));
  }
  const auto w = mod_p2_subgroup(3, 2);
  pr.expect_eq(w.t3_lifted, 20, "T3 lifted (3,2)");
  pr.expect_eq(w.t3_reduced, 22, "T3 reduced (3,2)");
}

void c6_numerical(Probe& pr, const std::vector<CheckInput>& corpus) {
  std::vector<CheckInput> small;
  for (const auto& in : corpus)
    if (in.as_set().size() <= 64) small.push_back(in);
  tally(pr, run_checks({"psd_witness", "trace_routes", "spectral_chain"}, small), false);
  const auto c = spectral_chain_check(GSet::of_integers(std::vector<long>{1, 2, 3}), 3);
  std::ostringstream s;
  s << std::setprecision(7) << "worked mu1=" << c.mu1 << " >= " << c.bound_i;
  pr.info.push_back(s.str());
  pr.expect(std::abs(c.mu1 - 3.679) < 5e-4 && std::abs(c.bound_i - 3.657) < 5e-4 && c.mu1 >= c.bound_i,
            s.str());
}

void c7_characters(Probe& pr, const std::vector<CheckInput>& corpus) {
  tally(pr, run_checks({"orthogonality", "parseval"}, corpus_subgroups(corpus)), false);
  const auto cs = char_sums(subgroup_context(7, 3));
  pr.expect(std::abs(cs.fourth_moment - 8) < 1e-9 && std::abs(cs.orthogonality_bound - 35) < 1e-9,
            "worked (7,3) fourth moment 8 < 35");
}

void c8_ratio_trends(Probe& pr, const std::vector<CheckInput>& corpus) {
  std::vector<std::string> ratio_ids, exact_ids, set_ratio, sub_ratio;
  for (const auto& c : list_checks()) {
    (c.exact ? exact_ids : ratio_ids).push_back(c.id);
    if (!c.exact) (c.input == InputKind::set ? set_ratio : sub_ratio).push_back(c.id);
  }
  std::size_t recorded = 0;
  for (const auto& r : run_checks(ratio_ids, corpus)) {
    if (r.status == CheckStatus::skipped) continue;
    ++recorded;
    pr.expect(std::isfinite(r.ratio) && r.ratio > 0, r.check_id + " ratio " + std::to_string(r.ratio) + " on " + r.input);
  }
  pr.expect(recorded > 0, "no ratio rows");
  for (const auto& r : run_checks(exact_ids, corpus)) {
    pr.expect(!r.exact_failure(), r.check_id + " violated on " + r.input);
  }
  std::vector<CheckResult> trend_rows;
  auto trends = geometric_trends(set_ratio, {}, &trend_rows);
  const auto sub = subgroup_trends(prime_ladder(), sub_ratio, {}, &trend_rows);
  trends.insert(trends.end(), sub.begin(), sub.end());
  for (const auto& r : trend_rows) {
    if (r.status == CheckStatus::skipped) continue;
    pr.expect(std::isfinite(r.ratio) && r.ratio > 0, r.check_id + " trend ratio on " + r.input);
  }
  for (const auto& t : trends) {
    pr.expect(std::isfinite(t.slope) && t.points >= 2, "trend " + t.check_id + " " + t.series);
    std::ostringstream s;
    s << std::setprecision(4) << t.check_id << " " << t.series << " slope=" << t.slope << " (" << t.points << " pts)";
    pr.info.push_back(s.str());
  }
  pr.info.insert(pr.info.begin(), std::to_string(recorded) + " ratio rows, " + std::to_string(trends.size()) + " trends");
}

void c9_gap_scan(Probe& pr) {
  const auto spec = parse_scan_spec("p in [3, 10000], t | p-1, t in [sqrt(p), p-1]");
  std::size_t rows = 0;
  GapScanRow best;
  const auto start = std::chrono::steady_clock::now();
  const bool done = gap_scan(
      spec,
      [&](const GapScanRow& r) {
        if (rows++ == 0 || r.exponent > best.exponent) best = r;
      },
      start + std::chrono::minutes(10));
  pr.expect(done, "scan did not finish within 10 minutes");
  std::ostringstream s;
  s << rows << " rows, max log H/log p = " << std::setprecision(6) << best.exponent << " at p=" << best.p
    << " t=" << best.t << " (reference 437/480 = " << 437.0 / 480 << ")";
  pr.info.push_back(s.str());
}

void c10_rect(Probe& pr, const std::vector<CheckInput>& corpus) {
  for (const auto& in : corpus) {
    const GSet& a = in.as_set();
    if (a.size() < 4) continue;
    for (const auto& prof : {RectProfile::desk(), RectProfile::paper()}) {
      const auto cover = rect_decompose(a, prof);
      const auto audit = audit_rect_cover(cover);
      const std::string tag = in.label + " " + prof.name;
      pr.expect(audit.partition, "partition " + tag);
      pr.expect(audit.half_mass, "cover mass >= half " + tag);
      pr.expect(audit.bookkeeping, "q|A_i| <= 2|P| " + tag);
      if (cover.which == RectCase::case1) pr.expect(audit.pointwise_q, "pointwise q " + tag);
    }
  }
}

}  // namespace

int main() {
  const auto corpus = standard_corpus();
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<void(Probe&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "E3 triple identity", 60, [&](Probe& p) { c1_e3_identity(p, corpus); }},
      {2, "window counts by two routes", 60, c2_window_dual},
      {3, "oracle equivalence of E, E3, T3, Σ, 𝒯", 60, c3_oracles},
      {4, "exact inequalities on the corpus", 300, [&](Probe& p) { c4_exact_inequalities(p, corpus); }},
      {5, "mod p² monotonicity", 300, c5_mod_p2},
      {6, "PSD witness, trace routes, spectral chain", 0, [&](Probe& p) { c6_numerical(p, corpus); }},
      {7, "orthogonality and Parseval", 0, [&](Probe& p) { c7_characters(p, corpus); }},
      {8, "ratio tables and trends", 0, [&](Probe& p) { c8_ratio_trends(p, corpus); }},
      {9, "gap scan p <= 10^4", 600, c9_gap_scan},
      {10, "rectangle decomposition audits", 0, [&](Probe& p) { c10_rect(p, corpus); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Probe pr;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(pr);
    } catch (const std::exception& e) {
      pr.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs > c.budget_s) pr.expect(false, "over the time budget");
    const bool ok = pr.failures.empty();
    failed += ok ? 0 : 1;
    std::cout << (ok ? "PASS" : "FAIL") << " " << std::setw(2) << c.id << "  " << c.name << "  (" << pr.cases
              << " cases, " << std::fixed << std::setprecision(1) << secs << " s)" << std::defaultfloat << "\n";
    for (const auto& line : pr.info) std::cout << "        " << line << "\n";
    for (const auto& line : pr.failures) std::cout << "     !  " << line << "\n";
    std::cout.flush();
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
