#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "sumlab/energy.hpp"
#include "sumlab/families.hpp"
#include "sumlab/harness.hpp"
#include "test_util.hpp"

using namespace sumlab;
using testutil::code_of;
using testutil::ints;

namespace {

CheckInput set_input(const std::string& dsl) { return CheckInput::of_set(dsl, generate(dsl)); }

std::vector<CheckResult> without_timings(std::vector<CheckResult> v) {
  for (auto& r : v) r.elapsed_ms = 0;
  return v;
}

}  // namespace

TEST(Registry, IdsAreUniqueAndResolve) {
  const auto& all = list_checks();
  std::set<std::string> ids;
  std::size_t exact = 0;
  for (const auto& c : all) {
    EXPECT_TRUE(ids.insert(c.id).second) << c.id;
    exact += c.exact ? 1 : 0;
  }
  EXPECT_EQ(resolve_check_list("all").size(), all.size());
  EXPECT_EQ(resolve_check_list("all-exact").size(), exact);
  EXPECT_EQ(resolve_check_list("all-ratio").size(), all.size() - exact);
  EXPECT_EQ(resolve_check_list("elekes,lemma_key"), (std::vector<std::string>{"elekes", "lemma_key"}));
  EXPECT_EQ(code_of([] { resolve_check_list("elekes,nope"); }), ErrorCode::UnknownCheck);
  EXPECT_EQ(code_of([] { run_check("nope", set_input("ap(n=4)")); }), ErrorCode::UnknownCheck);
  for (const char* id : {"e3_identity", "cor1_lower", "lemma_key", "lemma_brl", "lemma_spectral", "cs_difference",
                         "cs_sum", "psd_witness", "trace_routes", "spectral_chain", "window_dual", "orthogonality",
                         "parseval", "mod_p2", "rect_structure", "elekes", "sh", "main_thm", "energy_thm", "sum_est",
                         "cor11", "sig_est", "thm17", "thm19", "thm20"}) {
    EXPECT_TRUE(ids.count(id)) << id;
  }
}

TEST(Checks, ElekesWorkedValue) {
  const auto r = run_check("elekes", CheckInput::of_set("{1,2,3}", ints({1, 2, 3})));
  EXPECT_EQ(r.lhs, "900");
  EXPECT_EQ(r.rhs, "243");
  EXPECT_NEAR(r.ratio, 900.0 / 243, 1e-12);
  EXPECT_EQ(r.status, CheckStatus::ratio_only);
}

TEST(Checks, KeyCountWorkedValue) {
  const auto r = run_check("lemma_key", CheckInput::of_set("{1,2,3}", ints({1, 2, 3})));
  EXPECT_EQ(r.status, CheckStatus::proved_exact);
  EXPECT_EQ(r.lhs, "3420");  // 4 · 45 · 19
  EXPECT_EQ(r.rhs, "729");
  EXPECT_NE(r.note.find("count=19"), std::string::npos) << r.note;
}

TEST(Checks, SpectralChainWorkedValue) {
  const auto r = run_check("spectral_chain", CheckInput::of_set("{1,2,3}", ints({1, 2, 3})));
  EXPECT_EQ(r.status, CheckStatus::proved_exact);
}

TEST(Checks, ExactChecksHoldOnSmallFamilies) {
  std::vector<CheckInput> inputs;
  for (const char* dsl : {"geo(q=2,n=6)", "ap(n=9)", "rand(n=5,seed=2,max=12)", "rand(n=12,seed=4)"}) {
    inputs.push_back(set_input(dsl));
  }
  inputs.push_back(CheckInput::of_subgroup(subgroup_context(61, 6)));
  inputs.push_back(CheckInput::of_subgroup(subgroup_context(101, 10)));
  const auto res = run_checks(resolve_check_list("all-exact"), inputs);
  for (const auto& r : res) {
    EXPECT_NE(r.status, CheckStatus::violated) << r.check_id << " " << r.input << " " << r.note;
    EXPECT_NE(r.status, CheckStatus::ratio_only);
  }
}

TEST(Checks, RatioChecksAreFinitePositive) {
  std::vector<CheckInput> inputs{set_input("geo(q=2,n=10)"), set_input("rand(n=16,seed=1)"),
                                 CheckInput::of_subgroup(subgroup_context(401, 25)),
                                 CheckInput::of_subgroup(subgroup_context(1009, 36))};
  const auto res = run_checks(resolve_check_list("all-ratio"), inputs);
  std::size_t recorded = 0;
  for (const auto& r : res) {
    if (r.status == CheckStatus::skipped) continue;
    ++recorded;
    EXPECT_EQ(r.status, CheckStatus::ratio_only);
    EXPECT_TRUE(std::isfinite(r.ratio) && r.ratio > 0) << r.check_id << " " << r.input << " " << r.ratio;
  }
  EXPECT_GT(recorded, 20u);
}

TEST(Checks, DomainSkips) {
  const auto sub = run_check("parseval", set_input("ap(n=5)"));
  EXPECT_EQ(sub.status, CheckStatus::skipped);
  EXPECT_FALSE(sub.guard);
  const auto zero = run_check("elekes", CheckInput::of_set("{0,1,2}", ints({0, 1, 2})));
  EXPECT_EQ(zero.status, CheckStatus::skipped);
  EXPECT_FALSE(zero.guard);
  CheckOptions tight;
  tight.max_grid = 5;
  const auto guarded = run_check("lemma_brl", set_input("ap(n=8)"), tight);
  EXPECT_EQ(guarded.status, CheckStatus::skipped);
  EXPECT_TRUE(guarded.guard);
}

TEST(RunChecks, OrderAndCountIndependentOfJobs) {
  std::vector<CheckInput> inputs{set_input("ap(n=6)"), set_input("geo(q=2,n=7)"), set_input("rand(n=9,seed=2)")};
  const std::vector<std::string> ids{"elekes", "e3_identity", "holder", "sh"};
  const auto one = run_checks(ids, inputs, {}, 1);
  const auto many = run_checks(ids, inputs, {}, 4);
  ASSERT_EQ(one.size(), ids.size() * inputs.size());
  EXPECT_EQ(without_timings(one), without_timings(many));
  EXPECT_EQ(one[0].check_id, "elekes");
  EXPECT_EQ(one[0].input, "ap(n=6)");
  EXPECT_EQ(one[1].input, "geo(q=2,n=7)");
  EXPECT_EQ(one[3].check_id, "e3_identity");
}

TEST(Corpus, StandardShape) {
  const auto corpus = standard_corpus();
  std::size_t sets = 0, subgroups = 0;
  for (const auto& in : corpus) {
    if (in.subgroup) {
      ++subgroups;
      EXPECT_LE(in.subgroup->order() * in.subgroup->order(), in.subgroup->p());
      EXPECT_LE(in.subgroup->p(), 1009u);
    } else {
      ++sets;
      EXPECT_LE(in.set->size(), 32u);
    }
  }
  EXPECT_EQ(sets, 13u + 29u + 9u + 7u);
  EXPECT_GT(subgroups, 10u);
}

TEST(Trends, SlopesOfKnownPowers) {
  const std::vector<double> x{1, 2, 4, 8}, y{3, 12, 48, 192};
  EXPECT_NEAR(log_log_slope(x, y), 2, 1e-12);
  const auto rows = geometric_trends({"elekes"});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].points, 8u);
  // |A+A| ~ n²/2 and |AA| = 2n - 1 on geometric progressions, so the
  // slope of |A+A|²|AA|² tends to 6.
  EXPECT_GT(rows[0].slope, 5);
  EXPECT_LT(rows[0].slope, 6.5);
}

TEST(Trends, PrimeLadder) {
  const auto ladder = prime_ladder();
  ASSERT_EQ(ladder.size(), 7u);
  EXPECT_EQ(ladder.front(), 101u);
  EXPECT_EQ(ladder.back(), 99991u);
}

TEST(Rect, DeskProfileOnInterval) {
  const GSet a = generate("ap(n=64)");
  const auto cover = rect_decompose(a, RectProfile::desk());
  const auto audit = audit_rect_cover(cover);
  EXPECT_TRUE(audit.partition);
  EXPECT_TRUE(audit.half_mass);
  EXPECT_TRUE(audit.pointwise_q);
  EXPECT_TRUE(audit.bookkeeping);
  EXPECT_EQ(cover.which, RectCase::case1);
  EXPECT_LE(cover.q * cover.Aprime.size(), 2 * cover.mass);
  EXPECT_TRUE(cover.Aprime.is_subset_of(cover.current));
}

TEST(Rect, AuditsHoldOnCorpusSets) {
  for (const char* dsl : {"geo(q=2,n=12)", "ap(n=20)", "rand(n=24,seed=1)", "rand(n=6,seed=3,max=12)"}) {
    for (const auto& prof : {RectProfile::desk(), RectProfile::paper()}) {
      const auto cover = rect_decompose(generate(dsl), prof);
      EXPECT_TRUE(audit_rect_cover(cover).ok()) << dsl << " " << prof.name;
      EXPECT_EQ(cover.profile, prof.name);
      EXPECT_FALSE(cover.energy_ledger.empty());
    }
  }
  EXPECT_EQ(code_of([] { rect_decompose(ints({1, 2, 3})); }), ErrorCode::DegenerateInput);
}

TEST(SumConstruction, FibreIdentityOnSmallSet) {
  const auto s = sum_construction_stats(ints({1, 2, 4}));
  BigInt fibres = 0;
  for (const auto& [_, c] : s.lambda_profile) fibres += static_cast<unsigned long>(c);
  EXPECT_EQ(fibres, BigInt(static_cast<unsigned long>(s.A.size() * s.Aprime.size())));
  EXPECT_TRUE(s.fibre_identity);
  EXPECT_TRUE(s.cauchy_schwarz);
  EXPECT_TRUE(s.lines_ok);
  EXPECT_EQ(s.ratio_set_size, 5u);
}

TEST(SumConstruction, GeometricEight) {
  const auto s = sum_construction_stats(generate("geo(q=2,n=8)"));
  EXPECT_TRUE(s.fibre_identity);
  EXPECT_TRUE(s.cauchy_schwarz);
  EXPECT_TRUE(s.lines_ok);
  BigInt sq = 0;
  for (const auto& [_, c] : s.lambda_profile) sq += BigInt(static_cast<unsigned long>(c * c));
  EXPECT_EQ(sq, s.e_times);
}

TEST(Report, EmptyReportHasHeaders) {
  Report r;
  r.version = library_version();
  r.corpus = "none";
  const std::string csv = emit_report(r, ReportFormat::csv, true);
  EXPECT_EQ(csv, "check_id,input,lhs,rhs,ratio,pass,ms\n");
  const std::string json = emit_report(r, ReportFormat::json, true);
  EXPECT_NE(json.find("\"results\": []"), std::string::npos) << json;
  EXPECT_EQ(parse_report_json(json), r);
}

TEST(Report, RoundTripAndPassField) {
  Report r;
  r.version = library_version();
  r.corpus = "mixed";
  r.results = run_checks({"elekes", "lemma_key", "parseval"},
                         {CheckInput::of_set("{1,2,3}", ints({1, 2, 3})),
                          CheckInput::of_subgroup(subgroup_context(7, 3))});
  r.trends = {{"elekes", "geo", 3, 1.5}};
  r.extra["note"] = "x";
  for (auto& res : r.results) res.elapsed_ms = 0;
  const std::string json = emit_report(r, ReportFormat::json, true);
  EXPECT_EQ(parse_report_json(json), r);
  EXPECT_EQ(json.find("timestamp"), std::string::npos);
  EXPECT_NE(json.find("\"pass\": \"proved-exact\""), std::string::npos) << json;
  EXPECT_NE(json.find("\"pass\": \"ratio-only\""), std::string::npos);
  EXPECT_NE(json.find("\"pass\": \"skipped\""), std::string::npos);
  EXPECT_EQ(emit_report(r, ReportFormat::json, true), json);
  EXPECT_NE(emit_report(r, ReportFormat::json, false).find("timestamp"), std::string::npos);

  const std::string csv = emit_report(r, ReportFormat::csv, true);
  EXPECT_NE(csv.find("elekes,\"{1,2,3}\",900,243"), std::string::npos) << csv;
  EXPECT_EQ(code_of([] { parse_report_json("{not json"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([&] { write_report(r, ReportFormat::json, "/nonexistent/dir/r.json"); }),
            ErrorCode::IoFailure);
}

TEST(Report, NonFiniteRatioSurvives) {
  Report r;
  r.version = "v";
  r.corpus = "c";
  CheckResult x;
  x.check_id = "elekes";
  x.input = "i";
  x.lhs = "1";
  x.rhs = "0";
  x.ratio = std::numeric_limits<double>::infinity();
  x.status = CheckStatus::ratio_only;
  r.results.push_back(x);
  EXPECT_EQ(parse_report_json(emit_report(r, ReportFormat::json, true)), r);
}
