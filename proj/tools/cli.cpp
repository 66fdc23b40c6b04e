#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "sumlab/energy.hpp"
#include "sumlab/families.hpp"
#include "sumlab/harness.hpp"
#include "sumlab/setops.hpp"
#include "sumlab/spectral.hpp"
#include "sumlab/subgroups.hpp"

namespace sumlab::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string set_path;
  std::string family;
  std::string corpus;
  std::string checks = "all-exact";
  std::string profile = "desk";
  double c1 = 0.25;
  double c2 = 2;
  std::string out_path;
  std::string format;
  unsigned jobs = 1;
  bool deterministic = false;
  std::size_t max_grid = CheckOptions{}.max_grid;
  bool trend = false;
};

void add_input_flags(CLI::App* sub, Common& c) {
  sub->add_option("--set", c.set_path, "Set file ('kind:' header, one element per line)");
  sub->add_option("--family", c.family, "Family DSL, e.g. geo(q=2,n=16)");
}

void add_check_flags(CLI::App* sub, Common& c) {
  sub->add_option("--checks", c.checks, "Check ids, comma-separated, or all | all-exact | all-ratio");
  sub->add_option("--profile", c.profile, "Rectangle thresholds: paper | desk")->check(CLI::IsMember({"paper", "desk"}));
  sub->add_option("--c1", c.c1, "desk profile width constant");
  sub->add_option("--c2", c.c2, "desk profile log exponent");
  sub->add_option("--out", c.out_path, "Write the report to this path");
  sub->add_option("--format", c.format, "Report format: json | csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  sub->add_flag("--deterministic", c.deterministic, "Omit the timestamp and timings");
  sub->add_option("--max-grid", c.max_grid, "Largest grid side for the lemma_brl triple counts");
}

RectProfile profile_of(const Common& c) {
  return c.profile == "paper" ? RectProfile::paper() : RectProfile::desk(c.c1, c.c2);
}

CheckOptions options_of(const Common& c) {
  CheckOptions o;
  o.profile = profile_of(c);
  o.max_grid = c.max_grid;
  return o;
}

/// The single input named by --set or --family.
CheckInput load_input(const Common& c) {
  if (!c.set_path.empty() == !c.family.empty()) throw UsageError("give exactly one of --set FILE or --family DSL");
  if (!c.set_path.empty()) return CheckInput::of_set(c.set_path, read_set_file(c.set_path));
  const FamilySpec spec = parse_family(c.family);
  if (spec.kind == FamilyKind::subgroup_as_residues) return CheckInput::of_subgroup(subgroup_context(spec.p, spec.t));
  return CheckInput::of_set(spec.label(), generate(spec));
}

const GSet& load_set(const Common& c, std::optional<CheckInput>& holder) {
  holder = load_input(c);
  return holder->as_set();
}

std::vector<CheckInput> load_inputs(const Common& c, std::string& corpus_label) {
  if (!c.corpus.empty()) {
    if (!c.set_path.empty() || !c.family.empty()) throw UsageError("--corpus excludes --set and --family");
    if (c.corpus != "standard") throw UsageError("unknown corpus '" + c.corpus + "' (known: standard)");
    corpus_label = "standard";
    return standard_corpus();
  }
  auto in = load_input(c);
  corpus_label = in.label;
  return {std::move(in)};
}

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(10) << x;
  return s.str();
}

int exit_for(const std::vector<CheckResult>& results, bool explicit_checks) {
  bool guard = false;
  for (const auto& r : results) {
    if (r.exact_failure()) return kExactCheckFailed;
    guard = guard || r.guard;
  }
  return guard && explicit_checks ? kGuardExceeded : kOk;
}

void print_results(const std::vector<CheckResult>& results, std::ostream& out) {
  std::size_t counts[4] = {0, 0, 0, 0};
  for (const auto& r : results) {
    ++counts[static_cast<int>(r.status)];
    out << std::left << std::setw(13) << to_string(r.status) << ' ' << std::setw(17) << r.check_id << ' ' << r.input;
    if (r.status == CheckStatus::skipped) {
      out << "  (" << r.note << ")\n";
      continue;
    }
    out << "  lhs=" << r.lhs << " rhs=" << r.rhs << " ratio=" << fmt(r.ratio);
    if (!r.note.empty()) out << "  [" << r.note << "]";
    out << '\n';
  }
  out << results.size() << " results: " << counts[0] << " proved-exact, " << counts[1] << " ratio-only, " << counts[3]
      << " skipped, " << counts[2] << " violated\n";
}

void deliver(const Report& report, const Common& c, std::ostream& out) {
  const ReportFormat fmt = c.format == "csv" ? ReportFormat::csv : ReportFormat::json;
  if (!c.out_path.empty()) {
    write_report(report, fmt, c.out_path, c.deterministic);
  } else if (!c.format.empty()) {
    out << emit_report(report, fmt, c.deterministic);
  }
}

// ---------------------------------------------------------------- subcommands

int cmd_stats(const Common& c, const std::vector<int>& ks, bool sigma, std::ostream& out) {
  std::optional<CheckInput> holder;
  const GSet& a = load_set(c, holder);
  out << "input: " << holder->label << "\n";
  out << "|A| = " << a.size() << "\n";
  out << "|A+A| = " << combine_set(a, a, SetOp::add).size() << "\n";
  out << "|A-A| = " << combine_set(a, a, SetOp::sub).size() << "\n";
  if (!a.contains_zero()) {
    const auto d = doubling_stats(a);
    out << "|AA| = " << combine_set(a, a, SetOp::mul).size() << "\n";
    out << "|A/A| = " << combine_set(a, a, SetOp::div).size() << "\n";
    out << "M = |AA|/|A| = " << d.mult.str() << "\n";
  }
  out << energy_profile(a, ks, sigma).to_json() << "\n";
  return kOk;
}

int cmd_verify(const Common& c, std::ostream& out) {
  std::string label;
  const auto inputs = load_inputs(c, label);
  const auto ids = resolve_check_list(c.checks);
  const bool explicit_checks = c.checks.rfind("all", 0) != 0;
  Report report;
  report.version = library_version();
  report.corpus = label;
  report.results = run_checks(ids, inputs, options_of(c), c.jobs);
  if (c.trend) {
    std::vector<std::string> set_ratio, sub_ratio;
    for (const auto& info : list_checks()) {
      if (info.exact || std::find(ids.begin(), ids.end(), info.id) == ids.end()) continue;
      (info.input == InputKind::set ? set_ratio : sub_ratio).push_back(info.id);
    }
    if (!set_ratio.empty()) {
      auto t = geometric_trends(set_ratio, options_of(c), &report.results, c.jobs);
      report.trends.insert(report.trends.end(), t.begin(), t.end());
    }
    if (!sub_ratio.empty()) {
      auto t = subgroup_trends(prime_ladder(), sub_ratio, options_of(c), &report.results, c.jobs);
      report.trends.insert(report.trends.end(), t.begin(), t.end());
    }
  }
  if (c.out_path.empty() && c.format.empty()) {
    print_results(report.results, out);
    for (const auto& t : report.trends) {
      out << "trend " << t.check_id << " " << t.series << " points=" << t.points << " slope=" << fmt(t.slope) << "\n";
    }
  } else {
    deliver(report, c, out);
    if (!c.out_path.empty()) out << "wrote " << report.results.size() << " results to " << c.out_path << "\n";
  }
  return exit_for(report.results, explicit_checks);
}

struct SubgroupArgs {
  std::uint64_t p = 0;
  std::uint64_t t = 0;
  bool gaps = false;
  std::string convention = "circular";
  std::uint64_t window = 0;
  bool charsums = false;
  bool energy = false;
  bool modp2 = false;
  std::uint64_t ks = 0;
};

int cmd_subgroup(const SubgroupArgs& s, std::ostream& out) {
  const auto ctx = subgroup_context(s.p, s.t);
  out << "p=" << ctx.p() << " t=" << ctx.order() << " n=" << ctx.index() << " g=" << ctx.g() << "\n";
  if (ctx.order() <= 64) {
    out << "gamma={";
    for (std::size_t i = 0; i < ctx.gamma().size(); ++i) out << (i ? "," : "") << ctx.gamma()[i];
    out << "}\n";
  }
  if (s.gaps) {
    const auto g = gap_H(ctx, s.convention == "linear" ? GapConvention::linear : GapConvention::circular);
    out << "H=" << g.H << " witness_coset=" << g.witness_coset << " witness_start=" << g.witness_start
        << " H_circular=" << g.H_circular << " H_linear=" << g.H_linear << "\n";
  }
  if (s.window > 0) {
    const auto w = window_counts(ctx, s.window);
    out << "N(h=" << s.window << ")=" << w.n_gamma_h << " per_coset=";
    for (std::size_t j = 0; j < w.per_coset.size(); ++j) out << (j ? "," : "") << w.per_coset[j];
    out << "\n";
  }
  if (s.energy) out << "E=" << to_decimal(subgroup_energy(ctx)) << "\n";
  if (s.charsums) {
    const auto cs = char_sums(ctx);
    out << "fourth_moment=" << fmt(cs.fourth_moment) << " bound=" << fmt(cs.orthogonality_bound)
        << " holds=" << (cs.fourth_moment < cs.orthogonality_bound ? "yes" : "no") << "\n";
    out << "parseval=" << fmt(parseval_sum(ctx)) << " expected="
        << static_cast<double>(ctx.order()) * static_cast<double>(ctx.p() - ctx.order()) << "\n";
  }
  if (s.ks > 0) {
    const auto k = ks_criterion(ctx, s.ks);
    out << "ks max_sum=" << fmt(k.max_sum) << " half_t=" << fmt(0.5 * static_cast<double>(ctx.order()))
        << " worst_k=" << k.worst_k << " holds=" << (k.holds ? "yes" : "no") << "\n";
  }
  if (s.modp2) {
    const auto m = mod_p2_subgroup(ctx.p(), ctx.order());
    out << "T2 lifted=" << to_decimal(m.t2_lifted) << " reduced=" << to_decimal(m.t2_reduced) << "\n";
    out << "T3 lifted=" << to_decimal(m.t3_lifted) << " reduced=" << to_decimal(m.t3_reduced) << "\n";
  }
  return kOk;
}

struct ScanArgs {
  std::string spec;
  double budget = 0;
  std::string convention = "circular";
};

int cmd_scan(const ScanArgs& s, const Common& c, std::ostream& out, std::ostream& err) {
  const ScanSpec spec = parse_scan_spec(s.spec);
  std::ofstream file;
  if (!c.out_path.empty()) {
    file.open(c.out_path, std::ios::binary);
    if (!file) throw Error(ErrorCode::IoFailure, "cannot open '" + c.out_path + "' for writing");
  }
  std::ostream& sink = c.out_path.empty() ? out : file;
  const bool json = c.format == "json";
  std::optional<std::chrono::steady_clock::time_point> deadline;
  if (s.budget > 0) {
    deadline = std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(s.budget));
  }
  GapScanRow best;
  std::size_t rows = 0;
  if (json) {
    sink << "[\n";
  } else {
    sink << "p,t,H,coset,start,exponent\n" << std::flush;
  }
  const bool finished = gap_scan(
      spec,
      [&](const GapScanRow& r) {
        if (rows == 0 || r.exponent > best.exponent) best = r;
        if (json) {
          sink << (rows ? ",\n" : "") << "  {\"p\": " << r.p << ", \"t\": " << r.t << ", \"H\": " << r.gap.H
               << ", \"coset\": " << r.gap.witness_coset << ", \"start\": " << r.gap.witness_start
               << ", \"exponent\": " << fmt(r.exponent) << "}";
        } else {
          sink << r.p << ',' << r.t << ',' << r.gap.H << ',' << r.gap.witness_coset << ',' << r.gap.witness_start << ','
               << fmt(r.exponent) << '\n';
        }
        sink.flush();
        ++rows;
      },
      deadline, s.convention == "linear" ? GapConvention::linear : GapConvention::circular);
  if (json) sink << "\n]\n";
  sink.flush();
  std::ostream& summary = c.out_path.empty() ? err : out;
  summary << "rows=" << rows;
  if (rows > 0) {
    summary << " max_exponent=" << fmt(best.exponent) << " at p=" << best.p << " t=" << best.t;
  }
  summary << " reference=" << fmt(437.0 / 480) << "\n";
  if (!finished) {
    err << "scan stopped at the time budget; partial results kept\n";
    return kGuardExceeded;
  }
  return kOk;
}

int cmd_spectral(const Common& c, std::optional<std::uint64_t> delta, std::ostream& out) {
  std::optional<CheckInput> holder;
  const GSet& a = load_set(c, holder);
  const auto ch = spectral_chain_check(a, delta.value_or(a.size()));
  out << "input: " << holder->label << "\n";
  out << "delta=" << ch.delta << " |A|=" << ch.size << " E'=" << to_decimal(ch.Eprime) << "\n";
  out << "mu1=" << fmt(ch.mu1) << " bound_i=" << fmt(ch.bound_i) << " step_i=" << (ch.step_i ? "ok" : "FAIL") << "\n";
  out << "v1'Rv1=" << fmt(ch.rayleigh_R) << " sqrt(delta)*mu1=" << fmt(ch.bound_ii)
      << " step_ii=" << (ch.step_ii ? "ok" : "FAIL") << "\n";
  out << "trace=" << fmt(ch.trace) << " trace_combinatorial=" << fmt(ch.trace_combinatorial) << "\n";
  out << "E3=" << to_decimal(ch.E3) << " sigma=" << to_decimal(ch.sigma) << "\n";
  out << "lhs=" << to_decimal(ch.lhs) << " rhs=" << to_decimal(ch.rhs) << " final=" << (ch.final_ok ? "ok" : "FAIL")
      << "\n";
  return ch.holds() ? kOk : kExactCheckFailed;
}

int cmd_rect(const Common& c, std::ostream& out) {
  std::optional<CheckInput> holder;
  const GSet& a = load_set(c, holder);
  const auto cover = rect_decompose(a, profile_of(c));
  const auto audit = audit_rect_cover(cover);
  out << "input: " << holder->label << " profile=" << cover.profile << "\n";
  out << "case=" << to_string(cover.which) << " rounds=" << cover.rounds << " |current|=" << cover.current.size()
      << " delta=" << cover.delta << " |P|=" << cover.P.size() << " mass=" << cover.mass
      << " rich_mass=" << cover.rich_mass << " rectangles=" << cover.rectangles.size() << "\n";
  if (cover.which == RectCase::case1) {
    out << "q=" << cover.q << " |A'|=" << cover.Aprime.size() << " |A''|=" << cover.Adoubleprime.size()
        << " |A_i|=" << cover.base_class_size << " mirrored=" << (cover.mirrored ? "yes" : "no") << "\n";
  }
  out << "energy_ledger=";
  for (std::size_t i = 0; i < cover.energy_ledger.size(); ++i) out << (i ? "," : "") << to_decimal(cover.energy_ledger[i]);
  out << "\n";
  out << "audit partition=" << audit.partition << " half_mass=" << audit.half_mass << " pointwise_q=" << audit.pointwise_q
      << " bookkeeping=" << audit.bookkeeping << "\n";
  return audit.ok() ? kOk : kExactCheckFailed;
}

int dispatch(CLI::App& app, const Common& c, const std::vector<int>& ks, bool sigma, const SubgroupArgs& sg,
             const ScanArgs& scan, std::optional<std::uint64_t> delta, std::ostream& out, std::ostream& err) {
  if (app.got_subcommand("stats")) return cmd_stats(c, ks, sigma, out);
  if (app.got_subcommand("verify")) return cmd_verify(c, out);
  if (app.got_subcommand("report")) return cmd_verify(c, out);
  if (app.got_subcommand("subgroup")) return cmd_subgroup(sg, out);
  if (app.got_subcommand("scan")) return cmd_scan(scan, c, out, err);
  if (app.got_subcommand("spectral")) return cmd_spectral(c, delta, out);
  if (app.got_subcommand("rect")) return cmd_rect(c, out);
  throw UsageError("no subcommand");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact sum-product statistics and theorem checks on finite sets"};
  app.name("sumlab");
  app.require_subcommand(1);

  Common c;
  std::vector<int> ks;
  bool sigma = false;
  SubgroupArgs sg;
  ScanArgs scan;
  std::uint64_t delta_value = 0;

  auto* stats = app.add_subcommand("stats", "Sizes, energies and moment sums of one set");
  add_input_flags(stats, c);
  stats->add_option("--k", ks, "T_k orders to include")->delimiter(',');
  stats->add_flag("--sigma", sigma, "Include the pair sum Σ");

  auto* verify = app.add_subcommand("verify", "Run theorem checks on a set, a family or the standard corpus");
  add_input_flags(verify, c);
  verify->add_option("--corpus", c.corpus, "Named corpus: standard");
  add_check_flags(verify, c);
  verify->add_flag("--trend", c.trend, "Add log-log slopes for the requested ratio checks");

  auto* report = app.add_subcommand("report", "Full report over the standard corpus with trend slopes");
  add_input_flags(report, c);
  report->add_option("--corpus", c.corpus, "Named corpus: standard");
  add_check_flags(report, c);

  auto* subgroup = app.add_subcommand("subgroup", "Statistics of the order-t subgroup of F_p^×");
  subgroup->add_option("--p", sg.p, "Prime modulus")->required();
  subgroup->add_option("--t", sg.t, "Subgroup order, dividing p-1")->required();
  subgroup->add_flag("--gaps", sg.gaps, "Longest run avoiding a coset, H_p(t)");
  subgroup->add_option("--convention", sg.convention, "Gap convention")->check(CLI::IsMember({"circular", "linear"}));
  subgroup->add_option("--window", sg.window, "Window counts N_j(h) for this h");
  subgroup->add_flag("--charsums", sg.charsums, "Character sums: fourth moment and Parseval");
  subgroup->add_flag("--energy", sg.energy, "Additive energy of the subgroup");
  subgroup->add_flag("--modp2", sg.modp2, "T_2, T_3 of the mod-p² lift against mod p");
  subgroup->add_option("--ks", sg.ks, "Evaluate the t/2 criterion at this h");

  auto* scan_cmd = app.add_subcommand("scan", "Exact gap scan over a (p, t) grid");
  scan_cmd->add_option("--spec", scan.spec, "e.g. \"p in [3,10000], t | p-1, t in [sqrt(p), p-1]\"")->required();
  scan_cmd->add_option("--budget", scan.budget, "Time budget in seconds (0 = none)");
  scan_cmd->add_option("--convention", scan.convention, "Gap convention")->check(CLI::IsMember({"circular", "linear"}));
  scan_cmd->add_option("--out", c.out_path, "Write rows to this path");
  scan_cmd->add_option("--format", c.format, "Row format: csv | json")->check(CLI::IsMember({"json", "csv"}));

  auto* spectral = app.add_subcommand("spectral", "Spectral chain for one set");
  add_input_flags(spectral, c);
  auto* delta_opt = spectral->add_option("--delta", delta_value, "Truncation level Δ (default |A|)");

  auto* rect = app.add_subcommand("rect", "Rectangle decomposition of the popular-difference point set");
  add_input_flags(rect, c);
  rect->add_option("--profile", c.profile, "Thresholds: paper | desk")->check(CLI::IsMember({"paper", "desk"}));
  rect->add_option("--c1", c.c1, "desk profile width constant");
  rect->add_option("--c2", c.c2, "desk profile log exponent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (app.got_subcommand("report")) {
      if (c.corpus.empty() && c.set_path.empty() && c.family.empty()) c.corpus = "standard";
      if (c.checks == "all-exact" && report->count("--checks") == 0) c.checks = "all";
      c.trend = true;
    }
    std::optional<std::uint64_t> delta;
    if (delta_opt->count() > 0) delta = delta_value;
    return dispatch(app, c, ks, sigma, sg, scan, delta, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_guard_error(e.code()) ? kGuardExceeded : kUsage;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"sumlab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace sumlab::cli
