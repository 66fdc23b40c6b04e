#pragma once

// Theorem-by-theorem verification on concrete sets and subgroups, the
// rectangle decomposition, and report serialization.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sumlab/ground.hpp"
#include "sumlab/setops.hpp"
#include "sumlab/subgroups.hpp"

namespace sumlab {

// ---------------------------------------------------------------- checks

enum class CheckStatus {
  proved_exact,  // exact statement, evaluated and holding
  ratio_only,    // asymptotic statement, ratio recorded
  violated,      // exact statement that failed
  skipped,       // input outside the check's domain or a size guard hit
};
const char* to_string(CheckStatus s);
CheckStatus parse_check_status(const std::string& s);

struct CheckResult {
  std::string check_id;
  std::string input;  // input label
  std::string lhs;    // decimal; exact integers where the quantity is one
  std::string rhs;
  double ratio = 0;   // lhs / rhs; 0 when skipped
  CheckStatus status = CheckStatus::skipped;
  double elapsed_ms = 0;
  std::string note;
  bool guard = false;  // skipped because a size guard fired

  bool exact_failure() const { return status == CheckStatus::violated; }
  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

/// A set, or a subgroup (which set-level checks read through as_gset()).
struct CheckInput {
  std::string label;
  std::optional<GSet> set;
  std::optional<SubgroupCtx> subgroup;

  static CheckInput of_set(std::string label, GSet a);
  static CheckInput of_subgroup(SubgroupCtx ctx);
  const GSet& as_set() const;
};

struct RectProfile {
  std::string name = "desk";
  double c1 = 0.25;
  double c2 = 2;
  static RectProfile paper() { return {"paper", 1.0, 10.0}; }
  static RectProfile desk(double c1 = 0.25, double c2 = 2) { return {"desk", c1, c2}; }
};

struct CheckOptions {
  RectProfile profile = RectProfile::desk();
  std::size_t max_grid = 120;      // largest |X| for the 𝒯(X) factors in lemma_brl
  std::size_t psd_vectors = 1000;
  std::uint64_t seed = 1;
  std::size_t spectral_max = 64;   // largest |A| for the dense-matrix checks
};

enum class InputKind { set, subgroup };

struct CheckInfo {
  std::string id;
  bool exact = false;
  InputKind input = InputKind::set;
  std::string summary;
};

/// Registered checks in registry order.
const std::vector<CheckInfo>& list_checks();

/// "all", "all-exact", "all-ratio" or a comma-separated id list.
/// Throws UnknownCheck.
std::vector<std::string> resolve_check_list(const std::string& spec);

/// Throws UnknownCheck.  Guard and domain failures become skipped results;
/// BadSpec on a mismatched input kind propagates.
CheckResult run_check(const std::string& check_id, const CheckInput& input, const CheckOptions& options = {});

/// Every (check, input) pair, check-major, results in request order
/// whatever the completion order.
std::vector<CheckResult> run_checks(const std::vector<std::string>& check_ids, const std::vector<CheckInput>& inputs,
                                    const CheckOptions& options = {}, unsigned jobs = 1);

// ---------------------------------------------------------------- corpus

/// The standard corpus: geometric n = 4..16, arithmetic n = 4..32, random
/// n = 4..6 over [1,12] and n up to 32 over [1,10^6], subgroups with
/// p <= 1009 and 2 <= t <= sqrt(p).
std::vector<CheckInput> standard_corpus();

/// Least-squares slope of log y against log x over the positive pairs.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

struct TrendRow {
  std::string check_id;
  std::string series;
  std::size_t points = 0;
  double slope = 0;  // d log(lhs) / d log(size)
  friend bool operator==(const TrendRow&, const TrendRow&) = default;
};

/// Set-level ratio checks over geo(q=2,n), n = 8, 16, ..., 64; one slope of
/// log lhs against log n per check.  Rows are appended to `rows` if given.
std::vector<TrendRow> geometric_trends(const std::vector<std::string>& check_ids, const CheckOptions& options = {},
                                       std::vector<CheckResult>* rows = nullptr, unsigned jobs = 1);

/// Subgroup ratio checks along a ladder of primes, taking for each p the
/// least t | p-1 with t >= sqrt(p); slopes of log lhs against log p.
std::vector<TrendRow> subgroup_trends(const std::vector<std::uint64_t>& primes, const std::vector<std::string>& check_ids,
                                      const CheckOptions& options = {}, std::vector<CheckResult>* rows = nullptr,
                                      unsigned jobs = 1);

/// Primes near 10^2, 10^2.5, ..., 10^5 (the last one below 10^5).
std::vector<std::uint64_t> prime_ladder();

// ---------------------------------------------------------------- rectangles

enum class RectCase { case1, case2_iterated };
const char* to_string(RectCase c);

struct Rectangle {
  std::uint32_t abscissa_class = 0;  // i: abscissae with 2^{i-1} <= points < 2^i
  std::uint32_t ordinate_class = 0;  // j within class i
  GSet abscissae;
  GSet ordinates;
  std::uint64_t points = 0;
  bool rich = false;
};

struct RectCover {
  std::uint64_t delta = 0;  // dyadic level of the current set
  GSet P;                   // popular differences at that level
  std::uint64_t mass = 0;   // |𝒫| = #{(a, a') : a - a' ∈ P}
  std::vector<Rectangle> rectangles;
  std::uint64_t rich_mass = 0;
  RectCase which = RectCase::case2_iterated;
  GSet current;             // Ã, the set the returned cover refers to
  GSet Aprime;              // case1 only
  GSet Adoubleprime;        // case1 only
  std::uint64_t q = 0;
  std::size_t base_class_size = 0;  // |A_i| of the chosen rectangle
  std::uint64_t class_cap = 0;      // per-abscissa count bound of that class
  bool mirrored = false;            // chosen rectangle qualified by height
  std::uint32_t rounds = 0;
  std::vector<BigInt> energy_ledger;  // E(Ã) at the start of each round
  std::string profile;
};

/// Throws DegenerateInput when |A| < 4.
RectCover rect_decompose(const GSet& a, const RectProfile& profile = RectProfile::desk());

struct RectAudit {
  bool partition = false;   // rectangles disjoint and summing to |𝒫|
  bool half_mass = false;   // 2 · rich mass >= |𝒫|
  bool pointwise_q = true;  // case1: each a ∈ A' supports >= q points
  bool bookkeeping = true;  // q · |A_i| <= 2|𝒫|
  bool ok() const { return partition && half_mass && pointwise_q && bookkeeping; }
};
/// Recounts every postcondition from scratch.
RectAudit audit_rect_cover(const RectCover& cover);

struct SumConstruction {
  GSet A, Aprime, Adoubleprime, P;
  bool from_case1 = false;
  BigInt e_times;                           // Σ_λ |A'_λ|²
  std::vector<std::pair<GroundElement, std::uint64_t>> lambda_profile;  // λ -> |A'_λ|
  std::vector<std::pair<GroundElement, std::uint64_t>> q_sizes;         // λ -> |Q_λ|
  std::uint64_t ratio_set_size = 0;         // |A/A|
  bool fibre_identity = false;              // Σ_λ |A'_λ| = |A||A'|
  bool cauchy_schwarz = false;              // E^× |A/A| >= (|A||A'|)²
  bool lines_ok = false;                    // every Q_λ on <= |P| lines of slope λ
};

inline constexpr std::size_t kRatioSetLimit = 10'000;

/// Throws InfeasibleSize when |A/A| exceeds kRatioSetLimit.
SumConstruction sum_construction_stats(const GSet& a, const RectProfile& profile = RectProfile::desk());

// ---------------------------------------------------------------- reports

struct Report {
  std::string version;
  std::string corpus;
  std::optional<std::string> timestamp;
  std::vector<CheckResult> results;
  std::vector<TrendRow> trends;
  std::map<std::string, std::string> extra;  // free-form summary values
  friend bool operator==(const Report&, const Report&) = default;
};

enum class ReportFormat { json, csv };

/// deterministic drops the timestamp and zeroes the timings.
std::string emit_report(const Report& report, ReportFormat format, bool deterministic = false);
/// Throws IoFailure.
void write_report(const Report& report, ReportFormat format, const std::string& path, bool deterministic = false);
/// Throws ParseError.
Report parse_report_json(const std::string& text);

std::string library_version();

}  // namespace sumlab
