#pragma once

// Multiplicative subgroups of F_p^× (and (Z/p²Z)^×): construction, cosets,
// coset gap statistics, window counts, additive character sums.

#include <chrono>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sumlab/ground.hpp"
#include "sumlab/setops.hpp"

namespace sumlab {

/// Per-prime data shared by every subgroup of F_p^×: the smallest primitive
/// root and, for p up to kLogTableLimit, the discrete-log table.
class PrimeField {
 public:
  static constexpr std::uint64_t kLogTableLimit = 20'000'000;

  /// Throws NotPrime.
  static std::shared_ptr<const PrimeField> make(std::uint64_t p);

  std::uint64_t p() const { return p_; }
  std::uint64_t generator() const { return g_; }
  bool has_log_table() const { return !log_.empty(); }
  /// log_g(x) for x != 0; requires the table.
  std::uint64_t log(std::uint64_t x) const { return log_[x]; }

 private:
  PrimeField(std::uint64_t p, std::uint64_t g);
  std::uint64_t p_;
  std::uint64_t g_;
  std::vector<std::uint32_t> log_;
};

class SubgroupCtx {
 public:
  /// Throws OrderDoesNotDivide unless t | p-1.
  SubgroupCtx(std::shared_ptr<const PrimeField> field, std::uint64_t t);

  std::uint64_t p() const { return field_->p(); }
  std::uint64_t g() const { return field_->generator(); }
  std::uint64_t order() const { return t_; }
  std::uint64_t index() const { return n_; }
  const PrimeField& field() const { return *field_; }
  const std::shared_ptr<const PrimeField>& field_ptr() const { return field_; }

  /// Γ = {g^{n j}}, ascending.
  const std::vector<std::uint64_t>& gamma() const { return gamma_; }
  bool contains(std::uint64_t x) const;
  /// j with x ∈ g^j Γ.  Requires the discrete-log table (TooLarge otherwise).
  std::uint64_t coset_index(std::uint64_t x) const;
  /// g^j Γ, ascending.
  std::vector<std::uint64_t> coset(std::uint64_t j) const;
  GSet as_gset() const;
  std::string label() const;  // "p=<p>,t=<t>"

 private:
  std::shared_ptr<const PrimeField> field_;
  std::uint64_t t_;
  std::uint64_t n_;
  std::vector<std::uint64_t> gamma_;
  std::vector<bool> member_;  // dense membership when the field is small enough
};

/// Throws NotPrime, OrderDoesNotDivide.
SubgroupCtx subgroup_context(std::uint64_t p, std::uint64_t t);
/// Parses "p=<prime>,t=<order>".
SubgroupCtx parse_subgroup_spec(const std::string& spec);

/// E(Γ) in O(p) from the multiplicative invariance of r_{Γ+Γ}.
BigInt subgroup_energy(const SubgroupCtx& ctx);

enum class GapConvention { circular, linear };

struct GapReport {
  std::uint64_t H = 0;
  std::uint64_t witness_coset = 0;
  std::uint64_t witness_start = 0;  // u: u+1..u+H (mod p) avoid the witness coset
  std::uint64_t H_circular = 0;
  std::uint64_t H_linear = 0;
  bool conventions_differ() const { return H_circular != H_linear; }
};

/// Longest run of consecutive residues avoiding some coset, maximised over
/// cosets.  The witness is re-verified by membership before returning.
GapReport gap_H(const SubgroupCtx& ctx, GapConvention convention = GapConvention::circular);

struct WindowCounts {
  std::vector<std::uint64_t> per_coset;  // N_{j,t}(h), j = 0..n-1
  std::uint64_t n_gamma_h = 0;           // Σ_j N_j² == #{ux ≡ y, 0<|x|,|y|<=h, u ∈ Γ}
};

/// Requires 1 <= h < p/2.  Throws CrossCheckMismatch if the two routes for
/// N(Γ,h) disagree.
WindowCounts window_counts(const SubgroupCtx& ctx, std::uint64_t h);

struct CharSums {
  std::vector<std::complex<double>> s;  // S_j = Σ_{x∈Γ} e_p(g^j x), j = 0..n-1
  double fourth_moment = 0;             // Σ_j |S_j|^4
  double orthogonality_bound = 0;       // (p/t) E(Γ)
  double orthogonality_exact = 0;       // (p E(Γ) - t^4) / t, which Σ|S_j|^4 equals
};

inline constexpr std::uint64_t kDefaultCharSweepLimit = 10'000'000;

/// Throws TooLarge when t·n exceeds max_work.
CharSums char_sums(const SubgroupCtx& ctx, std::uint64_t max_work = kDefaultCharSweepLimit);

/// Σ_{c∈F_p^×} |Σ_{x∈Γ} e_p(cx)|² by direct double summation.
double parseval_sum(const SubgroupCtx& ctx, std::uint64_t max_work = kDefaultCharSweepLimit);

struct KsCriterion {
  bool holds = false;
  double margin = 0;    // 0.5 t - max_k sum_k
  double max_sum = 0;
  std::uint64_t worst_k = 0;
};

/// max over k of Σ_j N_{j,t}(h) |S_{j+k}(t)| against 0.5 t.
KsCriterion ks_criterion(const SubgroupCtx& ctx, std::uint64_t h,
                         std::uint64_t max_work = kDefaultCharSweepLimit);

struct ModP2Subgroup {
  std::uint64_t p = 0;
  std::uint64_t t = 0;
  std::vector<std::uint64_t> gamma2;  // residues mod p², ascending
  GSet reduced;                       // gamma2 mod p
  BigInt t2_lifted, t2_reduced;
  BigInt t3_lifted, t3_reduced;
};

/// The order-t subgroup of (Z/p²Z)^× and its reduction mod p, with T_2, T_3
/// of both.  Throws OrderDoesNotDivide, CrossCheckMismatch if |reduced| != t.
ModP2Subgroup mod_p2_subgroup(std::uint64_t p, std::uint64_t t);

// ---------------------------------------------------------------- scans

struct ScanBound {
  enum class Kind { literal, sqrt_p, p_minus_1 };
  Kind kind = Kind::literal;
  std::uint64_t value = 0;
  /// sqrt(p) resolves to floor(√p) as an upper bound and ceil(√p) as a lower one.
  std::uint64_t resolve(std::uint64_t p, bool upper) const;
};

struct ScanSpec {
  std::uint64_t p_lo = 3, p_hi = 3;
  ScanBound t_lo{ScanBound::Kind::literal, 1};
  ScanBound t_hi{ScanBound::Kind::p_minus_1, 0};
  std::uint64_t p_cap = 100'000;  // gap_scan throws TooLarge above this
};

/// Parses "p in [a,b], t | p-1, t in [c,d]"; c, d may be integers,
/// "sqrt(p)" or "p-1".  The "t | p-1" clause and the t range are optional.
ScanSpec parse_scan_spec(const std::string& text);

struct GapScanRow {
  std::uint64_t p = 0;
  std::uint64_t t = 0;
  GapReport gap;
  double exponent = 0;  // log H / log p
};

/// Exact H_p(t) over the scan grid, in (p, t) order.  Rows are handed to
/// `sink` as they complete; stops early (returning false) once `deadline`
/// passes.
bool gap_scan(const ScanSpec& spec, const std::function<void(const GapScanRow&)>& sink,
              std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt,
              GapConvention convention = GapConvention::circular);

}  // namespace sumlab
