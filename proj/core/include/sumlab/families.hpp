#pragma once

// Seeded and deterministic generators of test sets, with a one-line DSL:
//   geo(q=2,n=16[,start=1])        start·q^i, i < n
//   ap(n=32[,start=1,step=1])      start + i·step, i < n
//   rand(n=20,seed=7[,max=10^6])   n distinct integers in [1, max]
//   subgroup(p=1009,t=28)          the order-t subgroup of F_p^×
//   union(<spec>,<spec>,...)       union of same-kind families

#include <cstdint>
#include <string>
#include <vector>

#include "sumlab/ground.hpp"
#include "sumlab/setops.hpp"

namespace sumlab {

enum class FamilyKind { geometric, arithmetic, random_integer, subgroup_as_residues, union_of };

struct FamilySpec {
  FamilyKind kind = FamilyKind::arithmetic;
  std::uint64_t n = 0;
  Rational q{2};
  Rational start{1};
  Rational step{1};
  std::uint64_t seed = 1;
  std::uint64_t max = 1'000'000;
  std::uint64_t p = 0;
  std::uint64_t t = 0;
  std::vector<FamilySpec> parts;

  /// Canonical DSL text.
  std::string label() const;
};

/// Throws BadSpec.
FamilySpec parse_family(const std::string& text);

/// Throws BadSpec (and NotPrime / OrderDoesNotDivide for subgroups).
GSet generate(const FamilySpec& spec);
inline GSet generate(const std::string& dsl) { return generate(parse_family(dsl)); }

/// The fixed 64-bit LCG behind rand(...): state <- a·state + c (mod 2^64),
/// a = 6364136223846793005, c = 1442695040888963407.  One draw joins the high
/// halves of two consecutive states.
class Lcg64 {
 public:
  explicit Lcg64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [1, max] by rejection.
  std::uint64_t uniform(std::uint64_t max);

 private:
  std::uint64_t step();
  std::uint64_t state_;
};

}  // namespace sumlab
