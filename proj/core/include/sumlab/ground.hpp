#pragma once

// Exact ground arithmetic: arbitrary-precision rationals for real-case sets
// and residues modulo a prime for the F_p case.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

namespace sumlab {

using BigInt = mpz_class;

enum class ErrorCode {
  ZeroDenominator,
  NotInvertible,
  MixedKinds,
  ParseError,
  ZeroElement,
  NotPrime,
  OrderDoesNotDivide,
  IndexOutOfRange,
  TooLarge,
  RestrictNotSubset,
  DimensionMismatch,
  NoConvergence,
  ZeroCoefficient,
  CrossCheckMismatch,
  BadSpec,
  UnknownCheck,
  InfeasibleSize,
  DegenerateInput,
  IoFailure,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// True for the error codes that signal a size guard rather than bad input.
bool is_guard_error(ErrorCode code) noexcept;

/// Reduced fraction num/den with den > 0; zero is 0/1.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
  explicit Rational(const BigInt& value) : q_(value) {}

  /// Throws ZeroDenominator when den == 0.
  static Rational normalize(const BigInt& num, const BigInt& den);
  static Rational parse(std::string_view text);

  const mpz_class& num() const { return q_.get_num(); }
  const mpz_class& den() const { return q_.get_den(); }
  const mpq_class& value() const { return q_; }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }
  double to_double() const { return q_.get_d(); }

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);  // ZeroDenominator on o == 0

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return cmp(a.q_, b.q_) <=> 0;
  }

  std::string str() const;
  std::size_t hash() const noexcept;

 private:
  mpq_class q_;
};

/// Residue modulo p.  Primality of p is validated where sets are built
/// (set files, families, subgroup contexts), not on every construction.
class ModP {
 public:
  ModP(std::uint64_t value, std::uint64_t p);

  std::uint64_t value() const { return value_; }
  std::uint64_t modulus() const { return p_; }
  bool is_zero() const { return value_ == 0; }

  ModP operator-() const;
  friend ModP operator+(const ModP& a, const ModP& b);
  friend ModP operator-(const ModP& a, const ModP& b);
  friend ModP operator*(const ModP& a, const ModP& b);
  friend ModP operator/(const ModP& a, const ModP& b);

  friend bool operator==(const ModP& a, const ModP& b) = default;
  friend std::strong_ordering operator<=>(const ModP& a, const ModP& b) {
    if (auto c = a.p_ <=> b.p_; c != 0) return c;
    return a.value_ <=> b.value_;
  }

  std::string str() const;  // "v mod p"
  static ModP parse(std::string_view text);

 private:
  std::uint64_t value_;
  std::uint64_t p_;
};

/// Throws ZeroDenominator when den == 0.
Rational normalize(const BigInt& num, const BigInt& den);
/// Throws NotInvertible for x == 0.
ModP mod_inverse(const ModP& x);
ModP mod_pow(const ModP& base, std::uint64_t exponent);

struct Kind {
  enum class Tag { rational, modp };
  Tag tag = Tag::rational;
  std::uint64_t p = 0;  // modulus when tag == modp

  static Kind rational() { return {}; }
  static Kind modp(std::uint64_t p) { return {Tag::modp, p}; }
  bool is_modp() const { return tag == Tag::modp; }
  friend bool operator==(const Kind&, const Kind&) = default;
  std::string str() const;
};

class GroundElement {
 public:
  GroundElement() = default;
  GroundElement(Rational r) : v_(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  GroundElement(ModP m) : v_(m) {}                 // NOLINT(google-explicit-constructor)

  Kind kind() const;
  bool is_rational() const { return std::holds_alternative<Rational>(v_); }
  bool is_modp() const { return std::holds_alternative<ModP>(v_); }
  const Rational& rational() const { return std::get<Rational>(v_); }
  const ModP& modp() const { return std::get<ModP>(v_); }
  bool is_zero() const;

  /// Arithmetic throws MixedKinds across variants or moduli.
  friend GroundElement operator+(const GroundElement& a, const GroundElement& b);
  friend GroundElement operator-(const GroundElement& a, const GroundElement& b);
  friend GroundElement operator*(const GroundElement& a, const GroundElement& b);
  friend GroundElement operator/(const GroundElement& a, const GroundElement& b);
  GroundElement operator-() const;

  friend bool operator==(const GroundElement& a, const GroundElement& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const GroundElement& a, const GroundElement& b);

  std::string str() const;
  /// Parses "num/den", "num" (rational kind) or "v" / "v mod p" (modp kind).
  static GroundElement parse(std::string_view text, const Kind& kind);
  std::size_t hash() const noexcept;

 private:
  std::variant<Rational, ModP> v_;
};

struct GroundHash {
  std::size_t operator()(const GroundElement& e) const noexcept { return e.hash(); }
  std::size_t operator()(const Rational& r) const noexcept { return r.hash(); }
};

std::size_t hash_mpz(const mpz_class& z) noexcept;
std::string to_decimal(const BigInt& z);

}  // namespace sumlab
