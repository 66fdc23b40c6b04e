#include "sumlab/ground.hpp"

#include <cctype>
#include <string>

#include "sumlab/numtheory.hpp"

namespace sumlab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::MixedKinds: return "MixedKinds";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ZeroElement: return "ZeroElement";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::OrderDoesNotDivide: return "OrderDoesNotDivide";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::RestrictNotSubset: return "RestrictNotSubset";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ZeroCoefficient: return "ZeroCoefficient";
    case ErrorCode::CrossCheckMismatch: return "CrossCheckMismatch";
    case ErrorCode::BadSpec: return "BadSpec";
    case ErrorCode::UnknownCheck: return "UnknownCheck";
    case ErrorCode::InfeasibleSize: return "InfeasibleSize";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

bool is_guard_error(ErrorCode code) noexcept {
  return code == ErrorCode::TooLarge || code == ErrorCode::InfeasibleSize;
}

std::size_t hash_mpz(const mpz_class& z) noexcept {
  const auto* raw = z.get_mpz_t();
  std::size_t h = static_cast<std::size_t>(raw->_mp_size) * 0x9E3779B97F4A7C15ULL;
  const int limbs = raw->_mp_size < 0 ? -raw->_mp_size : raw->_mp_size;
  for (int i = 0; i < limbs; ++i) {
    h ^= static_cast<std::size_t>(raw->_mp_d[i]) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::string to_decimal(const BigInt& z) { return z.get_str(10); }

// ---------------------------------------------------------------- Rational

Rational Rational::normalize(const BigInt& num, const BigInt& den) {
  if (den == 0) throw Error(ErrorCode::ZeroDenominator, "denominator is zero");
  Rational r;
  r.q_ = mpq_class(num, den);
  r.q_.canonicalize();
  return r;
}

Rational normalize(const BigInt& num, const BigInt& den) { return Rational::normalize(num, den); }

Rational Rational::parse(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty rational");
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s, 10));
    return normalize(BigInt(s.substr(0, slash), 10), BigInt(s.substr(slash + 1), 10));
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::ParseError, "not a rational: '" + s + "'");
  }
}

Rational Rational::operator-() const {
  Rational r;
  r.q_ = -q_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  q_ += o.q_;
  return *this;
}
Rational& Rational::operator-=(const Rational& o) {
  q_ -= o.q_;
  return *this;
}
Rational& Rational::operator*=(const Rational& o) {
  q_ *= o.q_;
  return *this;
}
Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw Error(ErrorCode::ZeroDenominator, "division by zero");
  q_ /= o.q_;
  return *this;
}

std::string Rational::str() const {
  if (is_integer()) return num().get_str(10);
  return num().get_str(10) + "/" + den().get_str(10);
}

std::size_t Rational::hash() const noexcept {
  return hash_mpz(num()) * 31 + hash_mpz(den());
}

// ---------------------------------------------------------------- ModP

ModP::ModP(std::uint64_t value, std::uint64_t p) : value_(0), p_(p) {
  if (p < 2) throw Error(ErrorCode::NotPrime, "modulus must be at least 2");
  value_ = value % p;
}

ModP ModP::operator-() const { return ModP(value_ == 0 ? 0 : p_ - value_, p_); }

namespace {
void require_same_modulus(const ModP& a, const ModP& b) {
  if (a.modulus() != b.modulus()) {
    throw Error(ErrorCode::MixedKinds, "residues modulo " + std::to_string(a.modulus()) + " and " +
                                           std::to_string(b.modulus()));
  }
}
}  // namespace

ModP operator+(const ModP& a, const ModP& b) {
  require_same_modulus(a, b);
  const std::uint64_t s = a.value_ + b.value_;  // both < p < 2^63 in practice
  return ModP(s >= a.p_ ? s - a.p_ : s, a.p_);
}
ModP operator-(const ModP& a, const ModP& b) {
  require_same_modulus(a, b);
  return ModP(a.value_ >= b.value_ ? a.value_ - b.value_ : a.value_ + (a.p_ - b.value_), a.p_);
}
ModP operator*(const ModP& a, const ModP& b) {
  require_same_modulus(a, b);
  return ModP(nt::mulmod(a.value_, b.value_, a.p_), a.p_);
}
ModP operator/(const ModP& a, const ModP& b) {
  require_same_modulus(a, b);
  return a * mod_inverse(b);
}

std::string ModP::str() const { return std::to_string(value_) + " mod " + std::to_string(p_); }

ModP ModP::parse(std::string_view text) {
  const std::string s(text);
  const auto pos = s.find("mod");
  if (pos == std::string::npos) throw Error(ErrorCode::ParseError, "expected 'v mod p': '" + s + "'");
  try {
    const long long v = std::stoll(s.substr(0, pos));
    const unsigned long long p = std::stoull(s.substr(pos + 3));
    const long long reduced = v % static_cast<long long>(p);
    return ModP(static_cast<std::uint64_t>(reduced < 0 ? reduced + static_cast<long long>(p) : reduced), p);
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::ParseError, "bad residue '" + s + "'");
  }
}

ModP mod_inverse(const ModP& x) {
  if (x.is_zero()) throw Error(ErrorCode::NotInvertible, "0 has no inverse mod " + std::to_string(x.modulus()));
  const auto inv = nt::invmod(x.value(), x.modulus());
  if (!inv) throw Error(ErrorCode::NotInvertible, x.str() + " is not a unit");
  return ModP(*inv, x.modulus());
}

ModP mod_pow(const ModP& base, std::uint64_t exponent) {
  return ModP(nt::powmod(base.value(), exponent, base.modulus()), base.modulus());
}

// ---------------------------------------------------------------- Kind

std::string Kind::str() const {
  if (is_modp()) return "modp p=" + std::to_string(p);
  return "rational";
}

// ---------------------------------------------------------------- GroundElement

Kind GroundElement::kind() const {
  if (is_modp()) return Kind::modp(modp().modulus());
  return Kind::rational();
}

bool GroundElement::is_zero() const {
  return std::visit([](const auto& x) { return x.is_zero(); }, v_);
}

namespace {
template <class Op>
GroundElement binary(const GroundElement& a, const GroundElement& b, Op op) {
  if (a.is_rational() && b.is_rational()) return GroundElement(op(a.rational(), b.rational()));
  if (a.is_modp() && b.is_modp()) return GroundElement(op(a.modp(), b.modp()));
  throw Error(ErrorCode::MixedKinds, "rational and residue operands");
}
}  // namespace

GroundElement operator+(const GroundElement& a, const GroundElement& b) {
  return binary(a, b, [](const auto& x, const auto& y) { return x + y; });
}
GroundElement operator-(const GroundElement& a, const GroundElement& b) {
  return binary(a, b, [](const auto& x, const auto& y) { return x - y; });
}
GroundElement operator*(const GroundElement& a, const GroundElement& b) {
  return binary(a, b, [](const auto& x, const auto& y) { return x * y; });
}
GroundElement operator/(const GroundElement& a, const GroundElement& b) {
  return binary(a, b, [](const auto& x, const auto& y) { return x / y; });
}
GroundElement GroundElement::operator-() const {
  return std::visit([](const auto& x) { return GroundElement(-x); }, v_);
}

std::strong_ordering operator<=>(const GroundElement& a, const GroundElement& b) {
  if (a.v_.index() != b.v_.index()) return a.v_.index() <=> b.v_.index();
  if (a.is_rational()) return a.rational() <=> b.rational();
  return a.modp() <=> b.modp();
}

std::string GroundElement::str() const {
  return std::visit([](const auto& x) { return x.str(); }, v_);
}

GroundElement GroundElement::parse(std::string_view text, const Kind& kind) {
  if (!kind.is_modp()) return GroundElement(Rational::parse(text));
  const std::string s(text);
  if (s.find("mod") != std::string::npos) {
    ModP m = ModP::parse(s);
    if (m.modulus() != kind.p) {
      throw Error(ErrorCode::MixedKinds, "element '" + s + "' in a set modulo " + std::to_string(kind.p));
    }
    return GroundElement(m);
  }
  const Rational r = Rational::parse(s);
  if (!r.is_integer()) throw Error(ErrorCode::ParseError, "residue must be an integer: '" + s + "'");
  mpz_class v = r.num() % mpz_class(static_cast<unsigned long>(kind.p));
  if (v < 0) v += static_cast<unsigned long>(kind.p);
  return GroundElement(ModP(v.get_ui(), kind.p));
}

std::size_t GroundElement::hash() const noexcept {
  if (is_rational()) return rational().hash();
  const auto& m = modp();
  return std::hash<std::uint64_t>{}(m.value() * 0x9E3779B97F4A7C15ULL ^ m.modulus());
}

}  // namespace sumlab
