#include "sumlab/families.hpp"

#include <cctype>
#include <map>
#include <set>

#include "sumlab/subgroups.hpp"

namespace sumlab {

std::uint64_t Lcg64::step() {
  state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
  return state_;
}

std::uint64_t Lcg64::next() {
  const std::uint64_t hi = step() >> 32U;
  const std::uint64_t lo = step() >> 32U;
  return (hi << 32U) | lo;
}

std::uint64_t Lcg64::uniform(std::uint64_t max) {
  // Largest multiple of max that fits, so the residue is unbiased.
  const std::uint64_t limit = max == 0 ? 0 : (~0ULL / max) * max;
  for (;;) {
    const std::uint64_t x = next();
    if (x < limit) return 1 + x % max;
  }
}

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::BadSpec, msg); }

std::string strip(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  }
  return out;
}

/// Splits "a,b(c,d),e" at top-level commas.
std::vector<std::string> split_top(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

std::uint64_t parse_count(const std::string& key, const std::string& v) {
  // Accepts plain integers and powers written b^e.
  const auto caret = v.find('^');
  try {
    if (caret == std::string::npos) {
      if (v.empty() || !std::all_of(v.begin(), v.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        bad("bad value for " + key + ": '" + v + "'");
      }
      return std::stoull(v);
    }
    const std::uint64_t b = parse_count(key, v.substr(0, caret));
    const std::uint64_t e = parse_count(key, v.substr(caret + 1));
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), b, e);
    if (!r.fits_ulong_p()) bad(key + " out of range");
    return r.get_ui();
  } catch (const std::out_of_range&) {
    bad(key + " out of range");
  }
}

Rational parse_rational(const std::string& key, const std::string& v) {
  try {
    return Rational::parse(v);
  } catch (const Error&) {
    bad("bad value for " + key + ": '" + v + "'");
  }
}

}  // namespace

FamilySpec parse_family(const std::string& text) {
  const std::string s = strip(text);
  const auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')') bad("family spec must look like name(key=value,...): '" + text + "'");
  const std::string name = s.substr(0, open);
  const std::string body = s.substr(open + 1, s.size() - open - 2);

  FamilySpec spec;
  if (name == "union") {
    spec.kind = FamilyKind::union_of;
    for (const auto& part : split_top(body)) spec.parts.push_back(parse_family(part));
    if (spec.parts.empty()) bad("union needs at least one part");
    return spec;
  }

  std::map<std::string, std::string> kv;
  for (const auto& item : split_top(body)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) bad("expected key=value, got '" + item + "'");
    if (!kv.emplace(item.substr(0, eq), item.substr(eq + 1)).second) bad("duplicate key '" + item.substr(0, eq) + "'");
  }
  auto allow = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, _] : kv) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
        bad("unknown key '" + k + "' for " + name);
      }
    }
  };
  auto need = [&](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) bad(name + " needs " + key + "=");
    return it->second;
  };

  if (name == "geo") {
    allow({"q", "n", "start"});
    spec.kind = FamilyKind::geometric;
    spec.q = parse_rational("q", need("q"));
    spec.n = parse_count("n", need("n"));
    if (kv.count("start")) spec.start = parse_rational("start", kv["start"]);
  } else if (name == "ap") {
    allow({"n", "start", "step"});
    spec.kind = FamilyKind::arithmetic;
    spec.n = parse_count("n", need("n"));
    if (kv.count("start")) spec.start = parse_rational("start", kv["start"]);
    if (kv.count("step")) spec.step = parse_rational("step", kv["step"]);
  } else if (name == "rand") {
    allow({"n", "seed", "max"});
    spec.kind = FamilyKind::random_integer;
    spec.n = parse_count("n", need("n"));
    spec.seed = parse_count("seed", need("seed"));
    if (kv.count("max")) spec.max = parse_count("max", kv["max"]);
  } else if (name == "subgroup") {
    allow({"p", "t"});
    spec.kind = FamilyKind::subgroup_as_residues;
    spec.p = parse_count("p", need("p"));
    spec.t = parse_count("t", need("t"));
    spec.n = spec.t;
  } else {
    bad("unknown family '" + name + "'");
  }
  return spec;
}

std::string FamilySpec::label() const {
  switch (kind) {
    case FamilyKind::geometric:
      return "geo(q=" + q.str() + ",n=" + std::to_string(n) + (start == Rational(1) ? "" : ",start=" + start.str()) + ")";
    case FamilyKind::arithmetic:
      return "ap(n=" + std::to_string(n) + (start == Rational(1) ? "" : ",start=" + start.str()) +
             (step == Rational(1) ? "" : ",step=" + step.str()) + ")";
    case FamilyKind::random_integer:
      return "rand(n=" + std::to_string(n) + ",seed=" + std::to_string(seed) + ",max=" + std::to_string(max) + ")";
    case FamilyKind::subgroup_as_residues:
      return "subgroup(p=" + std::to_string(p) + ",t=" + std::to_string(t) + ")";
    case FamilyKind::union_of: {
      std::string out = "union(";
      for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i].label();
      return out + ")";
    }
  }
  return {};
}

GSet generate(const FamilySpec& spec) {
  switch (spec.kind) {
    case FamilyKind::geometric: {
      if (spec.q == Rational(0) || spec.q == Rational(1) || spec.q == Rational(-1)) bad("geometric ratio must not be 0 or ±1");
      if (spec.start == Rational(0)) bad("geometric start must be nonzero");
      std::vector<GroundElement> v;
      Rational x = spec.start;
      for (std::uint64_t i = 0; i < spec.n; ++i) {
        v.emplace_back(x);
        x = x * spec.q;
      }
      return GSet::from(std::move(v), Kind::rational());
    }
    case FamilyKind::arithmetic: {
      if (spec.step == Rational(0)) bad("arithmetic step must be nonzero");
      std::vector<GroundElement> v;
      Rational x = spec.start;
      for (std::uint64_t i = 0; i < spec.n; ++i) {
        if (x == Rational(0)) bad("arithmetic progression passes through 0");
        v.emplace_back(x);
        x = x + spec.step;
      }
      return GSet::from(std::move(v), Kind::rational());
    }
    case FamilyKind::random_integer: {
      if (spec.max < spec.n) bad("cannot draw " + std::to_string(spec.n) + " distinct values from [1, max]");
      Lcg64 rng(spec.seed);
      std::set<std::uint64_t> seen;
      std::vector<long> v;
      while (v.size() < spec.n) {
        const std::uint64_t x = rng.uniform(spec.max);
        if (x > static_cast<std::uint64_t>(std::numeric_limits<long>::max())) bad("max out of range");
        if (seen.insert(x).second) v.push_back(static_cast<long>(x));
      }
      return GSet::of_integers(std::span<const long>(v));
    }
    case FamilyKind::subgroup_as_residues:
      return subgroup_context(spec.p, spec.t).as_gset();
    case FamilyKind::union_of: {
      std::vector<GroundElement> v;
      const Kind kind = generate(spec.parts.front()).kind();
      for (const auto& part : spec.parts) {
        const GSet s = generate(part);
        if (!(s.kind() == kind)) throw Error(ErrorCode::MixedKinds, "union of families of different kinds");
        v.insert(v.end(), s.begin(), s.end());
      }
      return GSet::from(std::move(v), kind);
    }
  }
  bad("unhandled family kind");
}

}  // namespace sumlab
