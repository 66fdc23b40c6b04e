#include <filesystem>
#include <fstream>
#include <sstream>

#include "sumlab/numtheory.hpp"
#include "sumlab/setops.hpp"

namespace sumlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Kind parse_kind_header(const std::string& line) {
  const std::string body = trim(line.substr(line.find(':') + 1));
  if (body == "rational") return Kind::rational();
  if (body.rfind("modp", 0) == 0) {
    const auto eq = body.find("p=");
    if (eq == std::string::npos) throw Error(ErrorCode::ParseError, "modp header needs p=<prime>");
    std::uint64_t p = 0;
    try {
      p = std::stoull(body.substr(eq + 2));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::ParseError, "bad modulus in '" + line + "'");
    }
    if (!nt::is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
    return Kind::modp(p);
  }
  throw Error(ErrorCode::ParseError, "unknown kind header '" + line + "'");
}

}  // namespace

GSet parse_set_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Kind kind = Kind::rational();
  bool have_kind = false;
  std::vector<GroundElement> elements;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t.rfind("kind:", 0) == 0) {
      if (have_kind || !elements.empty()) throw Error(ErrorCode::ParseError, "kind header must come first, once");
      kind = parse_kind_header(t);
      have_kind = true;
      continue;
    }
    elements.push_back(GroundElement::parse(t, kind));
  }
  if (!have_kind) throw Error(ErrorCode::ParseError, "missing 'kind:' header");
  return GSet::from(std::move(elements), kind);
}

GSet read_set_file(const std::string& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::IoFailure, "set file not found: '" + path + "'");
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open set file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_set_text(buf.str());
}

std::string format_set_text(const GSet& a) {
  std::string out = "kind: " + a.kind().str() + "\n";
  for (const auto& e : a) {
    out += e.is_modp() ? std::to_string(e.modp().value()) : e.str();
    out += '\n';
  }
  return out;
}

}  // namespace sumlab
