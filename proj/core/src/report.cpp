#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sumlab/harness.hpp"

namespace sumlab {

namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kSchema = "sumlab-report/1";

std::string now_utc() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// CSV field, quoted when it holds a separator or quote.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num(double x) {
  if (!std::isfinite(x)) return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string library_version() { return SUMLAB_VERSION; }

std::string emit_report(const Report& report, ReportFormat format, bool deterministic) {
  if (format == ReportFormat::csv) {
    std::string out = "check_id,input,lhs,rhs,ratio,pass,ms\n";
    for (const auto& r : report.results) {
      out += csv_field(r.check_id) + ',' + csv_field(r.input) + ',' + csv_field(r.lhs) + ',' + csv_field(r.rhs) + ',' +
             num(r.ratio) + ',' + to_string(r.status) + ',' + num(deterministic ? 0.0 : r.elapsed_ms) + '\n';
    }
    return out;
  }
  ojson j;
  j["schema"] = kSchema;
  j["version"] = report.version.empty() ? library_version() : report.version;
  j["corpus"] = report.corpus;
  if (!deterministic) j["timestamp"] = report.timestamp ? *report.timestamp : now_utc();
  j["results"] = ojson::array();
  for (const auto& r : report.results) {
    ojson row;
    row["check_id"] = r.check_id;
    row["input"] = r.input;
    row["lhs"] = r.lhs;
    row["rhs"] = r.rhs;
    // Non-finite ratios travel as strings; JSON has no literal for them.
    if (std::isfinite(r.ratio)) {
      row["ratio"] = r.ratio;
    } else {
      row["ratio"] = num(r.ratio);
    }
    row["pass"] = to_string(r.status);
    row["ms"] = deterministic ? 0.0 : r.elapsed_ms;
    row["note"] = r.note;
    row["guard"] = r.guard;
    j["results"].push_back(std::move(row));
  }
  j["trends"] = ojson::array();
  for (const auto& t : report.trends) {
    j["trends"].push_back(ojson{{"check_id", t.check_id}, {"series", t.series}, {"points", t.points}, {"slope", t.slope}});
  }
  j["summary"] = ojson::object();
  for (const auto& [k, v] : report.extra) j["summary"][k] = v;
  return j.dump(2) + "\n";
}

void write_report(const Report& report, ReportFormat format, const std::string& path, bool deterministic) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "' for writing");
  f << emit_report(report, format, deterministic);
  f.flush();
  if (!f) throw Error(ErrorCode::IoFailure, "write to '" + path + "' failed");
}

Report parse_report_json(const std::string& text) {
  try {
    const ojson j = ojson::parse(text);
    if (j.at("schema").get<std::string>() != kSchema) throw Error(ErrorCode::ParseError, "unknown report schema");
    Report r;
    r.version = j.at("version").get<std::string>();
    r.corpus = j.at("corpus").get<std::string>();
    if (j.contains("timestamp")) r.timestamp = j.at("timestamp").get<std::string>();
    for (const auto& row : j.at("results")) {
      CheckResult c;
      c.check_id = row.at("check_id").get<std::string>();
      c.input = row.at("input").get<std::string>();
      c.lhs = row.at("lhs").get<std::string>();
      c.rhs = row.at("rhs").get<std::string>();
      const auto& ratio = row.at("ratio");
      c.ratio = ratio.is_string() ? std::stod(ratio.get<std::string>()) : ratio.get<double>();
      c.status = parse_check_status(row.at("pass").get<std::string>());
      c.elapsed_ms = row.at("ms").get<double>();
      c.note = row.value("note", "");
      c.guard = row.value("guard", false);
      r.results.push_back(std::move(c));
    }
    if (j.contains("trends")) {
      for (const auto& t : j.at("trends")) {
        r.trends.push_back({t.at("check_id").get<std::string>(), t.at("series").get<std::string>(),
                            t.at("points").get<std::size_t>(), t.at("slope").get<double>()});
      }
    }
    if (j.contains("summary")) {
      for (const auto& [k, v] : j.at("summary").items()) r.extra[k] = v.get<std::string>();
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed report: ") + e.what());
  }
}

}  // namespace sumlab
