#include "latspec/report.hpp"

#include <cmath>
#include <cstdio>

#include "latspec/error.hpp"

namespace latspec {

OutputFormat parse_format(const std::string& s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  throw PreconditionError("invalid-format", "format must be json or csv, got '" + s + "'");
}

std::string to_string(OutputFormat f) { return f == OutputFormat::json ? "json" : "csv"; }

std::string format_real(double x) {
  if (!std::isfinite(x))
    throw NumericalError("unserializable", "report contains a non-finite number");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

struct CellToJson {
  nlohmann::ordered_json operator()(long long v) const { return v; }
  nlohmann::ordered_json operator()(double v) const {
    if (!std::isfinite(v))
      throw NumericalError("unserializable", "report contains a non-finite number");
    return v;
  }
  nlohmann::ordered_json operator()(bool v) const { return v; }
  nlohmann::ordered_json operator()(const std::string& v) const { return v; }
};

struct CellToCsv {
  std::string operator()(long long v) const { return std::to_string(v); }
  std::string operator()(double v) const { return format_real(v); }
  std::string operator()(bool v) const { return v ? "true" : "false"; }
  std::string operator()(const std::string& v) const { return csv_escape(v); }
};

void check_finite(const nlohmann::ordered_json& j) {
  if (j.is_number_float() && !std::isfinite(j.get<double>()))
    throw NumericalError("unserializable", "report contains a non-finite number");
  if (j.is_structured())
    for (const auto& item : j) check_finite(item);
}

}  // namespace

std::string emit_report(const Report& report, OutputFormat format) {
  const Table& t = report.results;
  for (const auto& row : t.rows)
    if (row.size() != t.header.size())
      throw NumericalError("unserializable", "result row width does not match its header");

  if (format == OutputFormat::csv) {
    std::string out;
    for (std::size_t i = 0; i < t.header.size(); ++i)
      out += (i ? "," : "") + csv_escape(t.header[i]);
    out += '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        out += (i ? "," : "") + std::visit(CellToCsv{}, row[i]);
      out += '\n';
    }
    return out;
  }

  nlohmann::ordered_json doc;
  doc["config"] = report.config;
  auto results = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.header[i]] = std::visit(CellToJson{}, row[i]);
    results.push_back(std::move(obj));
  }
  doc["results"] = std::move(results);
  doc["diagnostics"] = report.diagnostics;
  check_finite(doc);
  return doc.dump(2) + "\n";
}

}  // namespace latspec
