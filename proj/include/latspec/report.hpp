#pragma once

#include <json.hpp>

#include <string>
#include <variant>
#include <vector>

namespace latspec {

enum class OutputFormat { json, csv };

OutputFormat parse_format(const std::string& s);
std::string to_string(OutputFormat f);

using Cell = std::variant<long long, double, bool, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

struct Report {
  nlohmann::ordered_json config;
  Table results;
  nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();
  // false when a verification check in the results failed
  bool passed = true;
};

// JSON: {"config", "results", "diagnostics"}, results being one object per
// table row. CSV: header then rows, reals with 12 significant digits,
// RFC 4180 quoting, LF line ends. Non-finite reals throw
// NumericalError("unserializable").
std::string emit_report(const Report& report, OutputFormat format);

std::string format_real(double x);
std::string csv_escape(const std::string& field);

}  // namespace latspec
