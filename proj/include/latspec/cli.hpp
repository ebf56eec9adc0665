#pragma once

// Batch front end. A run is a command plus a flat key-value parameter map,
// taken either from command-line flags or from a JSON document; the same
// validation path serves both.

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "latspec/report.hpp"

namespace latspec {

namespace exit_status {
constexpr int ok = 0;
constexpr int parse_error = 2;
constexpr int precondition = 3;
constexpr int numerical = 4;
}  // namespace exit_status

// Malformed input: unknown command or key, wrong value type. Exit status 2.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  // Flat object; values may be typed JSON or strings as read from flags.
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  OutputFormat format = OutputFormat::json;
  std::optional<std::filesystem::path> output;
};

const std::vector<std::string>& command_names();
// Keys accepted by a command, in report order. Throws ParseError for an
// unknown command.
std::vector<std::string> parameter_keys(const std::string& command);

// Accepts a flat config object ({"command": ..., key: value...}) or a full
// report, in which case its "config" member is used.
RunConfig config_from_json(const nlohmann::ordered_json& doc);

// Builds the report for a config; throws ParseError, PreconditionError or
// NumericalError. The report's config block is the fully resolved parameter
// set including defaults.
Report execute(const RunConfig& config);

// Executes, emits and writes the report to config.output (resolved against
// $LATSPEC_OUTPUT_DIR when relative) or to out. Errors produce a JSON error
// record on err. Returns the exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Command-line entry point (CLI11). Exit status 2 on malformed arguments.
int run_command_line(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace latspec
