#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "he3sq/config.hpp"
#include "he3sq/csv.hpp"
#include "json.hpp"

namespace he3sq::cli {

enum ExitCode : int { kOk = 0, kCheckFailure = 1, kConfigError = 2, kEngineError = 3 };

struct ColumnDeviation {
  std::string column;  // "a" or "a=b" when the two sides differ
  double max_abs;
  double max_rel;
  bool pass;
};

struct CompareReport {
  std::vector<ColumnDeviation> columns;
  bool pass = true;
};

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Column pairs (left name, right name); empty compares every common column except none.
/// A column passes when |a - b| <= abs_tol + rel_tol |b| on every row.
CompareReport compare(const csv::Table& a, const csv::Table& b, double abs_tol, double rel_tol,
                      std::vector<std::pair<std::string, std::string>> pairs = {});

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

struct RunOutcome {
  std::filesystem::path directory;
  std::vector<std::string> files;
  std::vector<CheckResult> checks;
  nlohmann::json manifest;
};

/// Runs the configured engine and writes CSV artifacts plus manifest.json into dir.
RunOutcome execute(const config::RunConfig& c, const std::filesystem::path& dir);

/// runs/<UTC timestamp>-<8 hex digits of the serialized config hash>
std::filesystem::path default_run_directory(const config::RunConfig& c,
                                            const std::filesystem::path& root);

/// Built-in verification suites: "analytics" (optionally against a golden file) and "design".
std::vector<CheckResult> run_checks(const std::string& suite, const std::string& golden_path = {});

/// Entry point; returns the process exit code.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace he3sq::cli
