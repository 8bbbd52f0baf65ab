#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "he3sq/model.hpp"
#include "json.hpp"

namespace he3sq::config {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> diagnostics);
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

/// "key = value" per line; blank lines and '#' comments are skipped. Duplicate keys and
/// lines without '=' are reported together.
std::vector<Entry> parse_key_values(std::istream& is);

double as_double(const Entry& e);
std::uint64_t as_u64(const Entry& e);
bool as_bool(const Entry& e);
std::vector<double> as_double_list(const Entry& e);
std::vector<std::uint64_t> as_u64_list(const Entry& e);

enum class Model { semiclassical, qme3, sse3, sse1, gaussian, fig3 };

std::string to_string(Model m);
Model model_from_string(const std::string& s);

inline constexpr int kSchemaVersion = 1;

/// Everything one CLI run needs. Rates follow the model conventions; fig3 runs use them
/// in units of kappa.
struct RunConfig {
  int schema_version = kSchemaVersion;
  Model model = Model::gaussian;
  ThreeModeParams params = fig3_params();

  double gamma_sq = 1.0;  // sse1 only

  // semiclassical
  SemiclassicalParams semi;
  double semi_kappa = 1.0;
  std::vector<double> initial = {0, 0, 0.5, 0, 0, 0};  // dSz dSy dIz dIy dKz dKy

  double t_end = 20.0;
  double dt = 0.02;
  std::size_t record_every = 50;
  std::vector<int> dims = {5, 5, 8};
  std::uint64_t homodyne_seed = 1;
  std::vector<std::uint64_t> exchange_seeds = {11, 12, 13, 14, 15};
  // sse3: 0 runs the conditional ensemble, otherwise an unconditional ensemble of this size
  std::size_t n_trajectories = 0;
  bool conditional = true;  // gaussian: conditional or unconditional moments
  int threads = 0;          // 0 leaves the OpenMP default
  double stability_bound = 0.05;
  std::string output_dir = "runs";

  // fig3: the decoherence panel
  double fig3_gamma_0 = 1e-3;
  double fig3_t_end_decoherence = 10000.0;
  std::vector<int> fig3_dims_decoherence = {30, 9, 4};
  std::vector<std::uint64_t> fig3_decoherence_seeds = {21, 22, 23, 24, 25, 26, 27, 28};
  std::string fig3_engine = "sse";  // sse | gaussian
};

/// Empty iff the config can run.
std::vector<std::string> violations(const RunConfig& c);

/// Throws ConfigError with every diagnostic (unknown keys, bad values, violations).
RunConfig parse(std::istream& is);
RunConfig read_file(const std::string& path);

/// Round-trips through parse().
std::string serialize(const RunConfig& c);
nlohmann::json to_json(const RunConfig& c);

}  // namespace he3sq::config
