#include "he3sq/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "he3sq/csv.hpp"
#include "he3sq/record.hpp"

namespace he3sq::config {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string where(const Entry& e) { return "line " + std::to_string(e.line) + " (" + e.key + ")"; }

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& s, const Entry& e) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError({where(e) + ": not a number: '" + s + "'"});
  return v;
}

std::uint64_t parse_u64(const std::string& s, const Entry& e) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError({where(e) + ": not a non-negative integer: '" + s + "'"});
  }
  return v;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>) {
      out += csv::format(v[i]);
    } else {
      out += std::to_string(v[i]);
    }
  }
  return out;
}

std::vector<int> as_int_list(const Entry& e) {
  std::vector<int> out;
  for (auto v : as_u64_list(e)) out.push_back(static_cast<int>(v));
  return out;
}

using Setter = std::function<void(RunConfig&, const Entry&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"schema_version", [](RunConfig& c, const Entry& e) { c.schema_version = static_cast<int>(as_u64(e)); }},
      {"model", [](RunConfig& c, const Entry& e) {
         try {
           c.model = model_from_string(e.value);
         } catch (const ConfigError&) {
           throw ConfigError({where(e) + ": unknown model '" + e.value + "'"});
         }
       }},
      {"omega", [](RunConfig& c, const Entry& e) { c.params.omega = as_double(e); }},
      {"kappa", [](RunConfig& c, const Entry& e) { c.params.kappa = as_double(e); }},
      {"gamma_m", [](RunConfig& c, const Entry& e) { c.params.gamma_m = as_double(e); }},
      {"gamma_f", [](RunConfig& c, const Entry& e) { c.params.gamma_f = as_double(e); }},
      {"gamma_0", [](RunConfig& c, const Entry& e) { c.params.gamma_0 = as_double(e); }},
      {"paper_regime", [](RunConfig& c, const Entry& e) { c.params.paper_regime = as_bool(e); }},
      {"gamma_sq", [](RunConfig& c, const Entry& e) { c.gamma_sq = as_double(e); }},
      {"polarization", [](RunConfig& c, const Entry& e) { c.semi.polarization = as_double(e); }},
      {"n_ground_cell", [](RunConfig& c, const Entry& e) { c.semi.n_ground_cell = as_double(e); }},
      {"n_meta_cell", [](RunConfig& c, const Entry& e) { c.semi.n_meta_cell = as_double(e); }},
      {"tau_inv", [](RunConfig& c, const Entry& e) { c.semi.tau_inv = as_double(e); }},
      {"chi", [](RunConfig& c, const Entry& e) { c.semi.chi = as_double(e); }},
      {"sx", [](RunConfig& c, const Entry& e) { c.semi.sx = as_double(e); }},
      {"semi_kappa", [](RunConfig& c, const Entry& e) { c.semi_kappa = as_double(e); }},
      {"initial", [](RunConfig& c, const Entry& e) {
         c.initial = as_double_list(e);
         if (c.initial.size() != 6) throw ConfigError({where(e) + ": needs 6 values"});
       }},
      {"t_end", [](RunConfig& c, const Entry& e) { c.t_end = as_double(e); }},
      {"dt", [](RunConfig& c, const Entry& e) { c.dt = as_double(e); }},
      {"record_every", [](RunConfig& c, const Entry& e) { c.record_every = as_u64(e); }},
      {"dims", [](RunConfig& c, const Entry& e) { c.dims = as_int_list(e); }},
      {"homodyne_seed", [](RunConfig& c, const Entry& e) { c.homodyne_seed = as_u64(e); }},
      {"exchange_seeds", [](RunConfig& c, const Entry& e) { c.exchange_seeds = as_u64_list(e); }},
      {"n_trajectories", [](RunConfig& c, const Entry& e) { c.n_trajectories = as_u64(e); }},
      {"conditional", [](RunConfig& c, const Entry& e) { c.conditional = as_bool(e); }},
      {"threads", [](RunConfig& c, const Entry& e) { c.threads = static_cast<int>(as_u64(e)); }},
      {"stability_bound", [](RunConfig& c, const Entry& e) { c.stability_bound = as_double(e); }},
      {"output_dir", [](RunConfig& c, const Entry& e) { c.output_dir = e.value; }},
      {"fig3_gamma_0", [](RunConfig& c, const Entry& e) { c.fig3_gamma_0 = as_double(e); }},
      {"fig3_t_end_decoherence", [](RunConfig& c, const Entry& e) { c.fig3_t_end_decoherence = as_double(e); }},
      {"fig3_dims_decoherence", [](RunConfig& c, const Entry& e) { c.fig3_dims_decoherence = as_int_list(e); }},
      {"fig3_decoherence_seeds", [](RunConfig& c, const Entry& e) { c.fig3_decoherence_seeds = as_u64_list(e); }},
      {"fig3_engine", [](RunConfig& c, const Entry& e) { c.fig3_engine = e.value; }},
  };
  return table;
}

double fastest_rate(const RunConfig& c) {
  switch (c.model) {
    case Model::sse1:
      return c.gamma_sq;
    case Model::semiclassical:
      return std::max({c.semi_kappa, c.semi.tau_inv, c.semi.t_inv()});
    default:
      return max_rate(c.params);
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> diagnostics)
    : std::runtime_error([&] {
        std::string msg = "config error";
        for (const auto& d : diagnostics) msg += "\n  " + d;
        return msg;
      }()),
      diagnostics_(std::move(diagnostics)) {}

std::vector<Entry> parse_key_values(std::istream& is) {
  std::vector<Entry> out;
  std::vector<std::string> diag;
  std::set<std::string> seen;
  std::string line;
  int n = 0;
  while (std::getline(is, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      diag.push_back("line " + std::to_string(n) + ": expected 'key = value'");
      continue;
    }
    Entry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), n};
    if (e.key.empty()) {
      diag.push_back("line " + std::to_string(n) + ": empty key");
      continue;
    }
    if (!seen.insert(e.key).second) {
      diag.push_back("line " + std::to_string(n) + ": duplicate key '" + e.key + "'");
      continue;
    }
    out.push_back(std::move(e));
  }
  if (!diag.empty()) throw ConfigError(std::move(diag));
  return out;
}

double as_double(const Entry& e) { return parse_double(e.value, e); }

std::uint64_t as_u64(const Entry& e) { return parse_u64(e.value, e); }

bool as_bool(const Entry& e) {
  if (e.value == "true" || e.value == "1") return true;
  if (e.value == "false" || e.value == "0") return false;
  throw ConfigError({where(e) + ": expected true or false"});
}

std::vector<double> as_double_list(const Entry& e) {
  std::vector<double> out;
  for (const auto& s : split_list(e.value)) out.push_back(parse_double(s, e));
  return out;
}

std::vector<std::uint64_t> as_u64_list(const Entry& e) {
  std::vector<std::uint64_t> out;
  for (const auto& s : split_list(e.value)) out.push_back(parse_u64(s, e));
  return out;
}

std::string to_string(Model m) {
  switch (m) {
    case Model::semiclassical: return "semiclassical";
    case Model::qme3: return "qme3";
    case Model::sse3: return "sse3";
    case Model::sse1: return "sse1";
    case Model::gaussian: return "gaussian";
    case Model::fig3: return "fig3";
  }
  return "?";
}

Model model_from_string(const std::string& s) {
  for (Model m : {Model::semiclassical, Model::qme3, Model::sse3, Model::sse1, Model::gaussian,
                  Model::fig3}) {
    if (to_string(m) == s) return m;
  }
  throw ConfigError({"unknown model '" + s + "'"});
}

std::vector<std::string> violations(const RunConfig& c) {
  std::vector<std::string> v;
  if (c.schema_version != kSchemaVersion) {
    v.push_back("schema_version " + std::to_string(c.schema_version) + " is not supported (expected " +
                std::to_string(kSchemaVersion) + ")");
  }
  if (!(c.dt > 0.0)) v.emplace_back("dt must be positive");
  if (!(c.t_end >= 0.0)) v.emplace_back("t_end must be non-negative");
  if (!(c.stability_bound > 0.0)) v.emplace_back("stability_bound must be positive");
  if (c.record_every == 0) v.emplace_back("record_every must be at least 1");

  switch (c.model) {
    case Model::sse1:
      if (!(c.gamma_sq >= 0.0)) v.emplace_back("negative rate: gamma_sq");
      if (c.dims.size() != 1) v.emplace_back("sse1 needs exactly one truncation in dims");
      break;
    case Model::semiclassical:
      for (auto& s : he3sq::violations(c.semi)) v.push_back(s);
      if (!(c.semi_kappa >= 0.0)) v.emplace_back("negative rate: semi_kappa");
      if (c.initial.size() != 6) v.emplace_back("initial needs 6 values");
      break;
    default:
      for (auto& s : he3sq::violations(c.params)) v.push_back(s);
      if ((c.model == Model::qme3 || c.model == Model::sse3 || c.model == Model::fig3) &&
          c.dims.size() != 3) {
        v.emplace_back("three-mode models need three truncations in dims");
      }
      break;
  }
  if (c.model != Model::gaussian && c.model != Model::semiclassical) {
    for (auto& s : truncation_violations(c.dims)) v.push_back(s);
  }
  if (c.model == Model::sse3 && c.n_trajectories == 0 && c.exchange_seeds.size() < 2) {
    v.emplace_back("conditional ensembles need at least 2 exchange seeds");
  }
  if (c.model == Model::fig3) {
    if (c.exchange_seeds.size() < 2) v.emplace_back("fig3 needs at least 2 exchange seeds");
    if (c.fig3_decoherence_seeds.size() < 2) v.emplace_back("fig3 needs at least 2 decoherence-panel seeds");
    if (c.fig3_dims_decoherence.size() != 3) v.emplace_back("fig3_dims_decoherence needs three truncations");
    for (auto& s : truncation_violations(c.fig3_dims_decoherence)) v.push_back(s);
    if (c.fig3_engine != "sse" && c.fig3_engine != "gaussian") v.emplace_back("fig3_engine must be sse or gaussian");
    if (!(c.fig3_gamma_0 > 0.0)) v.emplace_back("fig3_gamma_0 must be positive");
  }
  if (c.dt > 0.0 && v.empty()) {
    const double r = fastest_rate(c);
    if (c.dt * r > c.stability_bound) {
      v.push_back("dt * fastest rate = " + csv::format(c.dt * r) + " exceeds the stability bound " +
                  csv::format(c.stability_bound));
    }
  }
  return v;
}

RunConfig parse(std::istream& is) {
  const auto entries = parse_key_values(is);
  RunConfig c;
  std::vector<std::string> diag;
  bool has_version = false;
  for (const auto& e : entries) {
    const auto it = setters().find(e.key);
    if (it == setters().end()) {
      diag.push_back(where(e) + ": unknown key");
      continue;
    }
    has_version = has_version || e.key == "schema_version";
    try {
      it->second(c, e);
    } catch (const ConfigError& err) {
      for (const auto& d : err.diagnostics()) diag.push_back(d);
    }
  }
  if (!has_version) diag.emplace_back("missing schema_version");
  if (diag.empty()) diag = violations(c);
  if (!diag.empty()) throw ConfigError(std::move(diag));
  return c;
}

RunConfig read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open " + path});
  return parse(in);
}

std::string serialize(const RunConfig& c) {
  std::ostringstream os;
  auto kv = [&](const char* k, const std::string& v) { os << k << " = " << v << '\n'; };
  auto num = [&](const char* k, double v) { kv(k, csv::format(v)); };
  kv("schema_version", std::to_string(c.schema_version));
  kv("model", to_string(c.model));
  num("omega", c.params.omega);
  num("kappa", c.params.kappa);
  num("gamma_m", c.params.gamma_m);
  num("gamma_f", c.params.gamma_f);
  num("gamma_0", c.params.gamma_0);
  kv("paper_regime", c.params.paper_regime ? "true" : "false");
  num("gamma_sq", c.gamma_sq);
  num("polarization", c.semi.polarization);
  num("n_ground_cell", c.semi.n_ground_cell);
  num("n_meta_cell", c.semi.n_meta_cell);
  num("tau_inv", c.semi.tau_inv);
  num("chi", c.semi.chi);
  num("sx", c.semi.sx);
  num("semi_kappa", c.semi_kappa);
  kv("initial", join(c.initial));
  num("t_end", c.t_end);
  num("dt", c.dt);
  kv("record_every", std::to_string(c.record_every));
  kv("dims", join(c.dims));
  kv("homodyne_seed", std::to_string(c.homodyne_seed));
  kv("exchange_seeds", join(c.exchange_seeds));
  kv("n_trajectories", std::to_string(c.n_trajectories));
  kv("conditional", c.conditional ? "true" : "false");
  kv("threads", std::to_string(c.threads));
  num("stability_bound", c.stability_bound);
  kv("output_dir", c.output_dir);
  num("fig3_gamma_0", c.fig3_gamma_0);
  num("fig3_t_end_decoherence", c.fig3_t_end_decoherence);
  kv("fig3_dims_decoherence", join(c.fig3_dims_decoherence));
  kv("fig3_decoherence_seeds", join(c.fig3_decoherence_seeds));
  kv("fig3_engine", c.fig3_engine);
  return os.str();
}

nlohmann::json to_json(const RunConfig& c) {
  return {{"schema_version", c.schema_version},
          {"model", to_string(c.model)},
          {"params", he3sq::to_json(c.params)},
          {"gamma_sq", c.gamma_sq},
          {"semiclassical", {{"polarization", c.semi.polarization},
                             {"n_ground_cell", c.semi.n_ground_cell},
                             {"n_meta_cell", c.semi.n_meta_cell},
                             {"tau_inv", c.semi.tau_inv},
                             {"chi", c.semi.chi},
                             {"sx", c.semi.sx},
                             {"kappa", c.semi_kappa},
                             {"initial", c.initial}}},
          {"t_end", c.t_end},
          {"dt", c.dt},
          {"record_every", c.record_every},
          {"dims", c.dims},
          {"homodyne_seed", c.homodyne_seed},
          {"exchange_seeds", c.exchange_seeds},
          {"n_trajectories", c.n_trajectories},
          {"conditional", c.conditional},
          {"threads", c.threads},
          {"stability_bound", c.stability_bound},
          {"fig3", {{"gamma_0", c.fig3_gamma_0},
                    {"t_end_decoherence", c.fig3_t_end_decoherence},
                    {"dims_decoherence", c.fig3_dims_decoherence},
                    {"decoherence_seeds", c.fig3_decoherence_seeds},
                    {"engine", c.fig3_engine}}}};
}

}  // namespace he3sq::config
