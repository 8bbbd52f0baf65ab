#include "he3sq/expdesign.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>

#include "he3sq/analytics.hpp"
#include "he3sq/config.hpp"
#include "he3sq/semiclassical.hpp"

namespace he3sq::expdesign {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kC = 299792458.0;
constexpr double kH = 6.62607015e-34;
constexpr double kHbar = kH / (2.0 * kPi);
constexpr double kEps0 = 8.8541878128e-12;
constexpr double kBoltzmann = 1.380649e-23;
constexpr double kTorr = 101325.0 / 760.0;
constexpr double kJ01 = 2.404825557695773;  // first zero of J0

void require(bool ok, const std::string& what, std::vector<std::string>& v) {
  if (!ok) v.push_back(what);
}

void require_finite(double x, const char* name) {
  if (!std::isfinite(x) || x < 0.0) {
    throw DesignError(std::string("intermediate quantity ") + name + " is invalid");
  }
}

double cell_volume(const CellDesign& d) {
  const double r = 0.5 * d.cell_diameter;
  return kPi * r * r * d.cell_length;
}

}  // namespace

std::vector<std::string> violations(const CellDesign& d) {
  std::vector<std::string> v;
  require(d.cell_length > 0.0, "cell_length must be positive", v);
  require(d.cell_diameter > 0.0, "cell_diameter must be positive", v);
  require(d.pressure_torr > 0.0, "pressure_torr must be positive", v);
  require(d.temperature > 0.0, "temperature must be positive", v);
  require(d.n_cell >= 0.0, "n_cell must be non-negative", v);
  require(d.metastable_fraction > 0.0 && d.metastable_fraction < 1.0,
          "metastable_fraction must lie in (0, 1)", v);
  require(d.polarization > 0.0 && d.polarization < 1.0, "polarization must lie in (0, 1)", v);
  require(d.cavity_length > 0.0, "cavity_length must be positive", v);
  require(d.finesse > 0.0, "finesse must be positive", v);
  require(d.output_power >= 0.0, "output_power must be non-negative", v);
  require(d.wavelength > 0.0, "wavelength must be positive", v);
  require(d.detuning != 0.0, "detuning must be nonzero", v);
  require(d.squeezing_time > 0.0, "squeezing_time must be positive", v);
  const auto& c = d.constants;
  require(c.exchange_coefficient > 0.0, "exchange_coefficient must be positive", v);
  require(c.diffusion_pressure > 0.0, "diffusion_pressure must be positive", v);
  require(c.gamma_p >= 0.0, "gamma_p must be non-negative", v);
  require(c.d8 > 0.0, "d8 must be positive", v);
  require(c.waist > 0.0, "waist must be positive", v);
  require(c.scattering_geometry > 0.0, "scattering_geometry must be positive", v);
  return v;
}

double wall_relaxation(const CellDesign& d) {
  if (!(d.cell_length > 0.0) || !(d.cell_diameter > 0.0) || !(d.pressure_torr > 0.0)) {
    throw DesignError("wall relaxation needs positive geometry and pressure");
  }
  const double diffusion = d.constants.diffusion_pressure / d.pressure_torr;
  const double kz = kPi / d.cell_length;
  const double kr = kJ01 / (0.5 * d.cell_diameter);
  return diffusion * (kz * kz + kr * kr);
}

double scattering_rate(const CellDesign& d, double g_c, double n_ph) {
  if (d.detuning == 0.0) throw DesignError("scattering rate needs a nonzero detuning");
  return d.constants.scattering_geometry * d.constants.gamma_p * g_c * g_c * n_ph /
         (d.detuning * d.detuning);
}

double field_tolerance(double t_total) {
  if (!(t_total > 0.0)) throw DesignError("squeezing time must be positive");
  return 1.5e-6 / t_total;
}

SpatialCheck spatial_averaging_check(double gamma_0_wall, double gamma_sq) {
  const double ratio =
      gamma_sq > 0.0 ? gamma_0_wall / gamma_sq : std::numeric_limits<double>::infinity();
  return {ratio, ratio >= 1e3};
}

DerivedRates derive_all(const CellDesign& d) {
  if (auto v = violations(d); !v.empty()) {
    std::string msg = "invalid cell design:";
    for (const auto& s : v) msg += " " + s + ";";
    throw DesignError(msg);
  }
  const auto& k = d.constants;
  DerivedRates r{};

  r.cell_volume = cell_volume(d);
  r.n_cell = d.n_cell > 0.0 ? d.n_cell
                            : d.pressure_torr * kTorr / (kBoltzmann * d.temperature) * r.cell_volume;
  r.n_meta_cell = d.metastable_fraction * r.n_cell;
  if (d.metastable_fraction > 1e-4) {
    r.warnings.emplace_back("metastable fraction above 1e-4");
  }

  // light
  r.kappa = kPi * kC / (d.cavity_length * d.finesse);
  r.photon_energy = kH * kC / d.wavelength;
  r.photon_flux = d.output_power / r.photon_energy;
  r.n_ph = r.photon_flux / r.kappa;

  // atoms
  const auto spins = semiclassical::steady_spins(d.polarization, r.n_cell, r.n_meta_cell, r.n_ph);
  r.n_ground = spins.n_ground;
  r.n_meta = spins.n_meta;
  r.tau_inv = k.exchange_coefficient * r.n_cell / r.cell_volume;
  r.t_inv = r.tau_inv * r.n_meta_cell / r.n_cell;
  const auto ex = semiclassical::exchange_rates(d.polarization, r.tau_inv, r.t_inv);
  r.gamma_m = ex.gamma_m;
  r.gamma_f = ex.gamma_f;

  // coupling
  r.waist = k.waist;
  r.mode_volume = kPi * k.waist * k.waist * d.cavity_length / 4.0;
  const double omega_light = 2.0 * kPi * kC / d.wavelength;
  r.field_per_photon = std::sqrt(kHbar * omega_light / (2.0 * kEps0 * r.mode_volume));
  r.g_c = k.d8 * r.field_per_photon / kHbar;
  r.chi = r.g_c * r.g_c / d.detuning;
  r.omega = std::abs(r.chi) * std::sqrt(r.n_meta * r.n_ph);
  r.gamma_sq = analytics::squeezing_rate(r.omega, r.kappa, r.gamma_f, r.gamma_m);

  // decoherence
  r.gamma_0_wall = wall_relaxation(d);
  r.gamma_0_scat = scattering_rate(d, r.g_c, r.n_ph);
  r.gamma_0 = r.gamma_0_wall + r.gamma_0_scat;
  r.gamma_0_prime = analytics::effective_relaxation(r.gamma_0, r.gamma_f, r.gamma_m);
  if (r.gamma_sq > 0.0) {
    const auto lim = analytics::decoherence_limits(r.gamma_sq, r.gamma_0_prime);
    r.var_pa_limit = lim.var_pa_inf;
    r.squeezing_limit_db = lim.squeezing_db;
    for (const auto& w : lim.warnings) r.warnings.push_back(w);
  } else {
    r.var_pa_limit = 0.25;
    r.squeezing_limit_db = 0.0;
    r.warnings.emplace_back("no drive: Gamma_sq = 0");
  }

  r.intracavity_photons = analytics::cavity_photon_steady(r.omega, r.kappa, r.gamma_m, r.gamma_f);
  r.photon_leak_rate = r.kappa * r.intracavity_photons;
  r.photon_leak_discrepancy =
      k.reported_photon_leak > 0.0 &&
      std::abs(r.photon_leak_rate - k.reported_photon_leak) > 0.1 * k.reported_photon_leak;
  if (r.photon_leak_discrepancy) {
    r.warnings.push_back("kappa <c^dag c> differs from the quoted leak rate by a factor " +
                         std::to_string(k.reported_photon_leak / r.photon_leak_rate));
  }

  r.field_tolerance_gauss = field_tolerance(d.squeezing_time);
  const auto sp = spatial_averaging_check(r.gamma_0_wall, r.gamma_sq);
  r.spatial_ratio = sp.ratio;
  r.spatial_averaging_ok = sp.pass;

  for (auto [x, name] : {std::pair{r.kappa, "kappa"}, {r.n_ph, "n_ph"}, {r.gamma_m, "gamma_m"},
                         {r.gamma_f, "gamma_f"}, {r.omega, "omega"}, {r.gamma_sq, "gamma_sq"},
                         {r.gamma_0, "gamma_0"}}) {
    require_finite(x, name);
  }
  return r;
}

nlohmann::json to_json(const DerivedRates& r) {
  return {{"cell_volume", r.cell_volume},
          {"N_cell", r.n_cell},
          {"n_cell", r.n_meta_cell},
          {"N", r.n_ground},
          {"n", r.n_meta},
          {"tau_inv", r.tau_inv},
          {"T_inv", r.t_inv},
          {"gamma_m", r.gamma_m},
          {"gamma_f", r.gamma_f},
          {"kappa", r.kappa},
          {"kappa_over_2pi", r.kappa / (2.0 * kPi)},
          {"photon_energy", r.photon_energy},
          {"photon_flux", r.photon_flux},
          {"n_ph", r.n_ph},
          {"mode_volume", r.mode_volume},
          {"waist", r.waist},
          {"E_c", r.field_per_photon},
          {"g_c", r.g_c},
          {"chi", r.chi},
          {"Omega", r.omega},
          {"Omega_over_2pi", r.omega / (2.0 * kPi)},
          {"Gamma_sq", r.gamma_sq},
          {"gamma_0_wall", r.gamma_0_wall},
          {"gamma_0_scat", r.gamma_0_scat},
          {"gamma_0", r.gamma_0},
          {"gamma_0_prime", r.gamma_0_prime},
          {"var_Pa_limit", r.var_pa_limit},
          {"squeezing_limit_db", r.squeezing_limit_db},
          {"intracavity_photons", r.intracavity_photons},
          {"photon_leak_rate", r.photon_leak_rate},
          {"photon_leak_discrepancy", r.photon_leak_discrepancy},
          {"field_tolerance_gauss", r.field_tolerance_gauss},
          {"spatial_ratio", r.spatial_ratio},
          {"spatial_averaging_ok", r.spatial_averaging_ok},
          {"warnings", r.warnings}};
}

void write_table(std::ostream& os, const DerivedRates& r) {
  const auto j = to_json(r);
  for (const auto& [key, value] : j.items()) {
    if (key == "warnings") continue;
    os << std::left << std::setw(24) << key << ' ';
    if (value.is_number()) {
      os << std::setprecision(6) << value.get<double>();
    } else {
      os << value.dump();
    }
    os << '\n';
  }
  for (const auto& w : r.warnings) os << "warning: " << w << '\n';
}

CellDesign parse_design(std::istream& is) {
  CellDesign d;
  auto& k = d.constants;
  const std::map<std::string, double*> fields = {
      {"cell_length", &d.cell_length},
      {"cell_diameter", &d.cell_diameter},
      {"pressure_torr", &d.pressure_torr},
      {"temperature", &d.temperature},
      {"n_cell", &d.n_cell},
      {"metastable_fraction", &d.metastable_fraction},
      {"polarization", &d.polarization},
      {"cavity_length", &d.cavity_length},
      {"finesse", &d.finesse},
      {"output_power", &d.output_power},
      {"wavelength", &d.wavelength},
      {"detuning", &d.detuning},
      {"squeezing_time", &d.squeezing_time},
      {"exchange_coefficient", &k.exchange_coefficient},
      {"diffusion_pressure", &k.diffusion_pressure},
      {"gamma_p", &k.gamma_p},
      {"d8", &k.d8},
      {"waist", &k.waist},
      {"scattering_geometry", &k.scattering_geometry},
      {"reported_photon_leak", &k.reported_photon_leak},
  };
  std::vector<std::string> diag;
  for (const auto& e : config::parse_key_values(is)) {
    if (e.key == "schema_version") continue;
    const auto it = fields.find(e.key);
    if (it == fields.end()) {
      diag.push_back("line " + std::to_string(e.line) + ": unknown key '" + e.key + "'");
      continue;
    }
    try {
      *it->second = config::as_double(e);
    } catch (const config::ConfigError& err) {
      for (const auto& s : err.diagnostics()) diag.push_back(s);
    }
  }
  for (const auto& v : violations(d)) diag.push_back(v);
  if (!diag.empty()) throw config::ConfigError(std::move(diag));
  return d;
}

CellDesign read_design_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config::ConfigError({"cannot open " + path});
  return parse_design(in);
}

}  // namespace he3sq::expdesign
