#pragma once

#include <iosfwd>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace he3sq::expdesign {

class DesignError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Atomic and transport constants that the design numbers depend on.
///
/// None of these is printed alongside the cell parameters, so the defaults
/// were fixed once against the published derived rates and then frozen:
///  - exchange_coefficient: metastability-exchange rate constant k with
///    1/tau = k * N_cell / V; 1.54e-16 m^3/s gives gamma_m = 5.2e6 1/s.
///  - diffusion_pressure: D p of metastables in He at 300 K, 5.47e-2 m^2 Torr/s,
///    close to the measured ~4.7e-2 and chosen to give 2.6e4 1/s wall loss.
///  - gamma_p: 2 pi 1.6e6 rad/s, natural width of the 2^3P level.
///  - d8: transition dipole of the driven 2^3S-2^3P component. The two-level
///    value from gamma_p at 1083 nm is 2.128e-29 C m; one third of the line
///    strength (angular factor) leaves 1.2289e-29 C m.
///  - waist: cavity mode waist, 3.7426e-3 m, which reproduces Omega = 2 pi 4.1e6 rad/s.
///  - scattering_geometry: cell-averaged intensity factor of the scattering rate, 2.0.
struct Constants {
  double exchange_coefficient = 1.54e-16;
  double diffusion_pressure = 5.47e-2;
  double gamma_p = 2.0 * std::numbers::pi * 1.6e6;
  double d8 = 1.2289e-29;
  double waist = 3.7426e-3;
  double scattering_geometry = 2.0;
  // photons per second leaving the cavity as quoted with the design; compared, not used
  double reported_photon_leak = 6.5e5;
};

/// Laboratory inputs. SI units except pressure (Torr); detuning in rad/s.
struct CellDesign {
  double cell_length = 0.02;
  double cell_diameter = 0.005;
  double pressure_torr = 2.0;
  double temperature = 300.0;
  double n_cell = 2.5e16;  // ground-state atoms in the cell; 0 derives it from p, T and volume
  double metastable_fraction = 5e-6;
  double polarization = 0.4;
  double cavity_length = 0.03;
  double finesse = 50.0;
  double output_power = 5e-3;
  double wavelength = 1.083e-6;
  double detuning = 2.0 * std::numbers::pi * 2e9;
  double squeezing_time = 10.0;  // s, used for the field tolerance
  Constants constants;
};

struct DerivedRates {
  double cell_volume;
  double n_cell;         // N_cell
  double n_meta_cell;    // n_cell
  double n_ground;       // N
  double n_meta;         // n
  double tau_inv;
  double t_inv;
  double gamma_m;
  double gamma_f;
  double kappa;          // rad/s
  double photon_energy;  // J
  double photon_flux;    // 1/s
  double n_ph;
  double mode_volume;
  double waist;
  double field_per_photon;  // E_c, V/m
  double g_c;
  double chi;
  double omega;
  double gamma_sq;
  double gamma_0_wall;
  double gamma_0_scat;
  double gamma_0;
  double gamma_0_prime;
  double var_pa_limit;
  double squeezing_limit_db;
  double intracavity_photons;  // <c^dag c> of the y mode
  double photon_leak_rate;     // kappa <c^dag c>
  bool photon_leak_discrepancy;
  double field_tolerance_gauss;
  double spatial_ratio;
  bool spatial_averaging_ok;
  std::vector<std::string> warnings;
};

std::vector<std::string> violations(const CellDesign& d);

DerivedRates derive_all(const CellDesign& d);

/// Lowest diffusion mode of a cylinder, D(p) [(pi/L)^2 + (j01/R)^2].
double wall_relaxation(const CellDesign& d);

/// Gamma_P g_c^2 n_ph / Delta^2 times the geometric factor.
double scattering_rate(const CellDesign& d, double g_c, double n_ph);

/// Largest guiding field in Gauss for a total squeezing time t in seconds.
double field_tolerance(double t_total);

struct SpatialCheck {
  double ratio;
  bool pass;
};

/// gamma_0_wall / Gamma_sq, passing at or above 1e3.
SpatialCheck spatial_averaging_check(double gamma_0_wall, double gamma_sq);

nlohmann::json to_json(const DerivedRates& r);
void write_table(std::ostream& os, const DerivedRates& r);

/// "key = value" lines with the CellDesign / Constants field names; '#' starts a comment.
CellDesign parse_design(std::istream& is);
CellDesign read_design_file(const std::string& path);

}  // namespace he3sq::expdesign
