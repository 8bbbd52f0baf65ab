#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace he3sq {

// Rates are in 1/s and angular frequencies in rad/s, unless the record came
// out of nondimensionalize(), in which case everything is in units of kappa.

/// Rates and couplings of the three-mode (nuclear a, metastable b, cavity c) model.
struct ThreeModeParams {
  double omega = 0.0;    // effective Faraday coupling, rad/s
  double kappa = 0.0;    // cavity energy decay, 1/s
  double gamma_m = 0.0;  // metastable exchange rate, 1/s
  double gamma_f = 0.0;  // ground-state exchange rate, 1/s
  double gamma_0 = 0.0;  // metastable decoherence, 1/s
  // When set, kappa > gamma_m > gamma_f must hold strictly.
  bool paper_regime = false;

  bool operator==(const ThreeModeParams&) const = default;
};

/// Cell-level quantities of the semiclassical model. T is never stored:
/// 1/T = (n_cell / N_cell) / tau.
struct SemiclassicalParams {
  double polarization = 0.0;
  double n_ground_cell = 0.0;  // N_cell
  double n_meta_cell = 0.0;    // n_cell
  double tau_inv = 0.0;        // exchange rate per metastable atom, 1/s
  double chi = 0.0;            // single-photon Faraday constant, 1/s
  double sx = 0.0;             // n_ph / 2

  double t_inv() const { return n_ground_cell > 0.0 ? tau_inv * n_meta_cell / n_ground_cell : 0.0; }

  bool operator==(const SemiclassicalParams&) const = default;
};

class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

std::vector<std::string> violations(const ThreeModeParams& p);
std::vector<std::string> violations(const SemiclassicalParams& p);

/// Returns the record unchanged iff every invariant holds, else throws ValidationError.
ThreeModeParams validate(const ThreeModeParams& p);
SemiclassicalParams validate(const SemiclassicalParams& p);

/// Violations for a list of per-mode Fock truncations (each must be >= 2).
std::vector<std::string> truncation_violations(const std::vector<int>& dims);

struct ScaledParams {
  ThreeModeParams scaled;  // kappa == 1
  double kappa_unit = 1.0; // the kappa the record was divided by
};

ScaledParams nondimensionalize(const ThreeModeParams& p);
ThreeModeParams redimensionalize(const ScaledParams& s);

/// Dimensionless parameter set of the reference simulations:
/// Omega/kappa = 1/10, gamma_m/kappa = 1/10, gamma_f/kappa = 1/100.
ThreeModeParams fig3_params(double gamma_0 = 0.0);

/// Largest rate the explicit integrators have to resolve.
double max_rate(const ThreeModeParams& p);

}  // namespace he3sq
