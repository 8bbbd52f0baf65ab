#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "he3sq/model.hpp"
#include "json.hpp"

namespace he3sq::analytics {

class AnalyticsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Omega^2 gamma_f / (kappa gamma_m)
double squeezing_rate(double omega, double kappa, double gamma_f, double gamma_m);
double squeezing_rate(const ThreeModeParams& p);

/// Conditional variance of P_a: (1/4)(1 + r Gamma_sq t)/(1 + Gamma_sq t), r = gamma_f/gamma_m.
double var_pa(double t, double gamma_sq, double ratio);

/// Squeezing floor gamma_f / (4 gamma_m).
double intrinsic_floor(double ratio);

/// Steady intracavity photon number (Omega/2kappa)^2 (1 - 2 gamma_m / (kappa + 2(gamma_m + gamma_f))).
double cavity_photon_steady(double omega, double kappa, double gamma_m, double gamma_f);

/// gamma_0 gamma_f / gamma_m
double effective_relaxation(double gamma_0, double gamma_f, double gamma_m);

struct DecoherenceLimits {
  double var_pa_inf;
  double var_xa_inf;
  double squeezing_db;
  std::vector<std::string> warnings;  // set when Gamma_sq / gamma_0' < 10
};

DecoherenceLimits decoherence_limits(double gamma_sq, double gamma_0_prime);

/// 2 sqrt(Gamma_sq / kappa) <P_a>
double homodyne_asymptote(double gamma_sq, double kappa, double mean_pa);

struct QndCoupling {
  double omega_eff;  // Omega sqrt(n/N)
  double chi_eff;    // chi n/N
};

QndCoupling effective_qnd_coupling(double omega, double chi, double n, double n_ground);

/// 10 log10(var / (1/4))
double squeezing_db(double var);

/// One evaluated closed form.
struct Prediction {
  std::string formula_id;
  std::string name;
  double value;
  std::string unit;
  nlohmann::json inputs;
};

nlohmann::json to_json(const Prediction& p);

/// Every closed form evaluated on one parameter set; Gamma_sq t samples var_pa.
std::vector<Prediction> predictions(const ThreeModeParams& p, double t, double mean_pa = 0.0);

/// Single JSON object keyed by formula id.
nlohmann::json report(const std::vector<Prediction>& preds);

/// Reference curves shared with the plotting scripts: var_pa on a Gamma_sq t grid for the
/// reference ratios, the decoherence plateau and a homodyne asymptote table.
nlohmann::json golden_vectors();

struct GoldenMismatch {
  std::string key;
  double expected;
  double actual;
};

/// Re-evaluates a golden file and lists every entry off by more than tol (absolute).
std::vector<GoldenMismatch> check_golden(const nlohmann::json& golden, double tol = 1e-12);

}  // namespace he3sq::analytics
