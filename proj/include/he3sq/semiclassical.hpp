#pragma once

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace he3sq::semiclassical {

/// Stationary collective spins for x-polarized nuclei and light.
struct SteadySpins {
  double n_ground;  // N = P * N_cell
  double n_meta;    // n = 2 Kx
  double ix;
  double kx;
  double sx;
};

SteadySpins steady_spins(double polarization, double n_ground_cell, double n_meta_cell,
                         double n_ph);

struct ExchangeRates {
  double gamma_f;
  double gamma_m;
};

/// Effective metastability-exchange rates from the per-atom collision rates.
ExchangeRates exchange_rates(double polarization, double tau_inv, double t_inv);

/// Classical transverse fluctuations of the light (S), nuclear (I) and
/// metastable (K) spins.
struct FluctuationState {
  double dSz = 0.0;
  double dSy = 0.0;
  double dIz = 0.0;
  double dIy = 0.0;
  double dKz = 0.0;
  double dKy = 0.0;

  Eigen::Matrix<double, 6, 1> to_vector() const;
  static FluctuationState from_vector(const Eigen::Matrix<double, 6, 1>& v);
};

struct LinearizedCoefficients {
  double kappa = 0.0;
  double gamma_f = 0.0;
  double gamma_m = 0.0;
  double chi = 0.0;
  double sx = 0.0;
  double kx = 0.0;
};

struct FluctuationSample {
  double t;
  FluctuationState x;
};

class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Generator M of d/dt x = M x in the component order (dSz, dSy, dIz, dIy, dKz, dKy).
Eigen::Matrix<double, 6, 6> generator(const LinearizedCoefficients& c);

/// Fixed-step RK4. Samples every `record_every` steps, plus the final time.
std::vector<FluctuationSample> integrate_linearized(const FluctuationState& x0,
                                                    const LinearizedCoefficients& c,
                                                    double t_end, double dt,
                                                    std::size_t record_every = 1);

/// Same grid as integrate_linearized, evaluated with exp(M t).
std::vector<FluctuationSample> integrate_linearized_exact(const FluctuationState& x0,
                                                          const LinearizedCoefficients& c,
                                                          double t_end, double dt,
                                                          std::size_t record_every = 1);

/// Columns t,dSz,dSy,dIz,dIy,dKz,dKy.
void write_csv(std::ostream& os, const std::vector<FluctuationSample>& series);

}  // namespace he3sq::semiclassical
