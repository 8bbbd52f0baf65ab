#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "he3sq/fock.hpp"
#include "he3sq/lindblad_kernels.hpp"
#include "he3sq/model.hpp"
#include "he3sq/noise.hpp"
#include "he3sq/record.hpp"

namespace he3sq::trajectories {

using fock::StateVector;

class NormCollapseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EnsembleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class OneModeScheme {
  // Exact Kraus update exp(sqrt(G) P dY - G P^2 dt) in the eigenbasis of the truncated P.
  measurement_operator,
  // Euler-Maruyama on the nonlinear equation with Q = P - <P>, renormalized every step.
  euler_maruyama,
};

struct OneModeOptions {
  double t_end = 5.0;
  double dt = 1e-3;
  std::size_t record_every = 100;
  OneModeScheme scheme = OneModeScheme::measurement_operator;
  double top_level_tol = 1e-5;
  double norm_collapse = 0.5;
};

/// Conditional evolution of the hybridized nuclear mode under continuous readout of P.
/// homodyne_signal is 2<P>; the record is dY = 2 sqrt(G) <P> dt + dW.
TrajectoryRecord sse_one_mode(const StateVector& phi0, double gamma_sq, GaussianStream& stream,
                              const OneModeOptions& opt = {});

struct SseOptions {
  double t_end = 20.0;
  double dt = 0.02;
  std::size_t record_every = 50;
  double top_level_tol = 1e-5;
  double norm_collapse = 0.5;
};

/// min(0.02/kappa, 0.01/Gamma_sq)
double default_dt(const ThreeModeParams& p);

/// Normalized Ito diffusive unraveling of the three-mode master equation, Euler-Maruyama.
/// The cavity channel is read out as X_c with the homodyne stream; the exchange channel and,
/// when gamma_0 > 0, the decoherence channel use the exchange and decoherence streams.
TrajectoryRecord sse_three_mode(const StateVector& psi0, const ThreeModeParams& p,
                                TrajectoryStreams& streams, const SseOptions& opt = {});

/// Moments of the mixture of several trajectories with uniform weights, plus the
/// standard error of each column (jackknife for the variances).
struct EnsembleResult {
  std::vector<TrajectoryPoint> mean;
  std::vector<TrajectoryPoint> std_error;
  std::vector<TrajectoryRecord> members;
  nlohmann::json manifest;
};

/// Deterministic combination in member order; all members must share the time grid.
EnsembleResult combine(std::vector<TrajectoryRecord> members);

/// One homodyne record, one run per exchange seed. Throws EnsembleError for < 2 seeds.
EnsembleResult conditional_ensemble(const StateVector& psi0, const ThreeModeParams& p,
                                    const NoiseSeeds& seeds, const SseOptions& opt = {},
                                    kernels::Backend backend = kernels::Backend::openmp);

/// Independent homodyne and exchange streams per trajectory, derived from base_seed.
EnsembleResult unconditional_ensemble(const StateVector& psi0, const ThreeModeParams& p,
                                      std::uint64_t base_seed, std::size_t n_trajectories,
                                      const SseOptions& opt = {},
                                      kernels::Backend backend = kernels::Backend::openmp);

/// Ensemble of one-mode runs with homodyne seeds derived from base_seed.
EnsembleResult one_mode_ensemble(const StateVector& phi0, double gamma_sq,
                                 std::uint64_t base_seed, std::size_t n_trajectories,
                                 const OneModeOptions& opt = {},
                                 kernels::Backend backend = kernels::Backend::openmp);

/// Cumulative trapezoidal mean of homodyne_signal over the recorded grid.
std::vector<double> homodyne_time_average(const TrajectoryRecord& record);

struct AsymptoteCheck {
  double time_average;  // late-time cumulative mean of the signal
  double predicted;     // 2 sqrt(Gamma_sq / kappa) <P_a> at the final time
};

AsymptoteCheck homodyne_asymptote_check(const TrajectoryRecord& record, double gamma_sq,
                                        double kappa);

/// Ordinary least-squares slope of ys against xs.
double regression_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace he3sq::trajectories
