#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "he3sq/model.hpp"
#include "he3sq/noise.hpp"
#include "he3sq/record.hpp"

namespace he3sq::gaussian {

/// Means and symmetrized covariance of the quadratures (X_a, P_a, X_b, P_b, X_c, P_c),
/// or the leading subset for fewer modes. Vacuum: zero mean, cov = 1/4.
struct GaussianState {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  static GaussianState vacuum(int modes);
  int modes() const { return static_cast<int>(mean.size() / 2); }

  /// Smallest eigenvalue of cov + (i/4) sigma; negative means unphysical.
  double uncertainty_margin() const;
  double purity() const;
};

/// sigma with [r_j, r_k] = (i/2) sigma_jk.
Eigen::MatrixXd symplectic_form(int modes);

class CovarianceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A jump operator L = sum_j coeffs_j r_j, linear in the quadratures.
struct Channel {
  std::string name;
  Eigen::VectorXcd coeffs;
  bool monitored = false;
  double scale = 1.0;  // signal = <L + L^dag> / scale
};

/// Quadratic Hamiltonian H = (1/2) r^T G r with linear jump operators; the drift,
/// diffusion and measurement gains are assembled from the channel coefficients.
class LinearModel {
 public:
  LinearModel(int modes, Eigen::MatrixXd hamiltonian, std::vector<Channel> channels);

  int modes() const { return modes_; }
  const Eigen::MatrixXd& drift() const { return drift_; }
  const Eigen::MatrixXd& diffusion() const { return diffusion_; }
  const std::vector<Channel>& channels() const { return channels_; }
  std::vector<std::size_t> monitored() const;

  /// Innovation gain of a homodyne record of channel `c` (pure detection).
  Eigen::VectorXd gain(const Eigen::MatrixXd& cov, const Channel& c) const;
  /// <L + L^dag> for the given mean.
  double expectation_sum(const Eigen::VectorXd& mean, const Channel& c) const;
  /// dV/dt; conditional flows subtract the gain outer products of monitored channels.
  Eigen::MatrixXd covariance_rate(const Eigen::MatrixXd& cov, bool conditional) const;

 private:
  int modes_;
  Eigen::MatrixXd sigma_;
  Eigen::MatrixXd drift_;
  Eigen::MatrixXd diffusion_;
  std::vector<Channel> channels_;
};

/// H = Omega P_b P_c; C_c monitored (homodyne of X_c); C_m and C_0 unmonitored.
LinearModel three_mode_model(const ThreeModeParams& p);
/// C_s = sqrt(Gamma_sq) P monitored. The identity jump C_d has no effect and is omitted.
LinearModel one_mode_model(double gamma_sq);

struct GaussianSample {
  double t;
  GaussianState state;
  double signal = 0.0;          // <L + L^dag>/scale of the first monitored channel
  double signal_cummean = 0.0;
  double current = 0.0;         // averaged over the record window
};

/// RK4 for the first and second moments.
std::vector<GaussianSample> evolve_unconditional(const GaussianState& g0, const LinearModel& m,
                                                 double t_end, double dt,
                                                 std::size_t record_every = 1);

/// Deterministic conditional covariance (RK4) with Euler-Maruyama conditional means.
/// One stream per monitored channel, in channel order.
std::vector<GaussianSample> evolve_conditional(const GaussianState& g0, const LinearModel& m,
                                               std::vector<GaussianStream>& streams,
                                               double t_end, double dt,
                                               std::size_t record_every = 1);

/// Many homodyne records sharing one covariance flow; batches[i] holds the streams
/// of record i. Means are advanced record-parallel.
std::vector<std::vector<GaussianSample>> evolve_conditional_batch(
    const GaussianState& g0, const LinearModel& m,
    std::vector<std::vector<GaussianStream>>& batches, double t_end, double dt,
    std::size_t record_every = 1);

/// Converts a nuclear-mode view of the samples into trajectory points.
std::vector<TrajectoryPoint> to_points(const std::vector<GaussianSample>& samples);

/// Columns t, then mean_{X,P}{a,b,c}, var_{X,P}{a,b,c}, mean_n_{a,b,c}, purity.
void write_moment_csv(std::ostream& os, const std::vector<GaussianSample>& samples);

}  // namespace he3sq::gaussian
