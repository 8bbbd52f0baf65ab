#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "he3sq/model.hpp"
#include "json.hpp"

namespace he3sq {

/// One recorded time of a conditional trajectory (or of an ensemble average).
/// Pa/Xa refer to the nuclear mode; in one-mode runs they are P_alpha/X_alpha.
struct TrajectoryPoint {
  double t = 0.0;
  double mean_pa = 0.0;
  double var_pa = 0.0;
  double mean_xa = 0.0;
  double var_xa = 0.0;
  double pa2 = 0.0;  // <P_a^2>
  double xa2 = 0.0;  // <X_a^2>
  double homodyne_signal = 0.0;   // <c + c^dag> (one-mode: 2 <P_alpha>)
  double homodyne_cummean = 0.0;  // (1/t) int_0^t signal, integrated every step
  double homodyne_current = 0.0;  // record increment / dt, averaged over the record window
  double mean_n_c = 0.0;
  double norm_error = 0.0;
  double top_level_pop = 0.0;
};

struct TrajectoryRecord {
  std::vector<TrajectoryPoint> points;
  nlohmann::json manifest;  // parameters, seeds, dt, truncation, code version
};

nlohmann::json to_json(const ThreeModeParams& p);
ThreeModeParams three_mode_from_json(const nlohmann::json& j);

/// Columns t,mean_Pa,var_Pa,mean_Xa,var_Xa,homodyne_signal,homodyne_cummean,norm_error,
/// followed by purity when given.
void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryPoint>& points,
                          const std::vector<double>* purity = nullptr);

/// Column names of a full moment table for `modes` modes: mean_Xa, mean_Pa, var_Xa,
/// var_Pa, mean_n_a per mode, then the off-diagonal covariances cov_<r_j><r_k>.
std::vector<std::string> moment_columns(int modes);
std::vector<double> moment_values(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                  const Eigen::VectorXd& number);

}  // namespace he3sq
