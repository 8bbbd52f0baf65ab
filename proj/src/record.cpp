#include "he3sq/record.hpp"

#include <ostream>

#include "he3sq/csv.hpp"

namespace he3sq {

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryPoint>& points,
                          const std::vector<double>* purity) {
  std::vector<std::string> header{"t",       "mean_Pa",         "var_Pa",
                                  "mean_Xa", "var_Xa",          "homodyne_signal",
                                  "homodyne_cummean", "norm_error"};
  if (purity) header.emplace_back("purity");
  csv::Writer w(os, header);
  std::vector<double> row;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    row = {p.t, p.mean_pa, p.var_pa, p.mean_xa, p.var_xa, p.homodyne_signal, p.homodyne_cummean,
           p.norm_error};
    if (purity) row.push_back(purity->at(i));
    w.row(row);
  }
}

nlohmann::json to_json(const ThreeModeParams& p) {
  return {{"omega", p.omega},     {"kappa", p.kappa},     {"gamma_m", p.gamma_m},
          {"gamma_f", p.gamma_f}, {"gamma_0", p.gamma_0}, {"paper_regime", p.paper_regime}};
}

ThreeModeParams three_mode_from_json(const nlohmann::json& j) {
  ThreeModeParams p;
  p.omega = j.at("omega").get<double>();
  p.kappa = j.at("kappa").get<double>();
  p.gamma_m = j.at("gamma_m").get<double>();
  p.gamma_f = j.at("gamma_f").get<double>();
  p.gamma_0 = j.value("gamma_0", 0.0);
  p.paper_regime = j.value("paper_regime", false);
  return p;
}

namespace {
const char* kQuadNames[] = {"Xa", "Pa", "Xb", "Pb", "Xc", "Pc"};
const char* kModeNames[] = {"a", "b", "c"};
}  // namespace

std::vector<std::string> moment_columns(int modes) {
  std::vector<std::string> cols;
  for (int m = 0; m < modes; ++m) {
    const std::string x = kQuadNames[2 * m];
    const std::string p = kQuadNames[2 * m + 1];
    cols.push_back("mean_" + x);
    cols.push_back("mean_" + p);
    cols.push_back("var_" + x);
    cols.push_back("var_" + p);
    cols.push_back(std::string("mean_n_") + kModeNames[m]);
  }
  for (int j = 0; j < 2 * modes; ++j) {
    for (int k = j + 1; k < 2 * modes; ++k) {
      cols.push_back(std::string("cov_") + kQuadNames[j] + kQuadNames[k]);
    }
  }
  return cols;
}

std::vector<double> moment_values(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                  const Eigen::VectorXd& number) {
  const auto modes = static_cast<int>(number.size());
  std::vector<double> v;
  for (int m = 0; m < modes; ++m) {
    v.push_back(mean(2 * m));
    v.push_back(mean(2 * m + 1));
    v.push_back(cov(2 * m, 2 * m));
    v.push_back(cov(2 * m + 1, 2 * m + 1));
    v.push_back(number(m));
  }
  for (int j = 0; j < 2 * modes; ++j) {
    for (int k = j + 1; k < 2 * modes; ++k) v.push_back(cov(j, k));
  }
  return v;
}

}  // namespace he3sq
