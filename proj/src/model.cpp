#include "he3sq/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace he3sq {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::ostringstream os;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) os << "; ";
    os << items[i];
  }
  return os.str();
}

void check_rate(std::vector<std::string>& out, const char* name, double value) {
  if (!std::isfinite(value)) {
    out.push_back(std::string("non-finite rate: ") + name);
  } else if (value < 0.0) {
    out.push_back(std::string("negative rate: ") + name);
  }
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::invalid_argument("invalid parameters: " + join(violations)),
      violations_(std::move(violations)) {}

std::vector<std::string> violations(const ThreeModeParams& p) {
  std::vector<std::string> out;
  check_rate(out, "omega", p.omega);
  check_rate(out, "kappa", p.kappa);
  check_rate(out, "gamma_m", p.gamma_m);
  check_rate(out, "gamma_f", p.gamma_f);
  check_rate(out, "gamma_0", p.gamma_0);
  if (p.gamma_f > p.gamma_m) out.emplace_back("gamma_f > gamma_m");
  if (p.paper_regime && !(p.kappa > p.gamma_m && p.gamma_m > p.gamma_f)) {
    out.emplace_back("paper regime requires kappa > gamma_m > gamma_f");
  }
  return out;
}

std::vector<std::string> violations(const SemiclassicalParams& p) {
  std::vector<std::string> out;
  if (!(p.polarization >= 0.0 && p.polarization <= 1.0)) {
    out.emplace_back("polarization outside [0,1]");
  }
  if (!(p.n_ground_cell >= 0.0)) out.emplace_back("negative count: N_cell");
  if (!(p.n_meta_cell >= 0.0)) out.emplace_back("negative count: n_cell");
  if (p.n_meta_cell > p.n_ground_cell) out.emplace_back("n_cell > N_cell");
  check_rate(out, "tau_inv", p.tau_inv);
  check_rate(out, "chi", p.chi);
  if (!(p.sx >= 0.0)) out.emplace_back("negative photon-spin amplitude Sx");
  return out;
}

ThreeModeParams validate(const ThreeModeParams& p) {
  auto v = violations(p);
  if (!v.empty()) throw ValidationError(std::move(v));
  return p;
}

SemiclassicalParams validate(const SemiclassicalParams& p) {
  auto v = violations(p);
  if (!v.empty()) throw ValidationError(std::move(v));
  return p;
}

std::vector<std::string> truncation_violations(const std::vector<int>& dims) {
  std::vector<std::string> out;
  if (dims.empty()) out.emplace_back("truncation list is empty");
  for (int d : dims) {
    if (d < 2) {
      out.emplace_back("truncation < 2");
      break;
    }
  }
  return out;
}

ScaledParams nondimensionalize(const ThreeModeParams& p) {
  if (!(p.kappa > 0.0)) throw ValidationError({"kappa must be > 0 to nondimensionalize"});
  ScaledParams s;
  s.kappa_unit = p.kappa;
  s.scaled = p;
  s.scaled.omega = p.omega / p.kappa;
  s.scaled.kappa = 1.0;
  s.scaled.gamma_m = p.gamma_m / p.kappa;
  s.scaled.gamma_f = p.gamma_f / p.kappa;
  s.scaled.gamma_0 = p.gamma_0 / p.kappa;
  return s;
}

ThreeModeParams redimensionalize(const ScaledParams& s) {
  ThreeModeParams p = s.scaled;
  const double k = s.kappa_unit;
  p.omega *= k;
  p.kappa *= k;
  p.gamma_m *= k;
  p.gamma_f *= k;
  p.gamma_0 *= k;
  return p;
}

ThreeModeParams fig3_params(double gamma_0) {
  ThreeModeParams p;
  p.omega = 0.1;
  p.kappa = 1.0;
  p.gamma_m = 0.1;
  p.gamma_f = 0.01;
  p.gamma_0 = gamma_0;
  p.paper_regime = true;
  return p;
}

double max_rate(const ThreeModeParams& p) {
  return std::max({p.omega, p.kappa, 2.0 * p.gamma_m + p.gamma_0, 2.0 * p.gamma_f});
}

}  // namespace he3sq
