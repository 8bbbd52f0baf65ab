#include "he3sq/semiclassical.hpp"

#include <cmath>
#include <ostream>

#include <unsupported/Eigen/MatrixFunctions>

#include "he3sq/csv.hpp"
#include "he3sq/model.hpp"

namespace he3sq::semiclassical {

namespace {

void require_polarization(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError({"polarization outside [0,1]"});
}

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

// RK4 amplification stays bounded for real negative eigenvalues with |lambda dt| < 2.785.
constexpr double kRk4RealStability = 2.785;

void check_step(const LinearizedCoefficients& c, double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end >= 0.0)) throw std::invalid_argument("need dt > 0 and t_end >= 0");
  const double fastest = std::max(0.5 * c.kappa, c.gamma_m + c.gamma_f);
  if (fastest * dt >= kRk4RealStability) {
    throw InstabilityError("step too large: rate*dt = " + std::to_string(fastest * dt) +
                           " exceeds the RK4 stability limit");
  }
}

std::size_t step_count(double t_end, double dt) {
  return static_cast<std::size_t>(std::llround(std::ceil(t_end / dt - 1e-9)));
}

}  // namespace

SteadySpins steady_spins(double polarization, double n_ground_cell, double n_meta_cell,
                         double n_ph) {
  require_polarization(polarization);
  const double p = polarization;
  SteadySpins s;
  s.ix = p * n_ground_cell / 2.0;
  s.n_ground = 2.0 * s.ix;
  s.kx = p * (1.0 - p * p) / (3.0 + p * p) * n_meta_cell / 2.0;
  s.n_meta = 2.0 * s.kx;
  s.sx = n_ph / 2.0;
  return s;
}

ExchangeRates exchange_rates(double polarization, double tau_inv, double t_inv) {
  require_polarization(polarization);
  if (tau_inv < 0.0 || t_inv < 0.0) throw ValidationError({"negative rate: collision rate"});
  const double p2 = polarization * polarization;
  const double common = (4.0 + p2) / (8.0 - p2);
  return {common * (1.0 - p2) / (3.0 + p2) * t_inv, common * tau_inv};
}

Vec6 FluctuationState::to_vector() const {
  Vec6 v;
  v << dSz, dSy, dIz, dIy, dKz, dKy;
  return v;
}

FluctuationState FluctuationState::from_vector(const Vec6& v) {
  return {v(0), v(1), v(2), v(3), v(4), v(5)};
}

Mat6 generator(const LinearizedCoefficients& c) {
  enum { Sz, Sy, Iz, Iy, Kz, Ky };
  Mat6 m = Mat6::Zero();
  m(Sz, Sz) = -c.kappa / 2.0;
  m(Sy, Sy) = -c.kappa / 2.0;
  m(Sy, Kz) = c.chi * c.sx;
  m(Iz, Iz) = -c.gamma_f;
  m(Iz, Kz) = c.gamma_m;
  m(Iy, Iy) = -c.gamma_f;
  m(Iy, Ky) = c.gamma_m;
  m(Kz, Kz) = -c.gamma_m;
  m(Kz, Iz) = c.gamma_f;
  m(Ky, Ky) = -c.gamma_m;
  m(Ky, Iy) = c.gamma_f;
  m(Ky, Sz) = c.chi * c.kx;
  return m;
}

std::vector<FluctuationSample> integrate_linearized(const FluctuationState& x0,
                                                    const LinearizedCoefficients& c,
                                                    double t_end, double dt,
                                                    std::size_t record_every) {
  check_step(c, t_end, dt);
  if (record_every == 0) record_every = 1;
  const Mat6 m = generator(c);
  const std::size_t n = step_count(t_end, dt);
  Vec6 x = x0.to_vector();
  std::vector<FluctuationSample> out;
  out.push_back({0.0, x0});
  for (std::size_t k = 1; k <= n; ++k) {
    const Vec6 k1 = m * x;
    const Vec6 k2 = m * (x + 0.5 * dt * k1);
    const Vec6 k3 = m * (x + 0.5 * dt * k2);
    const Vec6 k4 = m * (x + dt * k3);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite()) throw InstabilityError("non-finite fluctuation amplitude");
    if (k % record_every == 0 || k == n) out.push_back({k * dt, FluctuationState::from_vector(x)});
  }
  return out;
}

std::vector<FluctuationSample> integrate_linearized_exact(const FluctuationState& x0,
                                                          const LinearizedCoefficients& c,
                                                          double t_end, double dt,
                                                          std::size_t record_every) {
  if (!(dt > 0.0) || !(t_end >= 0.0)) throw std::invalid_argument("need dt > 0 and t_end >= 0");
  if (record_every == 0) record_every = 1;
  const Mat6 m = generator(c);
  const std::size_t n = step_count(t_end, dt);
  const Vec6 v0 = x0.to_vector();
  std::vector<FluctuationSample> out;
  out.push_back({0.0, x0});
  for (std::size_t k = 1; k <= n; ++k) {
    if (k % record_every != 0 && k != n) continue;
    const double t = k * dt;
    const Mat6 prop = (m * t).exp();
    out.push_back({t, FluctuationState::from_vector(prop * v0)});
  }
  return out;
}

void write_csv(std::ostream& os, const std::vector<FluctuationSample>& series) {
  csv::Writer w(os, {"t", "dSz", "dSy", "dIz", "dIy", "dKz", "dKy"});
  for (const auto& s : series) {
    w.row({s.t, s.x.dSz, s.x.dSy, s.x.dIz, s.x.dIy, s.x.dKz, s.x.dKy});
  }
}

}  // namespace he3sq::semiclassical
