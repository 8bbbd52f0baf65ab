#include "he3sq/gaussian.hpp"

#include <cmath>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "he3sq/csv.hpp"

namespace he3sq::gaussian {

namespace {

using cplx = std::complex<double>;

std::size_t steps_for(double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end >= 0.0)) throw std::invalid_argument("need dt > 0 and t_end >= 0");
  return static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
}

Eigen::VectorXcd ladder(int modes, int mode, cplx weight) {
  // weight * (X + i P) of the given mode
  Eigen::VectorXcd l = Eigen::VectorXcd::Zero(2 * modes);
  l(2 * mode) = weight;
  l(2 * mode + 1) = weight * cplx(0.0, 1.0);
  return l;
}

void check_covariance(const Eigen::MatrixXd& cov, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9) {
    throw CovarianceError("covariance lost positivity at t=" + std::to_string(t));
  }
}

Eigen::VectorXd mode_numbers(const GaussianState& g) {
  Eigen::VectorXd n(g.modes());
  for (int m = 0; m < g.modes(); ++m) {
    n(m) = g.cov(2 * m, 2 * m) + g.cov(2 * m + 1, 2 * m + 1) + g.mean(2 * m) * g.mean(2 * m) +
           g.mean(2 * m + 1) * g.mean(2 * m + 1) - 0.5;
  }
  return n;
}

}  // namespace

GaussianState GaussianState::vacuum(int modes) {
  return {Eigen::VectorXd::Zero(2 * modes), 0.25 * Eigen::MatrixXd::Identity(2 * modes, 2 * modes)};
}

double GaussianState::uncertainty_margin() const {
  const Eigen::MatrixXcd h =
      cov.cast<cplx>() + cplx(0.0, 0.25) * symplectic_form(modes()).cast<cplx>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double GaussianState::purity() const { return 1.0 / std::sqrt((4.0 * cov).determinant()); }

Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int m = 0; m < modes; ++m) {
    s(2 * m, 2 * m + 1) = 1.0;
    s(2 * m + 1, 2 * m) = -1.0;
  }
  return s;
}

LinearModel::LinearModel(int modes, Eigen::MatrixXd hamiltonian, std::vector<Channel> channels)
    : modes_(modes), sigma_(symplectic_form(modes)), channels_(std::move(channels)) {
  const int n = 2 * modes;
  if (hamiltonian.rows() != n || hamiltonian.cols() != n) {
    throw std::invalid_argument("Hamiltonian matrix has the wrong size");
  }
  // Heisenberg picture with [r_j, r_k] = (i/2) sigma_jk:
  //   i[H, r] = (1/2) sigma G r, and each channel adds -(1/2) sigma Im(l l^dag) r
  //   to the drift and (1/4) sigma Re(l l^dag) sigma^T to the diffusion.
  drift_ = 0.5 * sigma_ * hamiltonian;
  diffusion_ = Eigen::MatrixXd::Zero(n, n);
  for (const auto& c : channels_) {
    if (c.coeffs.size() != n) throw std::invalid_argument("channel " + c.name + " has wrong size");
    const Eigen::MatrixXcd llh = c.coeffs * c.coeffs.adjoint();
    drift_ -= 0.5 * sigma_ * llh.imag();
    diffusion_ += 0.25 * sigma_ * llh.real() * sigma_.transpose();
  }
}

std::vector<std::size_t> LinearModel::monitored() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    if (channels_[i].monitored) out.push_back(i);
  }
  return out;
}

Eigen::VectorXd LinearModel::gain(const Eigen::MatrixXd& cov, const Channel& c) const {
  // <{dr, dL} + ...> = 2 V Re(l) - (1/2) sigma Im(l)
  return 2.0 * cov * c.coeffs.real() - 0.5 * sigma_ * c.coeffs.imag();
}

double LinearModel::expectation_sum(const Eigen::VectorXd& mean, const Channel& c) const {
  return 2.0 * c.coeffs.real().dot(mean);
}

Eigen::MatrixXd LinearModel::covariance_rate(const Eigen::MatrixXd& cov, bool conditional) const {
  Eigen::MatrixXd rate = drift_ * cov + cov * drift_.transpose() + diffusion_;
  if (conditional) {
    for (const auto& c : channels_) {
      if (!c.monitored) continue;
      const Eigen::VectorXd b = gain(cov, c);
      rate.noalias() -= b * b.transpose();
    }
  }
  return rate;
}

LinearModel three_mode_model(const ThreeModeParams& p) {
  validate(p);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(6, 6);
  g(3, 5) = p.omega;  // P_b P_c
  g(5, 3) = p.omega;
  std::vector<Channel> ch;
  if (p.kappa > 0.0) {
    ch.push_back({"cavity", ladder(3, 2, std::sqrt(p.kappa)), true, std::sqrt(p.kappa)});
  }
  if (p.gamma_m > 0.0 || p.gamma_f > 0.0) {
    Eigen::VectorXcd l = ladder(3, 1, -std::sqrt(2.0 * p.gamma_m)) +
                         ladder(3, 0, std::sqrt(2.0 * p.gamma_f));
    ch.push_back({"exchange", l, false, 1.0});
  }
  if (p.gamma_0 > 0.0) ch.push_back({"decoherence", ladder(3, 1, std::sqrt(p.gamma_0)), false, 1.0});
  return LinearModel(3, g, std::move(ch));
}

LinearModel one_mode_model(double gamma_sq) {
  if (!(gamma_sq >= 0.0)) throw ValidationError({"negative rate: gamma_sq"});
  Eigen::VectorXcd l = Eigen::VectorXcd::Zero(2);
  l(1) = std::sqrt(gamma_sq);
  std::vector<Channel> ch{{"squeezing", l, true, std::sqrt(gamma_sq)}};
  return LinearModel(1, Eigen::MatrixXd::Zero(2, 2), std::move(ch));
}

std::vector<GaussianSample> evolve_unconditional(const GaussianState& g0, const LinearModel& m,
                                                 double t_end, double dt,
                                                 std::size_t record_every) {
  const std::size_t n = steps_for(t_end, dt);
  const double h = n > 0 ? t_end / static_cast<double>(n) : 0.0;
  if (record_every == 0) record_every = 1;
  const Eigen::MatrixXd& a = m.drift();
  GaussianState g = g0;
  std::vector<GaussianSample> out;
  out.push_back({0.0, g});
  for (std::size_t s = 1; s <= n; ++s) {
    const Eigen::VectorXd m1 = a * g.mean;
    const Eigen::VectorXd m2 = a * (g.mean + 0.5 * h * m1);
    const Eigen::VectorXd m3 = a * (g.mean + 0.5 * h * m2);
    const Eigen::VectorXd m4 = a * (g.mean + h * m3);
    g.mean += h / 6.0 * (m1 + 2.0 * m2 + 2.0 * m3 + m4);
    const Eigen::MatrixXd c1 = m.covariance_rate(g.cov, false);
    const Eigen::MatrixXd c2 = m.covariance_rate(g.cov + 0.5 * h * c1, false);
    const Eigen::MatrixXd c3 = m.covariance_rate(g.cov + 0.5 * h * c2, false);
    const Eigen::MatrixXd c4 = m.covariance_rate(g.cov + h * c3, false);
    g.cov += h / 6.0 * (c1 + 2.0 * c2 + 2.0 * c3 + c4);
    if (s % record_every == 0 || s == n) {
      const double t = static_cast<double>(s) * h;
      check_covariance(g.cov, t);
      out.push_back({t, g});
    }
  }
  return out;
}

std::vector<std::vector<GaussianSample>> evolve_conditional_batch(
    const GaussianState& g0, const LinearModel& m,
    std::vector<std::vector<GaussianStream>>& batches, double t_end, double dt,
    std::size_t record_every) {
  const std::size_t n = steps_for(t_end, dt);
  const double h = n > 0 ? t_end / static_cast<double>(n) : 0.0;
  if (record_every == 0) record_every = 1;
  const auto mon = m.monitored();
  for (const auto& b : batches) {
    if (b.size() != mon.size()) {
      throw std::invalid_argument("need one stream per monitored channel");
    }
  }
  const Eigen::MatrixXd& a = m.drift();
  const std::size_t nrec = batches.size();
  const Eigen::Index dim = g0.mean.size();

  struct MeanState {
    Eigen::VectorXd mean;
    double integral = 0.0;
    double window = 0.0;
  };
  std::vector<MeanState> means(nrec, MeanState{g0.mean});
  std::vector<std::vector<GaussianSample>> out(nrec);

  auto signal_of = [&](const Eigen::VectorXd& mean) {
    if (mon.empty()) return 0.0;
    const auto& c = m.channels()[mon[0]];
    return m.expectation_sum(mean, c) / c.scale;
  };
  for (std::size_t r = 0; r < nrec; ++r) {
    const double s0 = signal_of(g0.mean);
    out[r].push_back({0.0, g0, s0, s0, 0.0});
  }

  // Gains for a block of steps are computed once and shared by every record.
  constexpr std::size_t kBlock = 1024;
  Eigen::MatrixXd cov = g0.cov;
  std::vector<Eigen::MatrixXd> gains(kBlock, Eigen::MatrixXd(dim, static_cast<Eigen::Index>(mon.size())));
  std::vector<Eigen::MatrixXd> covs(kBlock);
  std::size_t step = 0;
  while (step < n) {
    const std::size_t block = std::min(kBlock, n - step);
    for (std::size_t k = 0; k < block; ++k) {
      for (std::size_t c = 0; c < mon.size(); ++c) {
        gains[k].col(static_cast<Eigen::Index>(c)) = m.gain(cov, m.channels()[mon[c]]);
      }
      const Eigen::MatrixXd c1 = m.covariance_rate(cov, true);
      const Eigen::MatrixXd c2 = m.covariance_rate(cov + 0.5 * h * c1, true);
      const Eigen::MatrixXd c3 = m.covariance_rate(cov + 0.5 * h * c2, true);
      const Eigen::MatrixXd c4 = m.covariance_rate(cov + h * c3, true);
      cov += h / 6.0 * (c1 + 2.0 * c2 + 2.0 * c3 + c4);
      covs[k] = cov;
      const std::size_t s = step + k + 1;
      if (s % record_every == 0 || s == n) check_covariance(cov, static_cast<double>(s) * h);
    }

#pragma omp parallel for schedule(static)
    for (std::size_t r = 0; r < nrec; ++r) {
      auto& ms = means[r];
      auto& streams = batches[r];
      Eigen::VectorXd dm(dim);
      for (std::size_t k = 0; k < block; ++k) {
        const double sig = signal_of(ms.mean);
        dm.noalias() = h * (a * ms.mean);
        double record_increment = 0.0;
        for (std::size_t c = 0; c < mon.size(); ++c) {
          const double dw = streams[c].increment(h);
          dm += gains[k].col(static_cast<Eigen::Index>(c)) * dw;
          if (c == 0) {
            record_increment = m.expectation_sum(ms.mean, m.channels()[mon[0]]) * h + dw;
          }
        }
        ms.mean += dm;
        ms.integral += sig * h;
        ms.window += record_increment;
        const std::size_t s = step + k + 1;
        if (s % record_every == 0 || s == n) {
          const double t = static_cast<double>(s) * h;
          const std::size_t since = (s % record_every == 0) ? record_every : s % record_every;
          GaussianSample smp{t, {ms.mean, covs[k]}, signal_of(ms.mean), ms.integral / t,
                             ms.window / (static_cast<double>(since) * h)};
          out[r].push_back(std::move(smp));
          ms.window = 0.0;
        }
      }
    }
    step += block;
  }
  return out;
}

std::vector<GaussianSample> evolve_conditional(const GaussianState& g0, const LinearModel& m,
                                               std::vector<GaussianStream>& streams,
                                               double t_end, double dt,
                                               std::size_t record_every) {
  std::vector<std::vector<GaussianStream>> batch{streams};
  auto res = evolve_conditional_batch(g0, m, batch, t_end, dt, record_every);
  streams = std::move(batch[0]);
  return std::move(res[0]);
}

std::vector<TrajectoryPoint> to_points(const std::vector<GaussianSample>& samples) {
  std::vector<TrajectoryPoint> pts;
  pts.reserve(samples.size());
  for (const auto& s : samples) {
    TrajectoryPoint p;
    p.t = s.t;
    p.mean_xa = s.state.mean(0);
    p.mean_pa = s.state.mean(1);
    p.var_xa = s.state.cov(0, 0);
    p.var_pa = s.state.cov(1, 1);
    p.xa2 = p.var_xa + p.mean_xa * p.mean_xa;
    p.pa2 = p.var_pa + p.mean_pa * p.mean_pa;
    p.homodyne_signal = s.signal;
    p.homodyne_cummean = s.signal_cummean;
    p.homodyne_current = s.current;
    if (s.state.modes() == 3) p.mean_n_c = mode_numbers(s.state)(2);
    pts.push_back(p);
  }
  return pts;
}

void write_moment_csv(std::ostream& os, const std::vector<GaussianSample>& samples) {
  if (samples.empty()) return;
  const int modes = samples.front().state.modes();
  std::vector<std::string> header{"t"};
  for (auto& c : moment_columns(modes)) header.push_back(c);
  header.emplace_back("purity");
  csv::Writer w(os, header);
  for (const auto& s : samples) {
    std::vector<double> row{s.t};
    for (double v : moment_values(s.state.mean, s.state.cov, mode_numbers(s.state))) row.push_back(v);
    row.push_back(s.state.purity());
    w.row(row);
  }
}

}  // namespace he3sq::gaussian
