#include "he3sq/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include <Eigen/Eigenvalues>

namespace he3sq::trajectories {

namespace {

using cplx = std::complex<double>;
using fock::Operator;

std::size_t steps_for(double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end >= 0.0)) throw std::invalid_argument("need dt > 0 and t_end >= 0");
  return static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
}

// Real expectation of a Hermitian operator in a normalized state.
double expect(const Operator& op, const Eigen::VectorXcd& psi) {
  return psi.dot(op * psi).real();
}

void fill_nuclear(TrajectoryPoint& pt, const fock::QuadratureMoments& m) {
  pt.mean_xa = m.mean(0);
  pt.mean_pa = m.mean(1);
  pt.var_xa = m.cov(0, 0);
  pt.var_pa = m.cov(1, 1);
  pt.xa2 = pt.var_xa + pt.mean_xa * pt.mean_xa;
  pt.pa2 = pt.var_pa + pt.mean_pa * pt.mean_pa;
  if (m.number.size() > 2) pt.mean_n_c = m.number(2);
}

void check_truncation(const fock::ModeSpace& space, const Eigen::VectorXcd& psi, double tol,
                      double t, TrajectoryPoint& pt) {
  pt.top_level_pop = fock::top_level_population(space, psi);
  if (pt.top_level_pop > tol) {
    throw fock::TruncationError("top Fock level population " + std::to_string(pt.top_level_pop) +
                                " exceeds " + std::to_string(tol) + " at t=" + std::to_string(t));
  }
}

void check_normalized(const StateVector& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-8) throw std::invalid_argument("initial state not normalized");
}

nlohmann::json dims_json(const fock::ModeSpace& s) { return s.dims(); }

template <class F>
std::vector<TrajectoryRecord> run_all(std::size_t n, F&& run, kernels::Backend backend) {
  std::vector<TrajectoryRecord> out(n);
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
  if (backend == kernels::Backend::serial) {
    for (std::ptrdiff_t i = 0; i < count; ++i) out[i] = run(static_cast<std::size_t>(i));
    return out;
  }
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      out[i] = run(static_cast<std::size_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace

TrajectoryRecord sse_one_mode(const StateVector& phi0, double gamma_sq, GaussianStream& stream,
                              const OneModeOptions& opt) {
  if (phi0.space.modes() != 1) throw fock::DimensionError("one-mode evolution needs a 1-mode space");
  if (!(gamma_sq >= 0.0)) throw ValidationError({"negative rate: gamma_sq"});
  check_normalized(phi0);
  const std::size_t n = steps_for(opt.t_end, opt.dt);
  const double h = n > 0 ? opt.t_end / static_cast<double>(n) : 0.0;
  const std::size_t every = std::max<std::size_t>(opt.record_every, 1);
  const auto ops = fock::build_operators(phi0.space);
  const fock::MomentEvaluator moments(ops);
  const Operator& p_op = ops.mode[0].p;
  const double sg = std::sqrt(gamma_sq);

  TrajectoryRecord rec;
  rec.manifest = {{"engine", "sse1"},
                  {"gamma_sq", gamma_sq},
                  {"seed", stream.seed()},
                  {"dt", h},
                  {"t_end", opt.t_end},
                  {"record_every", every},
                  {"dims", dims_json(phi0.space)},
                  {"scheme", opt.scheme == OneModeScheme::measurement_operator
                                 ? "measurement_operator"
                                 : "euler_maruyama"},
                  {"version", HE3SQ_VERSION}};

  Eigen::VectorXcd phi = phi0.amplitudes;
  auto record = [&](double t, const Eigen::VectorXcd& psi, double cummean, double current) {
    TrajectoryPoint pt;
    pt.t = t;
    fill_nuclear(pt, moments(psi));
    pt.homodyne_signal = 2.0 * pt.mean_pa;
    pt.homodyne_cummean = t > 0.0 ? cummean : pt.homodyne_signal;
    pt.homodyne_current = current;
    pt.norm_error = std::abs(psi.norm() - 1.0);
    check_truncation(phi0.space, psi, opt.top_level_tol, t, pt);
    rec.points.push_back(pt);
  };
  record(0.0, phi, 0.0, 0.0);

  double integral = 0.0;
  double window = 0.0;
  if (opt.scheme == OneModeScheme::measurement_operator) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es{Eigen::MatrixXcd(p_op)};
    const Eigen::VectorXd w = es.eigenvalues();
    const Eigen::MatrixXcd& u = es.eigenvectors();
    const Eigen::VectorXd w2 = w.cwiseAbs2();
    Eigen::VectorXcd c = u.adjoint() * phi;
    Eigen::VectorXd expo(w.size());
    for (std::size_t s = 1; s <= n; ++s) {
      const double mean_p = c.cwiseAbs2().dot(w);
      const double dw = stream.increment(h);
      const double dy = 2.0 * sg * mean_p * h + dw;
      integral += 2.0 * mean_p * h;
      window += dy;
      expo = sg * dy * w - gamma_sq * h * w2;
      expo.array() -= expo.maxCoeff();
      c.array() *= expo.array().exp().cast<cplx>();
      const double nrm = c.norm();
      if (!std::isfinite(nrm) || nrm == 0.0) {
        throw NormCollapseError("state vanished at step " + std::to_string(s));
      }
      c /= nrm;
      if (s % every == 0 || s == n) {
        const std::size_t since = s % every == 0 ? every : s % every;
        const double t = static_cast<double>(s) * h;
        phi = u * c;
        record(t, phi, integral / t, window / (static_cast<double>(since) * h));
        window = 0.0;
      }
    }
  } else {
    Eigen::VectorXcd pphi(phi.size());
    Eigen::VectorXcd qphi(phi.size());
    for (std::size_t s = 1; s <= n; ++s) {
      pphi.noalias() = p_op * phi;
      const double mean_p = phi.dot(pphi).real();
      qphi = pphi - mean_p * phi;
      const double dw = stream.increment(h);
      integral += 2.0 * mean_p * h;
      window += 2.0 * sg * mean_p * h + dw;
      // Q^2 phi = P(Q phi) - <P> Q phi
      Eigen::VectorXcd q2phi = p_op * qphi;
      q2phi -= mean_p * qphi;
      phi += -0.5 * h * gamma_sq * q2phi + sg * dw * qphi;
      const double nrm = phi.norm();
      if (!std::isfinite(nrm) || nrm < opt.norm_collapse) {
        throw NormCollapseError("norm " + std::to_string(nrm) + " at step " + std::to_string(s) +
                                "; dt too large");
      }
      phi /= nrm;
      if (s % every == 0 || s == n) {
        const std::size_t since = s % every == 0 ? every : s % every;
        const double t = static_cast<double>(s) * h;
        record(t, phi, integral / t, window / (static_cast<double>(since) * h));
        window = 0.0;
      }
    }
  }
  return rec;
}

double default_dt(const ThreeModeParams& p) {
  double dt = p.kappa > 0.0 ? 0.02 / p.kappa : 0.02 / std::max(max_rate(p), 1e-300);
  if (p.kappa > 0.0 && p.gamma_m > 0.0 && p.gamma_f > 0.0) {
    const double gsq = p.omega * p.omega * p.gamma_f / (p.kappa * p.gamma_m);
    if (gsq > 0.0) dt = std::min(dt, 0.01 / gsq);
  }
  return dt;
}

TrajectoryRecord sse_three_mode(const StateVector& psi0, const ThreeModeParams& p,
                                TrajectoryStreams& streams, const SseOptions& opt) {
  validate(p);
  if (psi0.space.modes() != 3) throw fock::DimensionError("three-mode evolution needs 3 modes");
  check_normalized(psi0);
  if (p.gamma_0 > 0.0 && !streams.decoherence) {
    throw std::invalid_argument("gamma_0 > 0 needs a decoherence stream");
  }
  const std::size_t n = steps_for(opt.t_end, opt.dt);
  const double h = n > 0 ? opt.t_end / static_cast<double>(n) : 0.0;
  const std::size_t every = std::max<std::size_t>(opt.record_every, 1);

  const auto ops = fock::build_operators(psi0.space);
  const fock::MomentEvaluator moments(ops);
  const auto& a = ops.mode[fock::kNuclear];
  const auto& b = ops.mode[fock::kMetastable];
  const auto& c = ops.mode[fock::kCavity];

  struct Channel {
    Operator op;
    GaussianStream* stream;
  };
  std::vector<Channel> channels;
  const bool cavity = p.kappa > 0.0;
  if (cavity) channels.push_back({Operator(std::sqrt(p.kappa) * c.lower), &streams.homodyne});
  if (p.gamma_m > 0.0 || p.gamma_f > 0.0) {
    Operator l = -std::sqrt(2.0 * p.gamma_m) * b.lower + std::sqrt(2.0 * p.gamma_f) * a.lower;
    channels.push_back({std::move(l), &streams.exchange});
  }
  if (p.gamma_0 > 0.0) {
    channels.push_back({Operator(std::sqrt(p.gamma_0) * b.lower), &*streams.decoherence});
  }
  Operator g = cplx(0.0, -p.omega) * Operator(b.p * c.p);
  for (const auto& ch : channels) g -= 0.5 * Operator(ch.op.adjoint() * ch.op);
  g.makeCompressed();

  TrajectoryRecord rec;
  nlohmann::json seeds = {{"homodyne", streams.homodyne.seed()},
                          {"exchange", streams.exchange.seed()}};
  if (streams.decoherence) seeds["decoherence"] = streams.decoherence->seed();
  std::vector<std::string> warnings;
  if (!(p.kappa > p.gamma_m && p.gamma_m > p.gamma_f)) {
    warnings.emplace_back("rates outside kappa > gamma_m > gamma_f");
  }
  rec.manifest = {{"engine", "sse3"},        {"params", to_json(p)},
                  {"seeds", seeds},          {"dt", h},
                  {"t_end", opt.t_end},      {"record_every", every},
                  {"dims", dims_json(psi0.space)},
                  {"scheme", "euler_maruyama_normalized"},
                  {"warnings", warnings},    {"version", HE3SQ_VERSION}};

  const double sk = std::sqrt(p.kappa);
  Eigen::VectorXcd psi = psi0.amplitudes;
  auto record = [&](double t, double signal, double cummean, double current) {
    TrajectoryPoint pt;
    pt.t = t;
    fill_nuclear(pt, moments(psi));
    pt.homodyne_signal = signal;
    pt.homodyne_cummean = cummean;
    pt.homodyne_current = current;
    pt.norm_error = std::abs(psi.norm() - 1.0);
    check_truncation(psi0.space, psi, opt.top_level_tol, t, pt);
    rec.points.push_back(pt);
  };
  const double signal0 = cavity ? 2.0 * expect(c.x, psi) : 0.0;
  record(0.0, signal0, signal0, 0.0);

  std::vector<Eigen::VectorXcd> lpsi(channels.size(), Eigen::VectorXcd(psi.size()));
  std::vector<double> e(channels.size());
  Eigen::VectorXcd dpsi(psi.size());
  double integral = 0.0;
  double window = 0.0;
  double signal = signal0;
  for (std::size_t s = 1; s <= n; ++s) {
    for (std::size_t k = 0; k < channels.size(); ++k) {
      lpsi[k].noalias() = channels[k].op * psi;
      e[k] = psi.dot(lpsi[k]).real();  // <L + L^dag> / 2
    }
    signal = cavity ? 2.0 * e[0] / sk : 0.0;
    dpsi.noalias() = h * (g * psi);
    double psi_coeff = 0.0;
    for (std::size_t k = 0; k < channels.size(); ++k) {
      const double dw = channels[k].stream->increment(h);
      dpsi += (e[k] * h + dw) * lpsi[k];
      psi_coeff -= 0.5 * e[k] * e[k] * h + e[k] * dw;
      if (cavity && k == 0) window += 2.0 * e[0] * h + dw;
    }
    dpsi += psi_coeff * psi;
    psi += dpsi;
    integral += signal * h;
    const double nrm = psi.norm();
    if (!std::isfinite(nrm) || nrm < opt.norm_collapse) {
      throw NormCollapseError("norm " + std::to_string(nrm) + " at step " + std::to_string(s) +
                              "; dt too large");
    }
    psi /= nrm;
    if (s % every == 0 || s == n) {
      const std::size_t since = s % every == 0 ? every : s % every;
      const double t = static_cast<double>(s) * h;
      const double now = cavity ? 2.0 * expect(c.x, psi) : 0.0;
      record(t, now, integral / t, window / (static_cast<double>(since) * h));
      window = 0.0;
    }
  }
  return rec;
}

EnsembleResult combine(std::vector<TrajectoryRecord> members) {
  if (members.empty()) throw EnsembleError("empty ensemble");
  const std::size_t m = members.size();
  const std::size_t len = members.front().points.size();
  for (const auto& r : members) {
    if (r.points.size() != len) throw EnsembleError("members have different time grids");
  }
  const double nm = static_cast<double>(m);
  EnsembleResult out;
  out.mean.resize(len);
  out.std_error.resize(len);

  // Sample standard error of the mean of one column.
  auto se = [&](std::size_t i, auto field) {
    if (m < 2) return 0.0;
    double mu = 0.0;
    for (const auto& r : members) mu += field(r.points[i]);
    mu /= nm;
    double ss = 0.0;
    for (const auto& r : members) ss += std::pow(field(r.points[i]) - mu, 2);
    return std::sqrt(ss / (nm - 1.0) / nm);
  };
  // Jackknife standard error of the mixture variance <O^2> - <O>^2.
  auto jack = [&](std::size_t i, auto first, auto second) {
    if (m < 2) return 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    for (const auto& r : members) {
      s1 += first(r.points[i]);
      s2 += second(r.points[i]);
    }
    std::vector<double> loo(m);
    double mean_loo = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double f = (s1 - first(members[k].points[i])) / (nm - 1.0);
      const double q = (s2 - second(members[k].points[i])) / (nm - 1.0);
      loo[k] = q - f * f;
      mean_loo += loo[k];
    }
    mean_loo /= nm;
    double ss = 0.0;
    for (double v : loo) ss += (v - mean_loo) * (v - mean_loo);
    return std::sqrt((nm - 1.0) / nm * ss);
  };

  for (std::size_t i = 0; i < len; ++i) {
    TrajectoryPoint& mu = out.mean[i];
    mu.t = members.front().points[i].t;
    for (const auto& r : members) {
      const auto& pt = r.points[i];
      if (std::abs(pt.t - mu.t) > 1e-9 * std::max(1.0, std::abs(mu.t))) {
        throw EnsembleError("members have different time grids");
      }
      mu.mean_pa += pt.mean_pa;
      mu.mean_xa += pt.mean_xa;
      mu.pa2 += pt.pa2;
      mu.xa2 += pt.xa2;
      mu.homodyne_signal += pt.homodyne_signal;
      mu.homodyne_cummean += pt.homodyne_cummean;
      mu.homodyne_current += pt.homodyne_current;
      mu.mean_n_c += pt.mean_n_c;
      mu.norm_error = std::max(mu.norm_error, pt.norm_error);
      mu.top_level_pop = std::max(mu.top_level_pop, pt.top_level_pop);
    }
    mu.mean_pa /= nm;
    mu.mean_xa /= nm;
    mu.pa2 /= nm;
    mu.xa2 /= nm;
    mu.homodyne_signal /= nm;
    mu.homodyne_cummean /= nm;
    mu.homodyne_current /= nm;
    mu.mean_n_c /= nm;
    mu.var_pa = mu.pa2 - mu.mean_pa * mu.mean_pa;
    mu.var_xa = mu.xa2 - mu.mean_xa * mu.mean_xa;

    TrajectoryPoint& err = out.std_error[i];
    err.t = mu.t;
    err.mean_pa = se(i, [](const TrajectoryPoint& p) { return p.mean_pa; });
    err.mean_xa = se(i, [](const TrajectoryPoint& p) { return p.mean_xa; });
    err.pa2 = se(i, [](const TrajectoryPoint& p) { return p.pa2; });
    err.xa2 = se(i, [](const TrajectoryPoint& p) { return p.xa2; });
    err.homodyne_signal = se(i, [](const TrajectoryPoint& p) { return p.homodyne_signal; });
    err.homodyne_cummean = se(i, [](const TrajectoryPoint& p) { return p.homodyne_cummean; });
    err.homodyne_current = se(i, [](const TrajectoryPoint& p) { return p.homodyne_current; });
    err.mean_n_c = se(i, [](const TrajectoryPoint& p) { return p.mean_n_c; });
    err.var_pa = jack(i, [](const TrajectoryPoint& p) { return p.mean_pa; },
                      [](const TrajectoryPoint& p) { return p.pa2; });
    err.var_xa = jack(i, [](const TrajectoryPoint& p) { return p.mean_xa; },
                      [](const TrajectoryPoint& p) { return p.xa2; });
  }
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : members) list.push_back(r.manifest);
  out.manifest = {{"members", list}, {"weights", "uniform"}, {"version", HE3SQ_VERSION}};
  out.members = std::move(members);
  return out;
}

EnsembleResult conditional_ensemble(const StateVector& psi0, const ThreeModeParams& p,
                                    const NoiseSeeds& seeds, const SseOptions& opt,
                                    kernels::Backend backend) {
  if (seeds.exchange.size() < 2) throw EnsembleError("need at least 2 exchange seeds");
  validate(p);
  auto members = run_all(
      seeds.exchange.size(),
      [&](std::size_t i) {
        TrajectoryStreams s(seeds.homodyne, seeds.exchange[i], p.gamma_0 > 0.0);
        return sse_three_mode(psi0, p, s, opt);
      },
      backend);
  auto res = combine(std::move(members));
  res.manifest["kind"] = "conditional";
  res.manifest["homodyne_seed"] = seeds.homodyne;
  res.manifest["exchange_seeds"] = seeds.exchange;
  return res;
}

EnsembleResult unconditional_ensemble(const StateVector& psi0, const ThreeModeParams& p,
                                      std::uint64_t base_seed, std::size_t n_trajectories,
                                      const SseOptions& opt, kernels::Backend backend) {
  if (n_trajectories < 2) throw EnsembleError("need at least 2 trajectories");
  validate(p);
  auto members = run_all(
      n_trajectories,
      [&](std::size_t i) {
        TrajectoryStreams s(child_seed(base_seed, 2 * i), child_seed(base_seed, 2 * i + 1),
                            p.gamma_0 > 0.0);
        return sse_three_mode(psi0, p, s, opt);
      },
      backend);
  auto res = combine(std::move(members));
  res.manifest["kind"] = "unconditional";
  res.manifest["base_seed"] = base_seed;
  return res;
}

EnsembleResult one_mode_ensemble(const StateVector& phi0, double gamma_sq,
                                 std::uint64_t base_seed, std::size_t n_trajectories,
                                 const OneModeOptions& opt, kernels::Backend backend) {
  if (n_trajectories < 2) throw EnsembleError("need at least 2 trajectories");
  auto members = run_all(
      n_trajectories,
      [&](std::size_t i) {
        GaussianStream s(child_seed(base_seed, i));
        return sse_one_mode(phi0, gamma_sq, s, opt);
      },
      backend);
  auto res = combine(std::move(members));
  res.manifest["kind"] = "one_mode";
  res.manifest["base_seed"] = base_seed;
  return res;
}

std::vector<double> homodyne_time_average(const TrajectoryRecord& record) {
  const auto& pts = record.points;
  if (pts.empty()) throw std::invalid_argument("empty record");
  std::vector<double> avg(pts.size());
  const double t0 = pts.front().t;
  double integral = 0.0;
  avg[0] = pts[0].homodyne_signal;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    integral += 0.5 * (pts[i].homodyne_signal + pts[i - 1].homodyne_signal) *
                (pts[i].t - pts[i - 1].t);
    const double span = pts[i].t - t0;
    avg[i] = span > 0.0 ? integral / span : pts[i].homodyne_signal;
  }
  return avg;
}

AsymptoteCheck homodyne_asymptote_check(const TrajectoryRecord& record, double gamma_sq,
                                        double kappa) {
  if (record.points.empty()) throw std::invalid_argument("empty record");
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  const auto& last = record.points.back();
  return {last.homodyne_cummean, 2.0 * std::sqrt(gamma_sq / kappa) * last.mean_pa};
}

double regression_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("regression needs two equally long series of length >= 2");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("regressor has zero variance");
  return sxy / sxx;
}

}  // namespace he3sq::trajectories
