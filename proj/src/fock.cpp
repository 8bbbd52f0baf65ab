#include "he3sq/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include <Eigen/Eigenvalues>

#include "he3sq/csv.hpp"
#include "he3sq/record.hpp"

namespace he3sq::fock {

namespace {

using Triplet = Eigen::Triplet<cplx>;

constexpr cplx kI(0.0, 1.0);

std::size_t steps_for(double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end >= 0.0)) throw std::invalid_argument("need dt > 0 and t_end >= 0");
  return static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
}

Operator identity(std::size_t n) {
  Operator id(n, n);
  id.setIdentity();
  id.makeCompressed();
  return id;
}

double trace_real(const Operator& op, const Eigen::MatrixXcd& rho) {
  // tr(op rho) = sum_ik op_ik rho_ki; expectation values of Hermitian ops are real
  cplx acc(0.0, 0.0);
  for (Eigen::Index i = 0; i < op.outerSize(); ++i) {
    for (Operator::InnerIterator it(op, i); it; ++it) acc += it.value() * rho(it.col(), i);
  }
  return acc.real();
}

double expect_real(const Operator& op, const Eigen::VectorXcd& psi) {
  return psi.dot(op * psi).real();
}

}  // namespace

ModeSpace::ModeSpace(std::vector<int> dims) : ModeSpace(dims, [&] {
  std::vector<int> order(dims.size());
  std::iota(order.begin(), order.end(), 0);
  return order;
}()) {}

ModeSpace::ModeSpace(std::vector<int> dims, std::vector<int> factor_order)
    : dims_(std::move(dims)), order_(std::move(factor_order)) {
  if (dims_.empty() || dims_.size() > 3) throw DimensionError("mode space needs 1 to 3 modes");
  for (int d : dims_) {
    if (d < 2) throw DimensionError("truncation < 2");
  }
  if (order_.size() != dims_.size()) throw DimensionError("factor order length mismatch");
  std::vector<int> sorted = order_;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != static_cast<int>(i)) throw DimensionError("factor order is not a permutation");
  }
  stride_.assign(dims_.size(), 1);
  std::size_t s = 1;
  for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
    stride_[*it] = s;
    s *= static_cast<std::size_t>(dims_[*it]);
  }
  total_ = s;
}

std::size_t ModeSpace::index(const std::vector<int>& levels) const {
  if (levels.size() != dims_.size()) throw DimensionError("level list length mismatch");
  std::size_t idx = 0;
  for (std::size_t r = 0; r < dims_.size(); ++r) {
    if (levels[r] < 0 || levels[r] >= dims_[r]) throw DimensionError("level outside truncation");
    idx += static_cast<std::size_t>(levels[r]) * stride_[r];
  }
  return idx;
}

OperatorSet build_operators(const ModeSpace& space, std::size_t max_dim) {
  const std::size_t n = space.total_dim();
  if (n > max_dim) {
    throw DimensionError("Hilbert dimension " + std::to_string(n) + " exceeds budget " +
                         std::to_string(max_dim));
  }
  OperatorSet set{space, {}, identity(n)};
  for (std::size_t role = 0; role < space.modes(); ++role) {
    std::vector<Triplet> trips;
    trips.reserve(n);
    const std::size_t stride = space.index([&] {
      std::vector<int> lv(space.modes(), 0);
      lv[role] = 1;
      return lv;
    }());
    for (std::size_t i = 0; i < n; ++i) {
      const int level = space.level(i, static_cast<int>(role));
      if (level > 0) trips.emplace_back(i - stride, i, std::sqrt(static_cast<double>(level)));
    }
    ModeOperators m;
    m.lower.resize(n, n);
    m.lower.setFromTriplets(trips.begin(), trips.end());
    m.lower.makeCompressed();
    m.raise = Operator(m.lower.adjoint());
    m.x = 0.5 * (m.lower + m.raise);
    m.p = cplx(0.0, -0.5) * (m.lower - m.raise);
    m.number = m.raise * m.lower;
    for (Operator* op : {&m.raise, &m.x, &m.p, &m.number}) {
      op->prune(cplx(0.0, 0.0));
      op->makeCompressed();
    }
    set.mode.push_back(std::move(m));
  }
  return set;
}

StateVector StateVector::vacuum(const ModeSpace& space) {
  return number_state(space, std::vector<int>(space.modes(), 0));
}

StateVector StateVector::number_state(const ModeSpace& space, const std::vector<int>& levels) {
  StateVector s{space, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space.total_dim()))};
  s.amplitudes(static_cast<Eigen::Index>(space.index(levels))) = 1.0;
  return s;
}

DensityOperator DensityOperator::vacuum(const ModeSpace& space) {
  return from_state(StateVector::vacuum(space));
}

DensityOperator DensityOperator::from_state(const StateVector& psi) {
  return {psi.space, psi.amplitudes * psi.amplitudes.adjoint()};
}

double DensityOperator::trace_error() const { return std::abs(matrix.trace() - cplx(1.0, 0.0)); }

double DensityOperator::hermiticity_error() const {
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

double DensityOperator::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

MomentEvaluator::MomentEvaluator(const OperatorSet& ops) {
  for (const auto& m : ops.mode) {
    quad_.push_back(m.x);
    quad_.push_back(m.p);
    numbers_.push_back(m.number);
  }
  for (std::size_t j = 0; j < quad_.size(); ++j) {
    for (std::size_t k = j; k < quad_.size(); ++k) {
      Operator sym = 0.5 * (Operator(quad_[j] * quad_[k]) + Operator(quad_[k] * quad_[j]));
      sym.prune(cplx(0.0, 0.0));
      sym.makeCompressed();
      products_.push_back(std::move(sym));
    }
  }
}

namespace {

template <class Eval>
QuadratureMoments collect(std::size_t nq, std::size_t nmodes, Eval&& eval,
                          const std::vector<Operator>& quad, const std::vector<Operator>& products,
                          const std::vector<Operator>& numbers) {
  QuadratureMoments m;
  m.mean.resize(static_cast<Eigen::Index>(nq));
  m.cov.resize(static_cast<Eigen::Index>(nq), static_cast<Eigen::Index>(nq));
  m.number.resize(static_cast<Eigen::Index>(nmodes));
  for (std::size_t j = 0; j < nq; ++j) m.mean(j) = eval(quad[j]);
  std::size_t idx = 0;
  for (std::size_t j = 0; j < nq; ++j) {
    for (std::size_t k = j; k < nq; ++k, ++idx) {
      const double c = eval(products[idx]) - m.mean(j) * m.mean(k);
      m.cov(j, k) = c;
      m.cov(k, j) = c;
    }
  }
  for (std::size_t r = 0; r < nmodes; ++r) m.number(r) = eval(numbers[r]);
  return m;
}

}  // namespace

QuadratureMoments MomentEvaluator::operator()(const Eigen::MatrixXcd& rho) const {
  return collect(quad_.size(), numbers_.size(),
                 [&](const Operator& op) { return trace_real(op, rho); }, quad_, products_,
                 numbers_);
}

QuadratureMoments MomentEvaluator::operator()(const Eigen::VectorXcd& psi) const {
  return collect(quad_.size(), numbers_.size(),
                 [&](const Operator& op) { return expect_real(op, psi); }, quad_, products_,
                 numbers_);
}

double top_level_population(const ModeSpace& space, const Eigen::MatrixXcd& rho) {
  std::vector<double> pop(space.modes(), 0.0);
  for (std::size_t i = 0; i < space.total_dim(); ++i) {
    for (std::size_t r = 0; r < space.modes(); ++r) {
      if (space.level(i, static_cast<int>(r)) == space.dim(static_cast<int>(r)) - 1) {
        pop[r] += rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
      }
    }
  }
  return *std::max_element(pop.begin(), pop.end());
}

double top_level_population(const ModeSpace& space, const Eigen::VectorXcd& psi) {
  std::vector<double> pop(space.modes(), 0.0);
  for (std::size_t i = 0; i < space.total_dim(); ++i) {
    for (std::size_t r = 0; r < space.modes(); ++r) {
      if (space.level(i, static_cast<int>(r)) == space.dim(static_cast<int>(r)) - 1) {
        pop[r] += std::norm(psi(static_cast<Eigen::Index>(i)));
      }
    }
  }
  return *std::max_element(pop.begin(), pop.end());
}

kernels::Lindbladian three_mode_lindbladian(const OperatorSet& ops, const ThreeModeParams& p) {
  validate(p);
  if (ops.mode.size() != 3) throw DimensionError("three-mode model needs three modes");
  const auto& a = ops.mode[kNuclear];
  const auto& b = ops.mode[kMetastable];
  const auto& c = ops.mode[kCavity];
  Operator h = p.omega * Operator(b.p * c.p);
  h.prune(cplx(0.0, 0.0));
  std::vector<Operator> jumps;
  if (p.kappa > 0.0) jumps.push_back(std::sqrt(p.kappa) * c.lower);
  if (p.gamma_m > 0.0 || p.gamma_f > 0.0) {
    Operator cm = -std::sqrt(2.0 * p.gamma_m) * b.lower + std::sqrt(2.0 * p.gamma_f) * a.lower;
    cm.prune(cplx(0.0, 0.0));
    jumps.push_back(std::move(cm));
  }
  if (p.gamma_0 > 0.0) jumps.push_back(std::sqrt(p.gamma_0) * b.lower);
  return kernels::Lindbladian(std::move(h), std::move(jumps));
}

namespace {

QmeResult integrate(const kernels::Lindbladian& lind, const OperatorSet& ops,
                    const DensityOperator& rho0, const QmeOptions& opt) {
  const std::size_t n = steps_for(opt.t_end, opt.dt);
  const double h = n > 0 ? opt.t_end / static_cast<double>(n) : 0.0;
  const std::size_t every = std::max<std::size_t>(opt.record_every, 1);
  MomentEvaluator moments(ops);

  QmeResult res{{}, rho0};
  Eigen::MatrixXcd& rho = res.final_state.matrix;

  auto record = [&](double t) {
    const double top = top_level_population(rho0.space, rho);
    if (top >= opt.top_level_tol) {
      throw TruncationError("top Fock level population " + std::to_string(top) + " at t=" +
                            std::to_string(t) + " exceeds tolerance");
    }
    if (opt.check_positivity) {
      const double ev = res.final_state.min_eigenvalue();
      if (ev < -opt.positivity_tol) {
        throw PositivityError("density operator eigenvalue " + std::to_string(ev) + " at t=" +
                              std::to_string(t));
      }
    }
    res.samples.push_back({t, moments(rho), res.final_state.trace_error(), top});
  };

  record(0.0);
  Eigen::MatrixXcd k1, k2, k3, k4, tmp;
  for (std::size_t s = 1; s <= n; ++s) {
    lind.apply(rho, k1, opt.backend);
    tmp = rho + (0.5 * h) * k1;
    lind.apply(tmp, k2, opt.backend);
    tmp = rho + (0.5 * h) * k2;
    lind.apply(tmp, k3, opt.backend);
    tmp = rho + h * k3;
    lind.apply(tmp, k4, opt.backend);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    tmp = 0.5 * (rho + rho.adjoint());
    rho = tmp;
    if (s % every == 0 || s == n) record(static_cast<double>(s) * h);
  }
  return res;
}

}  // namespace

QmeResult evolve_qme(const DensityOperator& rho0, const ThreeModeParams& p,
                     const QmeOptions& opt) {
  const OperatorSet ops = build_operators(rho0.space);
  const auto lind = three_mode_lindbladian(ops, p);
  return integrate(lind, ops, rho0, opt);
}

QmeResult evolve_qme_one_mode(const DensityOperator& rho0, const OneModeParams& p,
                              const QmeOptions& opt) {
  if (rho0.space.modes() != 1) throw DimensionError("one-mode QME needs a single mode");
  if (p.gamma_sq < 0.0 || p.kappa <= 0.0) throw ValidationError({"need gamma_sq >= 0, kappa > 0"});
  const OperatorSet ops = build_operators(rho0.space);
  const std::size_t n = rho0.space.total_dim();

  const double cd = std::sqrt(p.omega * p.omega / (4.0 * p.kappa));
  Operator c_d = cd * identity(n);
  Operator zero(n, n);
  zero.makeCompressed();
  {
    // the identity jump must leave every state untouched
    kernels::Lindbladian only_cd(zero, {c_d});
    const double contribution = only_cd.apply_reference(rho0.matrix).cwiseAbs().maxCoeff();
    if (contribution > 1e-14 * std::max(1.0, cd * cd)) {
      throw std::logic_error("identity jump operator changed the state by " +
                             std::to_string(contribution));
    }
  }
  std::vector<Operator> jumps{c_d, std::sqrt(p.gamma_sq) * ops.mode[kNuclear].p};
  kernels::Lindbladian lind(zero, std::move(jumps));
  return integrate(lind, ops, rho0, opt);
}

Hybridized hybridize(const Operator& a, const Operator& b, double gamma_m, double gamma_f) {
  if (gamma_m < 0.0 || gamma_f < 0.0) throw ValidationError({"negative rate: exchange"});
  const double sum = gamma_m + gamma_f;
  if (!(sum > 0.0)) throw ValidationError({"gamma_m + gamma_f must be > 0 to hybridize"});
  const double ca = std::sqrt(gamma_m / sum);
  const double cb = std::sqrt(gamma_f / sum);
  Hybridized h;
  h.coefficients << ca, cb, -cb, ca;
  h.alpha = ca * a + cb * b;
  h.beta = ca * b - cb * a;
  h.alpha.prune(cplx(0.0, 0.0));
  h.beta.prune(cplx(0.0, 0.0));
  return h;
}

PhotonSteadyState cavity_photon_steady_sim(const ThreeModeParams& p, std::array<int, 3> dims,
                                           double kappa_dt) {
  validate(p);
  if (!(p.kappa > 0.0)) throw ValidationError({"kappa must be > 0"});
  ModeSpace space({dims[0], dims[1], dims[2]});
  QmeOptions opt;
  opt.t_end = 20.0 / p.kappa;
  opt.dt = kappa_dt / p.kappa;
  const std::size_t n = steps_for(opt.t_end, opt.dt);
  opt.record_every = std::max<std::size_t>(n / 50, 1);
  opt.check_positivity = space.total_dim() <= 400;
  const auto res = evolve_qme(DensityOperator::vacuum(space), p, opt);

  const double final_n = res.samples.back().moments.number(kCavity);
  const double t_final = res.samples.back().t;
  double lo = final_n, hi = final_n;
  for (const auto& s : res.samples) {
    if (s.t >= 0.9 * t_final) {
      lo = std::min(lo, s.moments.number(kCavity));
      hi = std::max(hi, s.moments.number(kCavity));
    }
  }
  const double drift = final_n > 0.0 ? (hi - lo) / final_n : 0.0;
  if (drift > 1e-3) {
    throw ConvergenceError("photon number drifts by " + std::to_string(drift) +
                           " over the last 10% of the run");
  }
  return {final_n, drift};
}

void write_qme_csv(std::ostream& os, const std::vector<QmeSample>& samples) {
  if (samples.empty()) return;
  const auto modes = static_cast<int>(samples.front().moments.number.size());
  std::vector<std::string> header{"t"};
  for (auto& c : moment_columns(modes)) header.push_back(c);
  header.emplace_back("trace_error");
  header.emplace_back("top_level_pop");
  csv::Writer w(os, header);
  for (const auto& s : samples) {
    std::vector<double> row{s.t};
    for (double v : moment_values(s.moments.mean, s.moments.cov, s.moments.number)) row.push_back(v);
    row.push_back(s.trace_error);
    row.push_back(s.top_level_pop);
    w.row(row);
  }
}

}  // namespace he3sq::fock
