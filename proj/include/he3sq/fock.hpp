#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "he3sq/lindblad_kernels.hpp"
#include "he3sq/model.hpp"

namespace he3sq::fock {

using cplx = std::complex<double>;
using kernels::Operator;

/// Mode roles. Quadrature vectors are always ordered (X_a, P_a, X_b, P_b, X_c, P_c).
enum Role : int { kNuclear = 0, kMetastable = 1, kCavity = 2 };

class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PositivityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Product basis of 1-3 truncated bosonic modes.
///
/// `dims` is indexed by role. `factor_order` lists which role sits in each
/// tensor factor, most significant first; the default is role order. A
/// permuted factor order describes the same physics in a relabeled basis.
class ModeSpace {
 public:
  explicit ModeSpace(std::vector<int> dims);
  ModeSpace(std::vector<int> dims, std::vector<int> factor_order);

  std::size_t modes() const { return dims_.size(); }
  int dim(int role) const { return dims_.at(role); }
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<int>& factor_order() const { return order_; }
  std::size_t total_dim() const { return total_; }

  int level(std::size_t index, int role) const {
    return static_cast<int>((index / stride_[role]) % static_cast<std::size_t>(dims_[role]));
  }
  std::size_t index(const std::vector<int>& levels) const;

  bool operator==(const ModeSpace&) const = default;

 private:
  std::vector<int> dims_;
  std::vector<int> order_;
  std::vector<std::size_t> stride_;
  std::size_t total_ = 1;
};

struct ModeOperators {
  Operator lower;
  Operator raise;
  Operator x;  // (a + a^dag) / 2
  Operator p;  // (a - a^dag) / (2i)
  Operator number;
};

struct OperatorSet {
  ModeSpace space;
  std::vector<ModeOperators> mode;  // indexed by role
  Operator identity;
};

constexpr std::size_t kDefaultMaxDim = 1u << 15;

/// Ladder operators and quadratures of every mode embedded in the product space.
OperatorSet build_operators(const ModeSpace& space, std::size_t max_dim = kDefaultMaxDim);

struct StateVector {
  ModeSpace space;
  Eigen::VectorXcd amplitudes;

  static StateVector vacuum(const ModeSpace& space);
  static StateVector number_state(const ModeSpace& space, const std::vector<int>& levels);
  double norm() const { return amplitudes.norm(); }
};

struct DensityOperator {
  ModeSpace space;
  Eigen::MatrixXcd matrix;

  static DensityOperator vacuum(const ModeSpace& space);
  static DensityOperator from_state(const StateVector& psi);

  double trace_error() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;
};

/// First and second moments of the quadratures, plus mean occupations.
struct QuadratureMoments {
  Eigen::VectorXd mean;  // size 2 * modes
  Eigen::MatrixXd cov;   // symmetrized covariance
  Eigen::VectorXd number;  // <n> per mode
};

class MomentEvaluator {
 public:
  explicit MomentEvaluator(const OperatorSet& ops);
  QuadratureMoments operator()(const Eigen::MatrixXcd& rho) const;
  QuadratureMoments operator()(const Eigen::VectorXcd& psi) const;

 private:
  std::vector<Operator> quad_;      // r_j
  std::vector<Operator> products_;  // (r_j r_k + r_k r_j) / 2, j <= k
  std::vector<Operator> numbers_;
};

/// Largest population of any mode's top Fock level.
double top_level_population(const ModeSpace& space, const Eigen::MatrixXcd& rho);
double top_level_population(const ModeSpace& space, const Eigen::VectorXcd& psi);

struct QmeOptions {
  double t_end = 20.0;
  double dt = 0.01;
  std::size_t record_every = 100;
  double top_level_tol = 1e-6;
  double positivity_tol = 1e-9;
  bool check_positivity = true;
  kernels::Backend backend = kernels::Backend::openmp;
};

struct QmeSample {
  double t;
  QuadratureMoments moments;
  double trace_error;
  double top_level_pop;
};

struct QmeResult {
  std::vector<QmeSample> samples;
  DensityOperator final_state;
};

/// H = Omega P_b P_c with C_c = sqrt(kappa) c, C_m = -sqrt(2 gamma_m) b + sqrt(2 gamma_f) a
/// and, when gamma_0 > 0, C_0 = sqrt(gamma_0) b.
kernels::Lindbladian three_mode_lindbladian(const OperatorSet& ops, const ThreeModeParams& p);

/// Fixed-step RK4 on the density matrix.
QmeResult evolve_qme(const DensityOperator& rho0, const ThreeModeParams& p,
                     const QmeOptions& opt);

struct OneModeParams {
  double gamma_sq = 0.0;
  double omega = 0.0;
  double kappa = 1.0;
};

/// Slow evolution of the hybridized nuclear mode: jumps C_d = sqrt(Omega^2/4kappa) 1 and
/// C_s = sqrt(Gamma_sq) P. Verifies on rho0 that C_d contributes nothing.
QmeResult evolve_qme_one_mode(const DensityOperator& rho0, const OneModeParams& p,
                              const QmeOptions& opt);

/// Columns t, the full moment table of every mode, trace_error, top_level_pop.
void write_qme_csv(std::ostream& os, const std::vector<QmeSample>& samples);

struct Hybridized {
  Operator alpha;
  Operator beta;
  Eigen::Matrix2d coefficients;  // rows: (alpha, beta), columns: (a, b)
};

Hybridized hybridize(const Operator& a, const Operator& b, double gamma_m, double gamma_f);

struct PhotonSteadyState {
  double mean_n_c;
  double relative_drift;  // over the last 10% of the run
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs evolve_qme from vacuum to kappa t = 20 and returns the late-time <c^dag c>.
PhotonSteadyState cavity_photon_steady_sim(const ThreeModeParams& p,
                                           std::array<int, 3> dims = {5, 5, 8},
                                           double kappa_dt = 0.02);

}  // namespace he3sq::fock
