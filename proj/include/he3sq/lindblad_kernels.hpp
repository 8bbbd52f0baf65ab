#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace he3sq::kernels {

using Operator = Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor>;

enum class Backend { serial, openmp };

/// out = a * rho for a row-major sparse a and a dense column-major rho.
/// Both backends accumulate each output entry in the same order, so the
/// result does not depend on the thread count.
void sparse_left_multiply(const Operator& a, const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out,
                          Backend backend);

/// Adds m^dag into out.
void add_adjoint(const Eigen::MatrixXcd& m, Eigen::MatrixXcd& out, Backend backend);

/// Right-hand side of a time-independent Lindblad equation,
///   d rho = -i[H, rho] + sum_w (L_w rho L_w^dag - 1/2 {L_w^dag L_w, rho}),
/// evaluated as G rho + (G rho)^dag + sum_w L_w (L_w rho)^dag with
/// G = -iH - 1/2 sum_w L_w^dag L_w. Valid for Hermitian rho only.
class Lindbladian {
 public:
  Lindbladian(Operator hamiltonian, std::vector<Operator> jumps);

  void apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& drho, Backend backend) const;

  /// Dense textbook evaluation; the serial reference for apply().
  Eigen::MatrixXcd apply_reference(const Eigen::MatrixXcd& rho) const;

  const Operator& hamiltonian() const { return h_; }
  const std::vector<Operator>& jumps() const { return jumps_; }
  Eigen::Index dim() const { return h_.rows(); }

 private:
  Operator h_;
  std::vector<Operator> jumps_;
  Operator g_;
  mutable Eigen::MatrixXcd work_;
  mutable Eigen::MatrixXcd work2_;
};

}  // namespace he3sq::kernels
