#include "he3sq/lindblad_kernels.hpp"

#include <stdexcept>

namespace he3sq::kernels {

using cplx = std::complex<double>;

namespace {

void left_multiply_columns(const Operator& a, const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out,
                           Eigen::Index col) {
  const auto* outer = a.outerIndexPtr();
  const auto* inner = a.innerIndexPtr();
  const cplx* val = a.valuePtr();
  const cplx* src = rho.col(col).data();
  cplx* dst = out.col(col).data();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    cplx acc(0.0, 0.0);
    for (auto k = outer[i]; k < outer[i + 1]; ++k) acc += val[k] * src[inner[k]];
    dst[i] = acc;
  }
}

}  // namespace

void sparse_left_multiply(const Operator& a, const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out,
                          Backend backend) {
  if (!a.isCompressed()) throw std::logic_error("sparse_left_multiply needs a compressed operator");
  if (a.cols() != rho.rows()) throw std::invalid_argument("sparse_left_multiply: shape mismatch");
  out.resize(a.rows(), rho.cols());
  const Eigen::Index ncols = rho.cols();
  if (backend == Backend::openmp) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < ncols; ++j) left_multiply_columns(a, rho, out, j);
  } else {
    for (Eigen::Index j = 0; j < ncols; ++j) left_multiply_columns(a, rho, out, j);
  }
}

void add_adjoint(const Eigen::MatrixXcd& m, Eigen::MatrixXcd& out, Backend backend) {
  const Eigen::Index n = m.rows();
  if (backend == Backend::openmp) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) out(i, j) += std::conj(m(j, i));
  } else {
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) out(i, j) += std::conj(m(j, i));
  }
}

Lindbladian::Lindbladian(Operator hamiltonian, std::vector<Operator> jumps)
    : h_(std::move(hamiltonian)), jumps_(std::move(jumps)) {
  const cplx minus_i(0.0, -1.0);
  Operator g = minus_i * h_;
  for (const auto& l : jumps_) {
    if (l.rows() != h_.rows() || l.cols() != h_.cols()) {
      throw std::invalid_argument("jump operator shape differs from Hamiltonian");
    }
    Operator ldl = Operator(l.adjoint()) * l;
    g -= 0.5 * ldl;
  }
  g_ = g;
  g_.makeCompressed();
  h_.makeCompressed();
  for (auto& l : jumps_) l.makeCompressed();
}

void Lindbladian::apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& drho,
                        Backend backend) const {
  sparse_left_multiply(g_, rho, work_, backend);
  drho = work_;
  add_adjoint(work_, drho, backend);
  for (const auto& l : jumps_) {
    // L (L rho)^dag = L rho L^dag for Hermitian rho
    sparse_left_multiply(l, rho, work_, backend);
    work2_ = work_.adjoint();
    sparse_left_multiply(l, work2_, work_, backend);
    drho += work_;
  }
}

Eigen::MatrixXcd Lindbladian::apply_reference(const Eigen::MatrixXcd& rho) const {
  const Eigen::MatrixXcd h = Eigen::MatrixXcd(h_);
  const cplx i(0.0, 1.0);
  Eigen::MatrixXcd out = -i * (h * rho - rho * h);
  for (const auto& ls : jumps_) {
    const Eigen::MatrixXcd l = Eigen::MatrixXcd(ls);
    const Eigen::MatrixXcd ldl = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

}  // namespace he3sq::kernels
