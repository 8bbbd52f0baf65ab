#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "he3sq/fock.hpp"
#include "he3sq/lindblad_kernels.hpp"
#include "he3sq/model.hpp"
#include "he3sq/trajectories.hpp"

using namespace he3sq;

namespace {

// a mixed state with every matrix element populated
Eigen::MatrixXcd test_state(int dim) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Random(dim, dim);
  Eigen::MatrixXcd rho = m * m.adjoint();
  return rho / rho.trace();
}

fock::ModeSpace space_for(const benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  return fock::ModeSpace({n, n, n + 1});
}

void rhs(benchmark::State& st, kernels::Backend backend) {
  const auto space = space_for(st);
  const auto ops = fock::build_operators(space);
  const auto l = fock::three_mode_lindbladian(ops, fig3_params(1e-3));
  const auto rho = test_state(static_cast<int>(space.total_dim()));
  Eigen::MatrixXcd out(rho.rows(), rho.cols());
  for (auto _ : st) {
    l.apply(rho, out, backend);
    benchmark::DoNotOptimize(out.data());
  }
  st.counters["dim"] = space.total_dim();
}

void BM_RhsSerial(benchmark::State& st) { rhs(st, kernels::Backend::serial); }
void BM_RhsOpenMP(benchmark::State& st) { rhs(st, kernels::Backend::openmp); }

void BM_RhsReference(benchmark::State& st) {
  const auto space = space_for(st);
  const auto l = fock::three_mode_lindbladian(fock::build_operators(space), fig3_params(1e-3));
  const auto rho = test_state(static_cast<int>(space.total_dim()));
  for (auto _ : st) benchmark::DoNotOptimize(l.apply_reference(rho));
}

void ensemble(benchmark::State& st, kernels::Backend backend) {
  const fock::ModeSpace space({5, 5, 6});
  trajectories::SseOptions o;
  o.t_end = 2.0;
  o.dt = 0.01;
  o.record_every = 100;
  const auto psi = fock::StateVector::vacuum(space);
  for (auto _ : st) {
    auto e = trajectories::unconditional_ensemble(psi, fig3_params(), 7, st.range(0), o, backend);
    benchmark::DoNotOptimize(e.mean.data());
  }
}

void BM_EnsembleSerial(benchmark::State& st) { ensemble(st, kernels::Backend::serial); }
void BM_EnsembleOpenMP(benchmark::State& st) { ensemble(st, kernels::Backend::openmp); }

}  // namespace

BENCHMARK(BM_RhsSerial)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RhsOpenMP)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RhsReference)->Arg(4)->Arg(6)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EnsembleSerial)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleOpenMP)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
