#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "he3sq/fock.hpp"
#include "he3sq/trajectories.hpp"

using namespace he3sq;
using namespace he3sq::trajectories;
using fock::ModeSpace;

namespace {

SseOptions sse_opts(double t_end, double dt, std::size_t every) {
  SseOptions o;
  o.t_end = t_end;
  o.dt = dt;
  o.record_every = every;
  return o;
}

OneModeOptions one_opts(double t_end, double dt, std::size_t every) {
  OneModeOptions o;
  o.t_end = t_end;
  o.dt = dt;
  o.record_every = every;
  return o;
}

std::string csv_of(const TrajectoryRecord& r) {
  std::ostringstream os;
  write_trajectory_csv(os, r.points);
  return os.str();
}

}  // namespace

TEST(OneMode, FrozenWithoutMeasurement) {
  ModeSpace s({10});
  StateVector phi = StateVector::vacuum(s);
  phi.amplitudes(1) = 0.6;
  phi.amplitudes.normalize();
  GaussianStream g(4);
  const auto r = sse_one_mode(phi, 0.0, g, one_opts(1.0, 1e-3, 100));
  for (const auto& pt : r.points) {
    EXPECT_NEAR(pt.var_pa, r.points.front().var_pa, 1e-14);
    EXPECT_NEAR(pt.mean_pa, r.points.front().mean_pa, 1e-14);
  }
}

TEST(OneMode, VacuumVarianceLaw) {
  const double g = 1.0;
  GaussianStream stream(17);
  const auto r = sse_one_mode(StateVector::vacuum(ModeSpace({40})), g, stream, one_opts(5.0, 1e-3, 100));
  EXPECT_EQ(r.points.front().var_pa, 0.25);
  for (const auto& pt : r.points) {
    const double law = 0.25 / (1.0 + g * pt.t);
    EXPECT_NEAR(pt.var_pa / law, 1.0, 1e-3) << pt.t;
    EXPECT_LT(pt.norm_error, 1e-8);
  }
}

TEST(OneMode, EulerMaruyamaSchemeFollowsTheSameLaw) {
  auto opt = one_opts(2.0, 1e-4, 1000);
  opt.scheme = OneModeScheme::euler_maruyama;
  GaussianStream stream(3);
  const auto r = sse_one_mode(StateVector::vacuum(ModeSpace({30})), 1.0, stream, opt);
  for (const auto& pt : r.points) EXPECT_NEAR(pt.var_pa / (0.25 / (1.0 + pt.t)), 1.0, 2e-2) << pt.t;
}

TEST(OneMode, SettledMeansSpreadLikeTheMeasuredVariance) {
  const std::size_t n = 400;
  const auto ens = one_mode_ensemble(StateVector::vacuum(ModeSpace({30})), 1.0, 99, n,
                                     one_opts(2.0, 2e-3, 250));
  for (std::size_t i = 1; i < ens.mean.size(); ++i) {
    const double t = ens.mean[i].t;
    const double se = ens.std_error[i].mean_pa;
    EXPECT_LT(std::abs(ens.mean[i].mean_pa), 3.0 * se) << t;
    // spread of <P> across records, i.e. the unconditional 1/4 minus the conditional variance
    double s2 = 0.0;
    for (const auto& m : ens.members) s2 += m.points[i].mean_pa * m.points[i].mean_pa;
    s2 /= static_cast<double>(n);
    const double expect = 0.25 - 0.25 / (1.0 + t);
    EXPECT_NEAR(s2, expect, 4.0 * expect * std::sqrt(2.0 / n)) << t;
  }
}

TEST(OneMode, AdjacentBaseSeedsShareNoRecord) {
  const auto opt = one_opts(0.5, 1e-3, 100);
  const auto a = one_mode_ensemble(StateVector::vacuum(ModeSpace({20})), 1.0, 1, 8, opt);
  const auto b = one_mode_ensemble(StateVector::vacuum(ModeSpace({20})), 1.0, 2, 8, opt);
  for (const auto& ma : a.members) {
    for (const auto& mb : b.members) EXPECT_NE(ma.points.back().mean_pa, mb.points.back().mean_pa);
  }
}

TEST(OneMode, RejectsBadInput) {
  GaussianStream g(1);
  EXPECT_THROW(sse_one_mode(StateVector::vacuum(ModeSpace({3, 3})), 1.0, g), fock::DimensionError);
  EXPECT_THROW(sse_one_mode(StateVector::vacuum(ModeSpace({5})), -1.0, g), ValidationError);
}

TEST(ThreeMode, NoCouplingKeepsVacuum) {
  auto p = fig3_params();
  p.omega = 0.0;
  TrajectoryStreams st(1, 2, false);
  const auto r = sse_three_mode(StateVector::vacuum(ModeSpace({3, 3, 3})), p, st, sse_opts(5.0, 0.02, 25));
  for (const auto& pt : r.points) {
    EXPECT_LT(std::abs(pt.mean_pa) + std::abs(pt.mean_xa) + pt.mean_n_c, 1e-15);
    EXPECT_NEAR(pt.var_pa, 0.25, 1e-15);
    EXPECT_NEAR(pt.var_xa, 0.25, 1e-15);
  }
}

TEST(ThreeMode, ReproducibleAndNormalized) {
  const auto p = fig3_params();
  auto run = [&] {
    TrajectoryStreams st(5, 6, false);
    return sse_three_mode(StateVector::vacuum(ModeSpace({8, 5, 3})), p, st, sse_opts(50.0, 0.02, 50));
  };
  const auto a = run();
  const auto b = run();
  EXPECT_EQ(csv_of(a), csv_of(b));
  for (const auto& pt : a.points) EXPECT_LT(pt.norm_error, 1e-8);
  EXPECT_EQ(a.manifest["seeds"]["homodyne"], 5);
  EXPECT_EQ(a.manifest["seeds"]["exchange"], 6);
  EXPECT_EQ(three_mode_from_json(a.manifest["params"]), p);
}

TEST(ThreeMode, DecoherenceNeedsStream) {
  TrajectoryStreams st(1, 2, false);
  EXPECT_THROW(sse_three_mode(StateVector::vacuum(ModeSpace({3, 3, 3})), fig3_params(1e-3), st),
               std::invalid_argument);
}

TEST(ThreeMode, HeisenbergBoundAndSharpening) {
  const auto p = fig3_params();
  const auto ens = conditional_ensemble(StateVector::vacuum(ModeSpace({12, 6, 4})), p, {1, {11, 12, 13}},
                                        sse_opts(600.0, 0.02, 500));
  double running_min = 1.0;
  for (const auto& pt : ens.mean) {
    EXPECT_GE(pt.var_xa * pt.var_pa, 1.0 / 16.0 - 1e-6) << pt.t;
    EXPECT_LE(pt.var_pa, running_min * 1.02) << pt.t;
    running_min = std::min(running_min, pt.var_pa);
  }
  for (const auto& m : ens.members) {
    for (const auto& pt : m.points) EXPECT_GE(pt.var_xa * pt.var_pa, 1.0 / 16.0 - 1e-6);
  }
}

TEST(ThreeMode, HalvingTheStep) {
  // with every channel unravelled the pure-state covariance does not depend on the noise,
  // so members driven by different increments still compare
  const auto p = fig3_params();
  auto final_var = [&](double dt) {
    TrajectoryStreams st(1, 11, false);
    return sse_three_mode(StateVector::vacuum(ModeSpace({10, 6, 4})), p, st,
                          sse_opts(300.0, dt, static_cast<std::size_t>(std::lround(10.0 / dt))))
        .points.back()
        .var_pa;
  };
  EXPECT_NEAR(final_var(0.01) / final_var(0.02), 1.0, 0.01);
}

TEST(Ensemble, ExchangeSeedsIrrelevantWithoutExchange) {
  ThreeModeParams p{0.1, 1.0, 0.0, 0.0};
  const auto ens = conditional_ensemble(StateVector::vacuum(ModeSpace({2, 10, 4})), p, {1, {11, 12, 13}},
                                        sse_opts(10.0, 0.02, 50));
  EXPECT_EQ(csv_of(ens.members[0]), csv_of(ens.members[2]));
  for (std::size_t i = 0; i < ens.mean.size(); ++i) {
    // identical members; only the rounding of the sample mean is left
    EXPECT_LT(ens.std_error[i].mean_pa, 1e-15);
    EXPECT_LT(ens.std_error[i].var_pa, 1e-15);
    EXPECT_LT(ens.std_error[i].mean_n_c, 1e-15);
  }
}

TEST(Ensemble, NeedsTwoSeeds) {
  EXPECT_THROW(conditional_ensemble(StateVector::vacuum(ModeSpace({3, 3, 3})), fig3_params(), {1, {11}}),
               EnsembleError);
  EXPECT_THROW(unconditional_ensemble(StateVector::vacuum(ModeSpace({3, 3, 3})), fig3_params(), 1, 1),
               EnsembleError);
}

TEST(Ensemble, MixtureMoments) {
  TrajectoryRecord a, b;
  a.points = {{0.0}, {1.0}};
  b.points = {{0.0}, {1.0}};
  a.points[1].mean_pa = 0.2;
  a.points[1].pa2 = 0.3;
  b.points[1].mean_pa = -0.4;
  b.points[1].pa2 = 0.5;
  const auto e = combine({a, b});
  EXPECT_DOUBLE_EQ(e.mean[1].mean_pa, -0.1);
  EXPECT_DOUBLE_EQ(e.mean[1].var_pa, 0.4 - 0.01);
  EXPECT_DOUBLE_EQ(e.std_error[1].mean_pa, 0.3);
  b.points.pop_back();
  EXPECT_THROW(combine({a, b}), EnsembleError);
}

TEST(Ensemble, OrderIndependentOfBackend) {
  const auto p = fig3_params();
  const ModeSpace s({6, 4, 3});
  const auto serial = unconditional_ensemble(StateVector::vacuum(s), p, 7, 6, sse_opts(10.0, 0.02, 50),
                                             kernels::Backend::serial);
  const auto omp = unconditional_ensemble(StateVector::vacuum(s), p, 7, 6, sse_opts(10.0, 0.02, 50),
                                          kernels::Backend::openmp);
  ASSERT_EQ(serial.mean.size(), omp.mean.size());
  std::ostringstream a, b;
  write_trajectory_csv(a, serial.mean);
  write_trajectory_csv(b, omp.mean);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Ensemble, SpreadShrinksWithMoreRealizations) {
  const auto p = fig3_params();
  const ModeSpace s({8, 5, 4});
  auto spread = [&](std::size_t n) {
    NoiseSeeds seeds{1, {}};
    for (std::size_t i = 0; i < n; ++i) seeds.exchange.push_back(100 + i);
    const auto e = conditional_ensemble(StateVector::vacuum(s), p, seeds, sse_opts(200.0, 0.02, 500));
    double acc = 0.0;
    for (const auto& pt : e.std_error) acc += pt.mean_pa;
    return acc / static_cast<double>(e.std_error.size());
  };
  const double ratio = spread(16) / spread(8);
  EXPECT_GT(ratio, 0.45);
  EXPECT_LT(ratio, 1.0);
}

TEST(Unraveling, MatchesMasterEquationAtRandomRates) {
  const ThreeModeParams p{0.5, 1.0, 0.3, 0.1};
  const ModeSpace s({5, 5, 5});
  fock::QmeOptions q;
  q.t_end = 4.0;
  q.dt = 0.01;
  q.record_every = 50;
  q.top_level_tol = 1e-4;
  const auto qme = fock::evolve_qme(fock::DensityOperator::vacuum(s), p, q);
  auto so = sse_opts(4.0, 0.005, 100);
  so.top_level_tol = 1e-3;
  const auto ens = unconditional_ensemble(StateVector::vacuum(s), p, 2024, 300, so);
  ASSERT_EQ(ens.mean.size(), qme.samples.size());
  for (std::size_t i = 1; i < ens.mean.size(); ++i) {
    const auto& m = qme.samples[i].moments;
    EXPECT_NEAR(ens.mean[i].mean_n_c, m.number(fock::kCavity), 3.0 * ens.std_error[i].mean_n_c + 1e-4);
    EXPECT_NEAR(ens.mean[i].var_pa, m.cov(1, 1), 3.0 * ens.std_error[i].var_pa + 1e-4);
  }
}

TEST(TimeAverage, ZeroSignal) {
  TrajectoryRecord r;
  for (int i = 0; i < 10; ++i) r.points.push_back({static_cast<double>(i)});
  for (double v : homodyne_time_average(r)) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(homodyne_time_average(TrajectoryRecord{}), std::invalid_argument);
}

TEST(TimeAverage, WhiteNoiseAveragesAway) {
  GaussianStream g(8);
  TrajectoryRecord r;
  const double dt = 0.01;
  for (int i = 0; i <= 1000000; ++i) {
    TrajectoryPoint pt;
    pt.t = i * dt;
    pt.homodyne_signal = g.increment(dt) / dt;
    r.points.push_back(pt);
  }
  const auto avg = homodyne_time_average(r);
  // sigma of the mean after time t is 1/sqrt(t)
  for (std::size_t i : {10000u, 100000u, 1000000u}) {
    EXPECT_LT(std::abs(avg[i]), 4.0 / std::sqrt(r.points[i].t)) << i;
  }
}

TEST(TimeAverage, AsymptoteAndSlope) {
  TrajectoryRecord r;
  r.points.push_back({0.0});
  TrajectoryPoint last;
  last.t = 10.0;
  last.mean_pa = 0.5;
  last.homodyne_cummean = 0.03;
  r.points.push_back(last);
  const auto c = homodyne_asymptote_check(r, 1e-3, 1.0);
  EXPECT_NEAR(c.predicted, 2.0 * std::sqrt(1e-3) * 0.5, 1e-16);
  EXPECT_EQ(c.time_average, 0.03);
  EXPECT_DOUBLE_EQ(regression_slope({1, 2, 3, 4}, {3, 5, 7, 9}), 2.0);
  EXPECT_THROW(regression_slope({1, 1}, {2, 3}), std::invalid_argument);
}

TEST(DefaultStep, ResolvesFastestChannel) {
  EXPECT_DOUBLE_EQ(default_dt(fig3_params()), 0.02);
  ThreeModeParams p{10.0, 1.0, 0.1, 0.1};
  EXPECT_DOUBLE_EQ(default_dt(p), 0.01 / 100.0);
}
