// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "he3sq/analytics.hpp"
#include "he3sq/expdesign.hpp"
#include "he3sq/fock.hpp"
#include "he3sq/gaussian.hpp"
#include "he3sq/model.hpp"
#include "he3sq/noise.hpp"
#include "he3sq/trajectories.hpp"

using namespace he3sq;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a / b - 1.0); }

// 1: design numbers of the reference cell
Verdict design_numbers() {
  const auto r = expdesign::derive_all(expdesign::CellDesign{});
  const double two_pi = 2.0 * std::numbers::pi;
  struct Item {
    const char* name;
    double value, target, tol;
  };
  const Item items[] = {{"N", r.n_ground, 1.0e16, 0.01},       {"n", r.n_meta, 1.3e10, 0.03},
                        {"kappa", r.kappa, two_pi * 1.0e8, 0.01}, {"gamma_m", r.gamma_m, 5.2e6, 0.02},
                        {"gamma_f", r.gamma_f, 7.0, 0.02},         {"Gamma_sq", r.gamma_sq, 1.4, 0.05}};
  bool ok = true;
  std::string d;
  for (const auto& it : items) {
    const double e = rel(it.value, it.target);
    ok &= e <= it.tol;
    d += fmt("%s=%.4g(%+.1f%%) ", it.name, it.value, 100.0 * (it.value / it.target - 1.0));
  }
  ok &= std::abs(r.squeezing_limit_db + 8.0) <= 0.5;
  const double b = expdesign::field_tolerance(10.0);
  ok &= b == 1.5e-7;
  d += fmt("limit=%.3f dB B(10 s)=%g G", r.squeezing_limit_db, b);
  return {ok, d};
}

// 2: QME steady photon number against the closed form, and under doubled truncation
Verdict photon_steady_state() {
  const auto p = fig3_params();
  const double exact = analytics::cavity_photon_steady(p.omega, p.kappa, p.gamma_m, p.gamma_f);
  const auto base = fock::cavity_photon_steady_sim(p, {5, 5, 6});
  const auto twice = fock::cavity_photon_steady_sim(p, {10, 10, 12});
  const double e = rel(base.mean_n_c, exact);
  const double change = rel(twice.mean_n_c, base.mean_n_c);
  return {e < 0.01 && change < 1e-3,
          fmt("<c^dag c>=%.6e closed form=%.6e rel=%.2e; dims 5,5,6 -> 10,10,12 change=%.2e",
              base.mean_n_c, exact, e, change)};
}

// 3: conditional variance of the three-mode SSE against (1/4)(1+0.1x)/(1+x)
Verdict conditional_variance_law() {
  const auto p = fig3_params();
  const double gsq = analytics::squeezing_rate(p);
  trajectories::SseOptions o;
  o.t_end = 3.0 / gsq;
  o.dt = 0.02;
  o.record_every = 25;  // Gamma_sq t steps of 5e-4
  const NoiseSeeds seeds{1, {11, 12, 13, 14, 15}};
  const auto ens = trajectories::conditional_ensemble(
      fock::StateVector::vacuum(fock::ModeSpace({24, 8, 4})), p, seeds, o);
  double worst = 0.0, worst_x = 0.0;
  std::string at;
  for (const auto& pt : ens.mean) {
    const double x = pt.t * gsq;
    if (x < 0.5 - 1e-9 || x > 3.0 + 1e-9) continue;
    const double law = analytics::var_pa(pt.t, gsq, p.gamma_f / p.gamma_m);
    const double e = pt.var_pa / law - 1.0;
    if (std::abs(e) > std::abs(worst)) {
      worst = e;
      worst_x = x;
    }
    for (double mark : {0.5, 1.0, 2.0, 3.0}) {
      if (std::abs(x - mark) < 1e-9) at += fmt("x=%.1f:%.4f/%.4f ", x, pt.var_pa, law);
    }
  }
  return {std::abs(worst) <= 0.10,
          at + fmt("worst %+.1f%% at Gamma_sq t=%.3f", 100.0 * worst, worst_x)};
}

// 4: late-time homodyne mean against 2 sqrt(Gamma_sq/kappa) <P_a>, slope over records
Verdict homodyne_slope() {
  const auto p = fig3_params();
  const double gsq = analytics::squeezing_rate(p);
  const double t_end = 100.0 / gsq;
  std::vector<std::vector<GaussianStream>> batches;
  for (std::uint64_t s = 0; s < 24; ++s) batches.push_back({GaussianStream(mix_seed(500 + s))});
  const auto recs = gaussian::evolve_conditional_batch(gaussian::GaussianState::vacuum(3),
                                                       gaussian::three_mode_model(p), batches, t_end,
                                                       0.02, 1000000);
  std::vector<double> xs, ys;
  for (const auto& r : recs) {
    xs.push_back(analytics::homodyne_asymptote(gsq, p.kappa, r.back().state.mean(1)));
    ys.push_back(r.back().signal_cummean);
  }
  const double slope = trajectories::regression_slope(xs, ys);
  return {std::abs(slope - 1.0) <= 0.1,
          fmt("slope=%.4f over %zu records at Gamma_sq T=100 (finite-T expectation %.4f)", slope,
              recs.size(), (1.0 - std::log(101.0) / 100.0) / (100.0 / 101.0))};
}

// 5: decoherence plateau and the exact product identity
Verdict decoherence_plateau() {
  const auto p = fig3_params(1e-3);
  const double gsq = analytics::squeezing_rate(p);
  const double g0p = analytics::effective_relaxation(p.gamma_0, p.gamma_f, p.gamma_m);
  const auto lim = analytics::decoherence_limits(gsq, g0p);
  trajectories::SseOptions o;
  o.t_end = 10.0 / gsq;
  o.dt = 0.02;
  o.record_every = 5000;
  const NoiseSeeds seeds{1, {21, 22, 23, 24, 25, 26, 27, 28}};
  const auto ens = trajectories::conditional_ensemble(
      fock::StateVector::vacuum(fock::ModeSpace({30, 9, 4})), p, seeds, o);
  double sum = 0.0;
  int n = 0;
  for (const auto& pt : ens.mean) {
    if (pt.t * gsq >= 8.0 - 1e-9) {
      sum += pt.var_pa;
      ++n;
    }
  }
  const double plateau = sum / n;
  const double target = 0.25 * std::sqrt(0.1);
  bool exact = lim.var_pa_inf * lim.var_xa_inf == 1.0 / 16.0;
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int i = 0; i < 100000; ++i) {
    const auto l = analytics::decoherence_limits(std::pow(10.0, u(rng)), std::pow(10.0, u(rng)));
    exact &= l.var_pa_inf * l.var_xa_inf == 1.0 / 16.0;
  }
  const double e = plateau / target - 1.0;
  return {std::abs(e) <= 0.2 && exact && rel(lim.var_pa_inf, target) < 1e-12,
          fmt("plateau Var(P_a)=%.4f over Gamma_sq t in [8,10] vs %.4f (%+.1f%%); product exactly 1/16: %s",
              plateau, target, 100.0 * e, exact ? "yes" : "no")};
}

// 6: Gaussian and Fock moments, record-independent conditional covariance
Verdict cross_engine() {
  const auto p = fig3_params();
  fock::QmeOptions q;
  q.t_end = 20.0;
  q.dt = 0.02;
  q.record_every = 25;
  const auto qme = fock::evolve_qme(fock::DensityOperator::vacuum(fock::ModeSpace({5, 5, 6})), p, q);
  const auto m = gaussian::three_mode_model(p);
  const auto gau = gaussian::evolve_unconditional(gaussian::GaussianState::vacuum(3), m, 20.0, 0.02, 25);
  double worst = 0.0;
  for (std::size_t i = 0; i < gau.size() && i < qme.samples.size(); ++i) {
    worst = std::max(worst, (qme.samples[i].moments.cov - gau[i].state.cov).cwiseAbs().maxCoeff());
    worst = std::max(worst, (qme.samples[i].moments.mean - gau[i].state.mean).cwiseAbs().maxCoeff());
  }
  const bool grid = gau.size() == qme.samples.size();

  std::vector<GaussianStream> s1{GaussianStream(1)}, s2{GaussianStream(2)};
  const auto a = gaussian::evolve_conditional(gaussian::GaussianState::vacuum(3), m, s1, 200.0, 0.02, 100);
  const auto b = gaussian::evolve_conditional(gaussian::GaussianState::vacuum(3), m, s2, 200.0, 0.02, 100);
  bool same_cov = a.size() == b.size();
  bool means_differ = false;
  for (std::size_t i = 0; same_cov && i < a.size(); ++i) {
    same_cov &= a[i].state.cov == b[i].state.cov;
    means_differ |= a[i].state.mean != b[i].state.mean;
  }
  return {grid && worst <= 1e-6 && same_cov && means_differ,
          fmt("max |moment difference| over kappa t in [0,20] = %.2e; conditional covariance identical "
              "across two records: %s",
              worst, same_cov && means_differ ? "yes" : "no")};
}

// 7: unconditional SSE ensemble against the QME
Verdict unraveling() {
  const auto p = fig3_params();
  const fock::ModeSpace space({5, 5, 6});
  fock::QmeOptions q;
  q.t_end = 20.0;
  q.dt = 0.01;
  q.record_every = 250;
  const auto qme = fock::evolve_qme(fock::DensityOperator::vacuum(space), p, q);
  trajectories::SseOptions o;
  o.t_end = 20.0;
  o.dt = 0.005;
  o.record_every = 500;
  const auto ens = trajectories::unconditional_ensemble(fock::StateVector::vacuum(space), p, 2026, 256, o);
  if (ens.mean.size() != qme.samples.size()) return {false, "time grids differ"};
  double worst_nc = 0.0, worst_var = 0.0;
  for (std::size_t i = 1; i < ens.mean.size(); ++i) {
    const auto& mo = qme.samples[i].moments;
    worst_nc = std::max(worst_nc, std::abs(ens.mean[i].mean_n_c - mo.number(fock::kCavity)) /
                                      ens.std_error[i].mean_n_c);
    worst_var = std::max(worst_var, std::abs(ens.mean[i].var_pa - mo.cov(1, 1)) / ens.std_error[i].var_pa);
  }
  return {worst_nc <= 3.0 && worst_var <= 3.0,
          fmt("256 trajectories; worst deviation <c^dag c> %.2f SE, Var(P_a) %.2f SE (kappa t = 2.5..20)",
              worst_nc, worst_var)};
}

// 8: one-mode variance law
Verdict one_mode_law() {
  const fock::ModeSpace space({40});
  trajectories::OneModeOptions o;
  o.t_end = 5.0;
  o.dt = 1e-3;
  o.record_every = 10;
  double worst = 0.0;
  bool start = true;
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    GaussianStream g(seed);
    const auto rec = trajectories::sse_one_mode(fock::StateVector::vacuum(space), 1.0, g, o);
    start &= rec.points.front().t == 0.0 && rec.points.front().var_pa == 0.25;
    for (const auto& pt : rec.points) {
      worst = std::max(worst, rel(pt.var_pa, 0.25 / (1.0 + pt.t)));
    }
  }
  return {worst <= 1e-3 && start,
          fmt("worst relative error %.2e over 5 records, Gamma_sq dt = 1e-3; Var at t=0 exactly 1/4: %s",
              worst, start ? "yes" : "no")};
}

// 9: identities that stand in for the experimental-scale run
Verdict experimental_scale_properties() {
  const auto r = expdesign::derive_all(expdesign::CellDesign{});
  bool ok = rel(r.gamma_m / r.gamma_f, r.n_ground / r.n_meta) < 1e-6;
  ok &= r.gamma_sq == analytics::squeezing_rate(r.omega, r.kappa, r.gamma_f, r.gamma_m);
  const auto lim = analytics::decoherence_limits(r.gamma_sq, r.gamma_0_prime);
  ok &= lim.var_pa_inf * lim.var_xa_inf == 1.0 / 16.0;

  // the experimental rates and their kappa = 1 image give the same Riccati flow in Gamma_sq t
  const ThreeModeParams lab{r.omega, r.kappa, r.gamma_m, r.gamma_f, 0.0, true};
  const auto unit = nondimensionalize(lab);
  ok &= rel(redimensionalize(unit).omega, lab.omega) < 1e-15;
  const double g_lab = analytics::squeezing_rate(lab);
  const double g_unit = analytics::squeezing_rate(unit.scaled);
  ok &= rel(g_lab / r.kappa, g_unit) < 1e-14;
  double worst = 0.0;
  std::vector<GaussianStream> s1{GaussianStream(3)}, s2{GaussianStream(3)};
  const auto a = gaussian::evolve_conditional(gaussian::GaussianState::vacuum(3),
                                              gaussian::three_mode_model(unit.scaled), s1, 2.0e4, 0.02, 1000);
  const auto b = gaussian::evolve_conditional(gaussian::GaussianState::vacuum(3),
                                              gaussian::three_mode_model(lab), s2, 2.0e4 / r.kappa,
                                              0.02 / r.kappa, 1000);
  ok &= a.size() == b.size();
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    worst = std::max(worst, (a[i].state.cov - b[i].state.cov).cwiseAbs().maxCoeff());
  }
  ok &= worst < 1e-9;

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_scale = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double om = u(rng), ka = 1.0 + u(rng), gm = u(rng), gf = gm * u(rng), t = 50.0 * u(rng);
    const double s = std::pow(10.0, 16.0 * u(rng) - 8.0);
    const double g1 = analytics::squeezing_rate(om, ka, gf, gm);
    const double g2 = analytics::squeezing_rate(s * om, s * ka, s * gf, s * gm);
    worst_scale = std::max(worst_scale, std::abs(analytics::var_pa(t / s, g2, gf / gm) -
                                                 analytics::var_pa(t, g1, gf / gm)));
  }
  ok &= worst_scale < 1e-14;
  return {ok, fmt("design and limit identities exact; lab-rate vs kappa=1 Riccati max diff %.2e; "
                  "rate-rescaling invariance max diff %.2e",
                  worst, worst_scale)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"design pipeline numbers", design_numbers},
      {"cavity photon steady state", photon_steady_state},
      {"conditional variance law (three-mode SSE)", conditional_variance_law},
      {"homodyne asymptote slope", homodyne_slope},
      {"decoherence plateau", decoherence_plateau},
      {"Gaussian vs Fock oracle", cross_engine},
      {"unraveling vs master equation", unraveling},
      {"one-mode variance law", one_mode_law},
      {"experimental-scale properties", experimental_scale_properties},
  };
  // optional arguments pick criteria by number; default runs all
  std::vector<std::size_t> pick;
  for (int a = 1; a < argc; ++a) pick.push_back(std::stoul(argv[a]));
  if (pick.empty()) {
    for (std::size_t i = 1; i <= criteria.size(); ++i) pick.push_back(i);
  }
  int failed = 0;
  for (std::size_t n : pick) {
    if (n < 1 || n > criteria.size()) {
      std::printf("no criterion %zu\n", n);
      return 2;
    }
    const std::size_t i = n - 1;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %zu %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !v.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(pick.size()) - failed, pick.size());
  return failed == 0 ? 0 : 1;
}
