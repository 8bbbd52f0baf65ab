#include "he3sq/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <omp.h>

#include "CLI11.hpp"
#include "he3sq/analytics.hpp"
#include "he3sq/expdesign.hpp"
#include "he3sq/fock.hpp"
#include "he3sq/gaussian.hpp"
#include "he3sq/semiclassical.hpp"
#include "he3sq/trajectories.hpp"

namespace he3sq::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kQuadratureBound = 1.0 / 16.0;
// A pure minimum-uncertainty state in a truncated space can dip below the bound by
// roughly the top-level population.
constexpr double kTruncationSlack = 1e-5;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y%m%dT%H%M%SZ");
  return os.str();
}

class ArtifactWriter {
 public:
  ArtifactWriter(fs::path dir, RunOutcome& out) : dir_(std::move(dir)), out_(out) {
    fs::create_directories(dir_);
  }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    std::ofstream f(dir_ / name);
    if (!f) throw std::runtime_error("cannot write " + (dir_ / name).string());
    body(f);
    out_.files.push_back(name);
  }

 private:
  fs::path dir_;
  RunOutcome& out_;
};

void check(RunOutcome& out, std::string name, bool pass, std::string detail) {
  out.checks.push_back({std::move(name), pass, std::move(detail)});
}

void check_norms(RunOutcome& out, const std::vector<TrajectoryPoint>& pts) {
  double worst = 0.0;
  for (const auto& p : pts) worst = std::max(worst, p.norm_error);
  check(out, "norm", worst <= 1e-8, "max |norm - 1| = " + csv::format(worst));
}

void check_uncertainty(RunOutcome& out, const std::vector<TrajectoryPoint>& pts) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) worst = std::min(worst, p.var_xa * p.var_pa);
  check(out, "quadrature_uncertainty", worst >= kQuadratureBound - kTruncationSlack,
        "min Var(X_a) Var(P_a) = " + csv::format(worst));
}

void write_ensemble(ArtifactWriter& w, const std::string& stem,
                    const trajectories::EnsembleResult& ens) {
  w.write(stem + ".csv", [&](std::ostream& os) { write_trajectory_csv(os, ens.mean); });
  w.write(stem + "_stderr.csv", [&](std::ostream& os) { write_trajectory_csv(os, ens.std_error); });
  for (std::size_t i = 0; i < ens.members.size(); ++i) {
    w.write(stem + "_member" + std::to_string(i) + ".csv",
            [&](std::ostream& os) { write_trajectory_csv(os, ens.members[i].points); });
  }
}

struct Panel {
  std::vector<TrajectoryPoint> mean;
  std::vector<TrajectoryPoint> err;
  nlohmann::json manifest;
};

Panel fig3_panel(const config::RunConfig& c, const ThreeModeParams& p, double t_end,
                 const std::vector<int>& dims, const std::vector<std::uint64_t>& exchange) {
  if (c.fig3_engine == "gaussian") {
    // Exchange and decoherence channels are unmonitored, so the Gaussian conditional state
    // is already the average over their noise.
    const auto model = gaussian::three_mode_model(p);
    std::vector<GaussianStream> s{GaussianStream(c.homodyne_seed)};
    const auto samples = gaussian::evolve_conditional(gaussian::GaussianState::vacuum(3), model, s,
                                                      t_end, c.dt, c.record_every);
    auto pts = gaussian::to_points(samples);
    std::vector<TrajectoryPoint> zeros(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) zeros[i].t = pts[i].t;
    return {pts, zeros, {{"engine", "gaussian"}, {"homodyne_seed", c.homodyne_seed}}};
  }
  const fock::ModeSpace space(dims);
  const auto psi0 = fock::StateVector::vacuum(space);
  trajectories::SseOptions opt;
  opt.t_end = t_end;
  opt.dt = c.dt;
  opt.record_every = c.record_every;
  const auto ens = trajectories::conditional_ensemble(psi0, p, {c.homodyne_seed, exchange}, opt);
  return {ens.mean, ens.std_error, ens.manifest};
}

void run_fig3(const config::RunConfig& c, ArtifactWriter& w, RunOutcome& out) {
  const ThreeModeParams& p = c.params;
  const double gsq = analytics::squeezing_rate(p);
  const double ratio = p.gamma_f / p.gamma_m;

  const Panel abc = fig3_panel(c, p, c.t_end, c.dims, c.exchange_seeds);
  ThreeModeParams pd = p;
  pd.gamma_0 = c.fig3_gamma_0;
  const Panel d = fig3_panel(c, pd, c.fig3_t_end_decoherence, c.fig3_dims_decoherence,
                             c.fig3_decoherence_seeds);
  const double g0p = analytics::effective_relaxation(pd.gamma_0, pd.gamma_f, pd.gamma_m);
  const auto lim = analytics::decoherence_limits(gsq, g0p);

  w.write("fig3a_signal.csv", [&](std::ostream& os) {
    csv::Writer cw(os, {"t", "homodyne_signal", "homodyne_current"});
    for (const auto& pt : abc.mean) cw.row({pt.t, pt.homodyne_signal, pt.homodyne_current});
  });
  w.write("fig3b_time_average.csv", [&](std::ostream& os) {
    csv::Writer cw(os, {"t", "homodyne_cummean", "scaled_mean_Pa"});
    for (const auto& pt : abc.mean) {
      cw.row({pt.t, pt.homodyne_cummean, analytics::homodyne_asymptote(gsq, p.kappa, pt.mean_pa)});
    }
  });
  w.write("fig3c_variance.csv", [&](std::ostream& os) {
    csv::Writer cw(os, {"t", "gamma_sq_t", "var_Pa", "var_Pa_stderr", "var_Pa_analytic"});
    for (std::size_t i = 0; i < abc.mean.size(); ++i) {
      const auto& pt = abc.mean[i];
      cw.row({pt.t, gsq * pt.t, pt.var_pa, abc.err[i].var_pa, analytics::var_pa(pt.t, gsq, ratio)});
    }
  });
  w.write("fig3d_decoherence.csv", [&](std::ostream& os) {
    csv::Writer cw(os, {"t", "gamma_sq_t", "var_Pa", "var_Pa_stderr", "var_Pa_analytic",
                        "var_Pa_limit"});
    for (std::size_t i = 0; i < d.mean.size(); ++i) {
      const auto& pt = d.mean[i];
      cw.row({pt.t, gsq * pt.t, pt.var_pa, d.err[i].var_pa, analytics::var_pa(pt.t, gsq, ratio),
              lim.var_pa_inf});
    }
  });
  w.write("fig3_ensemble.csv", [&](std::ostream& os) { write_trajectory_csv(os, abc.mean); });
  w.write("fig3_decoherence_ensemble.csv",
          [&](std::ostream& os) { write_trajectory_csv(os, d.mean); });
  check_uncertainty(out, abc.mean);
  check_uncertainty(out, d.mean);
  check_norms(out, abc.mean);
  check_norms(out, d.mean);
  out.manifest["panels"] = {
      {"a", {{"file", "fig3a_signal.csv"}}},
      {"b", {{"file", "fig3b_time_average.csv"}, {"overlay", "homodyne_asymptote"}}},
      {"c", {{"file", "fig3c_variance.csv"}, {"overlay", "var_pa"}}},
      {"d", {{"file", "fig3d_decoherence.csv"}, {"overlay", "decoherence_var_pa"}}}};
  out.manifest["analytics"] = {{"gamma_sq", gsq},
                               {"ratio", ratio},
                               {"kappa", p.kappa},
                               {"gamma_0", pd.gamma_0},
                               {"gamma_0_prime", g0p},
                               {"var_pa_limit", lim.var_pa_inf}};
  out.manifest["engine"] = {{"abc", abc.manifest}, {"d", d.manifest}};
}

void run_engine(const config::RunConfig& c, ArtifactWriter& w, RunOutcome& out) {
  using config::Model;
  switch (c.model) {
    case Model::semiclassical: {
      const auto& s = c.semi;
      const auto ex = semiclassical::exchange_rates(s.polarization, s.tau_inv, s.t_inv());
      const auto spins = semiclassical::steady_spins(s.polarization, s.n_ground_cell,
                                                     s.n_meta_cell, 2.0 * s.sx);
      const semiclassical::LinearizedCoefficients k{c.semi_kappa, ex.gamma_f, ex.gamma_m,
                                                    s.chi, s.sx, spins.kx};
      Eigen::Matrix<double, 6, 1> x0;
      for (int i = 0; i < 6; ++i) x0(i) = c.initial[static_cast<std::size_t>(i)];
      const auto series = semiclassical::integrate_linearized(
          semiclassical::FluctuationState::from_vector(x0), k, c.t_end, c.dt, c.record_every);
      w.write("semiclassical.csv", [&](std::ostream& os) { semiclassical::write_csv(os, series); });
      bool finite = true;
      for (const auto& smp : series) finite = finite && smp.x.to_vector().allFinite();
      check(out, "finite", finite, "all fluctuation components finite");
      out.manifest["engine"] = {{"gamma_f", ex.gamma_f}, {"gamma_m", ex.gamma_m}, {"kx", spins.kx}};
      break;
    }
    case Model::qme3: {
      const fock::ModeSpace space(c.dims);
      fock::QmeOptions opt;
      opt.t_end = c.t_end;
      opt.dt = c.dt;
      opt.record_every = c.record_every;
      const auto res = fock::evolve_qme(fock::DensityOperator::vacuum(space), c.params, opt);
      w.write("qme.csv", [&](std::ostream& os) { fock::write_qme_csv(os, res.samples); });
      double worst = 0.0;
      for (const auto& s : res.samples) worst = std::max(worst, s.trace_error);
      const double bound = 1e-8 * std::max(1.0, c.params.kappa * c.t_end);
      check(out, "trace", worst <= bound, "max trace error " + csv::format(worst));
      out.manifest["engine"] = {{"dims", c.dims}, {"steps_dt", c.dt}};
      break;
    }
    case Model::gaussian: {
      const auto model = gaussian::three_mode_model(c.params);
      const auto g0 = gaussian::GaussianState::vacuum(3);
      std::vector<gaussian::GaussianSample> samples;
      if (c.conditional) {
        std::vector<GaussianStream> s{GaussianStream(c.homodyne_seed)};
        samples = gaussian::evolve_conditional(g0, model, s, c.t_end, c.dt, c.record_every);
        w.write("trajectory.csv",
                [&](std::ostream& os) { write_trajectory_csv(os, gaussian::to_points(samples)); });
      } else {
        samples = gaussian::evolve_unconditional(g0, model, c.t_end, c.dt, c.record_every);
      }
      w.write("gaussian.csv", [&](std::ostream& os) { gaussian::write_moment_csv(os, samples); });
      double worst = std::numeric_limits<double>::infinity();
      for (const auto& s : samples) worst = std::min(worst, s.state.uncertainty_margin());
      check(out, "uncertainty", worst >= -1e-9, "min eigenvalue of V + i sigma/4 = " + csv::format(worst));
      out.manifest["engine"] = {{"conditional", c.conditional}, {"homodyne_seed", c.homodyne_seed}};
      break;
    }
    case Model::sse1: {
      const fock::ModeSpace space(c.dims);
      const auto phi0 = fock::StateVector::vacuum(space);
      trajectories::OneModeOptions opt;
      opt.t_end = c.t_end;
      opt.dt = c.dt;
      opt.record_every = c.record_every;
      if (c.n_trajectories > 0) {
        const auto ens =
            trajectories::one_mode_ensemble(phi0, c.gamma_sq, c.homodyne_seed, c.n_trajectories, opt);
        write_ensemble(w, "ensemble", ens);
        check_norms(out, ens.mean);
        out.manifest["engine"] = ens.manifest;
      } else {
        GaussianStream s(c.homodyne_seed);
        const auto rec = trajectories::sse_one_mode(phi0, c.gamma_sq, s, opt);
        w.write("trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, rec.points); });
        check_norms(out, rec.points);
        check_uncertainty(out, rec.points);
        out.manifest["engine"] = rec.manifest;
      }
      break;
    }
    case Model::sse3: {
      const fock::ModeSpace space(c.dims);
      const auto psi0 = fock::StateVector::vacuum(space);
      trajectories::SseOptions opt;
      opt.t_end = c.t_end;
      opt.dt = c.dt;
      opt.record_every = c.record_every;
      const auto ens =
          c.n_trajectories > 0
              ? trajectories::unconditional_ensemble(psi0, c.params, c.homodyne_seed,
                                                     c.n_trajectories, opt)
              : trajectories::conditional_ensemble(psi0, c.params,
                                                   {c.homodyne_seed, c.exchange_seeds}, opt);
      write_ensemble(w, "ensemble", ens);
      check_norms(out, ens.mean);
      check_uncertainty(out, ens.mean);
      out.manifest["engine"] = ens.manifest;
      break;
    }
    case Model::fig3:
      run_fig3(c, w, out);
      break;
  }
}

void print_checks(std::ostream& os, const std::vector<CheckResult>& checks) {
  for (const auto& c : checks) {
    os << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  }
}

bool all_pass(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

CheckResult within(const std::string& name, double value, double expected, double rel) {
  const bool ok = std::abs(value - expected) <= rel * std::abs(expected);
  return {name, ok, csv::format(value) + " vs " + csv::format(expected)};
}

std::vector<std::pair<std::string, std::string>> parse_pairs(const std::vector<std::string>& raw) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& s : raw) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      out.emplace_back(s, s);
    } else {
      out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
  }
  return out;
}

}  // namespace

CompareReport compare(const csv::Table& a, const csv::Table& b, double abs_tol, double rel_tol,
                      std::vector<std::pair<std::string, std::string>> pairs) {
  if (pairs.empty()) {
    for (const auto& h : a.header) {
      if (b.index_of(h)) pairs.emplace_back(h, h);
    }
    if (pairs.empty()) throw SchemaError("no common columns");
  }
  if (a.rows.size() != b.rows.size()) {
    throw SchemaError("row counts differ: " + std::to_string(a.rows.size()) + " vs " +
                      std::to_string(b.rows.size()));
  }
  CompareReport rep;
  for (const auto& [left, right] : pairs) {
    const auto ia = a.index_of(left);
    const auto ib = b.index_of(right);
    if (!ia) throw SchemaError("missing column " + left);
    if (!ib) throw SchemaError("missing column " + right);
    ColumnDeviation d{left == right ? left : left + "=" + right, 0.0, 0.0, true};
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
      const double x = a.rows[r][*ia];
      const double y = b.rows[r][*ib];
      const double dev = std::abs(x - y);
      d.max_abs = std::max(d.max_abs, dev);
      if (y != 0.0) d.max_rel = std::max(d.max_rel, dev / std::abs(y));
      if (!(dev <= abs_tol + rel_tol * std::abs(y))) d.pass = false;
    }
    rep.pass = rep.pass && d.pass;
    rep.columns.push_back(d);
  }
  return rep;
}

fs::path default_run_directory(const config::RunConfig& c, const fs::path& root) {
  std::ostringstream h;
  h << std::hex << std::setw(8) << std::setfill('0')
    << (fnv1a(config::serialize(c)) & 0xffffffffULL);
  return root / (utc_timestamp() + "-" + h.str());
}

RunOutcome execute(const config::RunConfig& c, const fs::path& dir) {
  if (auto v = config::violations(c); !v.empty()) throw config::ConfigError(v);
  RunOutcome out;
  out.directory = dir;
  ArtifactWriter w(dir, out);
  w.write("config.cfg", [&](std::ostream& os) { os << config::serialize(c); });
  run_engine(c, w, out);

  nlohmann::json checks = nlohmann::json::array();
  for (const auto& ch : out.checks) {
    checks.push_back({{"name", ch.name}, {"pass", ch.pass}, {"detail", ch.detail}});
  }
  out.manifest["config"] = config::to_json(c);
  out.manifest["version"] = HE3SQ_VERSION;
  out.manifest["timestamp"] = utc_timestamp();
  out.manifest["seeds"] = {{"homodyne", c.homodyne_seed}, {"exchange", c.exchange_seeds}};
  out.manifest["files"] = out.files;
  out.manifest["checks"] = checks;
  std::ofstream(dir / "manifest.json") << out.manifest.dump(2) << '\n';
  return out;
}

std::vector<CheckResult> run_checks(const std::string& suite, const std::string& golden_path) {
  std::vector<CheckResult> out;
  if (suite == "analytics") {
    const auto f = fig3_params();
    out.push_back(within("squeezing_rate fig3", analytics::squeezing_rate(f), 1e-3, 1e-12));
    out.push_back(within("var_pa at Gamma_sq t = 1", analytics::var_pa(1.0, 1.0, 0.1), 0.1375, 1e-12));
    out.push_back(within("cavity photons fig3",
                         analytics::cavity_photon_steady(f.omega, f.kappa, f.gamma_m, f.gamma_f),
                         0.0025 * (1.0 - 0.2 / 1.22), 1e-12));
    const auto lim = analytics::decoherence_limits(1.4, 3.8e-2);
    out.push_back({"limit product", lim.var_pa_inf * lim.var_xa_inf == 1.0 / 16.0,
                   csv::format(lim.var_pa_inf * lim.var_xa_inf)});
    out.push_back({"experimental squeezing limit", std::abs(lim.squeezing_db + 8.0) <= 0.5,
                   csv::format(lim.squeezing_db) + " dB"});
    nlohmann::json golden = analytics::golden_vectors();
    if (!golden_path.empty()) {
      std::ifstream in(golden_path);
      if (!in) throw config::ConfigError({"cannot open " + golden_path});
      golden = nlohmann::json::parse(in);
    }
    const auto bad = analytics::check_golden(golden, 1e-12);
    std::string detail = bad.empty() ? "all entries reproduce" : "";
    for (const auto& m : bad) detail += m.key + " ";
    out.push_back({"golden vectors", bad.empty(), detail});
  } else if (suite == "design") {
    const auto r = expdesign::derive_all({});
    const double two_pi = 2.0 * std::numbers::pi;
    out.push_back(within("N", r.n_ground, 1.0e16, 0.01));
    out.push_back(within("n", r.n_meta, 1.3e10, 0.03));
    out.push_back(within("kappa", r.kappa, two_pi * 1.0e8, 0.01));
    out.push_back(within("gamma_m", r.gamma_m, 5.2e6, 0.02));
    out.push_back(within("gamma_f", r.gamma_f, 7.0, 0.02));
    out.push_back(within("Gamma_sq", r.gamma_sq, 1.4, 0.05));
    out.push_back({"squeezing limit", std::abs(r.squeezing_limit_db + 8.0) <= 0.5,
                   csv::format(r.squeezing_limit_db) + " dB"});
    out.push_back({"field tolerance", expdesign::field_tolerance(10.0) == 1.5e-7,
                   csv::format(expdesign::field_tolerance(10.0)) + " G"});
  } else {
    throw config::ConfigError({"unknown check suite '" + suite + "'"});
  }
  return out;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"he3sq: measurement-based nuclear spin squeezing simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(HE3SQ_VERSION));

  std::string config_path;
  std::string check_name;
  std::string golden_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<double> dt;
  std::optional<double> t_end;
  auto* run = app.add_subcommand("run", "run a configured simulation");
  run->add_option("config", config_path, "run configuration file");
  run->add_option("--check", check_name, "run a verification suite instead (analytics, design)");
  run->add_option("--golden", golden_path, "golden vector file for --check analytics");
  run->add_option("--seed", seed, "homodyne seed (and base seed of unconditional ensembles)");
  run->add_option("--out", out_dir, "output directory (default runs/<timestamp>-<hash>)");
  run->add_option("--threads", threads, "OpenMP threads");
  run->add_option("--dt", dt, "time step");
  run->add_option("--t-end", t_end, "final time");

  std::string design_path;
  std::string design_out;
  auto* design = app.add_subcommand("design", "derive the experimental design numbers");
  design->add_option("file", design_path, "cell design file (defaults to the reference cell)");
  design->add_option("--out", design_out, "write the JSON report here");

  std::string file_a;
  std::string file_b;
  double abs_tol = 1e-6;
  double rel_tol = 0.0;
  std::vector<std::string> pairs;
  auto* cmp = app.add_subcommand("compare", "compare two CSV files column by column");
  cmp->add_option("a", file_a, "first CSV")->required();
  cmp->add_option("b", file_b, "second CSV")->required();
  cmp->add_option("--abs", abs_tol, "absolute tolerance");
  cmp->add_option("--rel", rel_tol, "relative tolerance");
  cmp->add_option("--pair", pairs, "column pair left=right (repeatable)");

  std::string suite;
  std::string check_golden;
  auto* chk = app.add_subcommand("check", "run a verification suite");
  chk->add_option("suite", suite, "analytics or design")->required();
  chk->add_option("--golden", check_golden, "golden vector file");
  std::string export_golden;
  chk->add_option("--export", export_golden, "write the golden vectors to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*chk || (*run && !check_name.empty())) {
      const std::string name = *chk ? suite : check_name;
      const std::string gold = *chk ? check_golden : golden_path;
      if (!export_golden.empty()) {
        std::ofstream(export_golden) << analytics::golden_vectors().dump(2) << '\n';
      }
      const auto res = run_checks(name, gold);
      print_checks(out, res);
      return all_pass(res) ? kOk : kCheckFailure;
    }
    if (*run) {
      if (config_path.empty()) throw config::ConfigError({"run needs a config file or --check"});
      auto c = config::read_file(config_path);
      if (seed) c.homodyne_seed = *seed;
      if (threads) c.threads = *threads;
      if (dt) c.dt = *dt;
      if (t_end) c.t_end = *t_end;
      if (auto v = config::violations(c); !v.empty()) throw config::ConfigError(v);
      if (c.threads > 0) omp_set_num_threads(c.threads);
      const fs::path dir = out_dir.empty() ? default_run_directory(c, c.output_dir) : fs::path(out_dir);
      RunOutcome res;
      try {
        res = execute(c, dir);
      } catch (const config::ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        err << "engine error: " << e.what() << '\n';
        return kEngineError;
      }
      out << "wrote " << res.files.size() << " files to " << res.directory.string() << '\n';
      print_checks(out, res.checks);
      return all_pass(res.checks) ? kOk : kCheckFailure;
    }
    if (*design) {
      const auto d = design_path.empty() ? expdesign::CellDesign{}
                                         : expdesign::read_design_file(design_path);
      const auto r = expdesign::derive_all(d);
      expdesign::write_table(out, r);
      if (!design_out.empty()) {
        nlohmann::json j = expdesign::to_json(r);
        j["version"] = HE3SQ_VERSION;
        std::ofstream(design_out) << j.dump(2) << '\n';
      }
      return kOk;
    }
    if (*cmp) {
      for (const auto& f : {file_a, file_b}) {
        if (!fs::exists(f)) throw config::ConfigError({"cannot open " + f});
      }
      const auto a = csv::read_file(file_a);
      const auto b = csv::read_file(file_b);
      const auto rep = compare(a, b, abs_tol, rel_tol, parse_pairs(pairs));
      for (const auto& col : rep.columns) {
        out << (col.pass ? "PASS " : "FAIL ") << col.column << " max_abs=" << csv::format(col.max_abs)
            << " max_rel=" << csv::format(col.max_rel) << '\n';
      }
      return rep.pass ? kOk : kCheckFailure;
    }
  } catch (const config::ConfigError& e) {
    err << e.what() << '\n';
    return kConfigError;
  } catch (const SchemaError& e) {
    err << "schema mismatch: " << e.what() << '\n';
    return kConfigError;
  } catch (const expdesign::DesignError& e) {
    err << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kEngineError;
  }
  return kOk;
}

}  // namespace he3sq::cli
