#include "he3sq/analytics.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

namespace he3sq::analytics {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw AnalyticsError(std::string(what) + " must be positive");
}

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0)) throw AnalyticsError(std::string(what) + " must be non-negative");
}

}  // namespace

double squeezing_rate(double omega, double kappa, double gamma_f, double gamma_m) {
  require_positive(kappa, "kappa");
  require_positive(gamma_m, "gamma_m");
  require_nonnegative(gamma_f, "gamma_f");
  return omega * omega * gamma_f / (kappa * gamma_m);
}

double squeezing_rate(const ThreeModeParams& p) {
  return squeezing_rate(p.omega, p.kappa, p.gamma_f, p.gamma_m);
}

double var_pa(double t, double gamma_sq, double ratio) {
  require_nonnegative(t, "t");
  require_nonnegative(gamma_sq, "gamma_sq");
  require_nonnegative(ratio, "gamma_f/gamma_m");
  const double x = gamma_sq * t;
  return 0.25 * (1.0 + ratio * x) / (1.0 + x);
}

double intrinsic_floor(double ratio) {
  require_nonnegative(ratio, "gamma_f/gamma_m");
  return 0.25 * ratio;
}

double cavity_photon_steady(double omega, double kappa, double gamma_m, double gamma_f) {
  require_positive(kappa, "kappa");
  require_nonnegative(gamma_m, "gamma_m");
  require_nonnegative(gamma_f, "gamma_f");
  const double q = omega / (2.0 * kappa);
  return q * q * (1.0 - 2.0 * gamma_m / (kappa + 2.0 * (gamma_m + gamma_f)));
}

double effective_relaxation(double gamma_0, double gamma_f, double gamma_m) {
  require_positive(gamma_m, "gamma_m");
  require_nonnegative(gamma_0, "gamma_0");
  require_nonnegative(gamma_f, "gamma_f");
  return gamma_0 * gamma_f / gamma_m;
}

double squeezing_db(double var) {
  require_positive(var, "variance");
  return 10.0 * std::log10(4.0 * var);
}

DecoherenceLimits decoherence_limits(double gamma_sq, double gamma_0_prime) {
  require_positive(gamma_sq, "gamma_sq");
  require_positive(gamma_0_prime, "gamma_0'");
  DecoherenceLimits out;
  // want s * x == 1 exactly in floating point with s ~ sqrt(gamma_0'/Gamma_sq), x ~ 1/s.
  // Fix whichever of the two has the smaller mantissa (<= sqrt 2); the neighbours of the
  // other one then step the product by less than the rounding interval around 1, so a
  // partner lies within an ulp or two. Scaling by 1/4 is exact.
  const double root = std::sqrt(gamma_0_prime / gamma_sq);
  const auto partner = [](double a) {
    const double b0 = 1.0 / a;
    for (int k = 0; k <= 8; ++k) {
      const int off = (k % 2 ? 1 : -1) * ((k + 1) / 2);  // 0, +1, -1, +2, ...
      double c = b0;
      for (int j = 0; j < std::abs(off); ++j) {
        c = std::nextafter(c, off > 0 ? std::numeric_limits<double>::infinity() : 0.0);
      }
      if (a * c == 1.0) return c;
    }
    return b0;
  };
  int e = 0;
  const double m_root = std::frexp(root, &e);
  const double m_inv = std::frexp(1.0 / root, &e);
  double s = root, x = 0.0;
  if (m_root <= m_inv) {
    x = partner(s);
  } else {
    x = 1.0 / root;
    s = partner(x);
  }
  out.var_pa_inf = 0.25 * s;
  out.var_xa_inf = 0.25 * x;
  out.squeezing_db = squeezing_db(out.var_pa_inf);
  if (gamma_sq < 10.0 * gamma_0_prime) {
    out.warnings.emplace_back("gamma_sq / gamma_0' < 10: asymptotic limits need gamma_sq >> gamma_0'");
  }
  return out;
}

double homodyne_asymptote(double gamma_sq, double kappa, double mean_pa) {
  require_positive(kappa, "kappa");
  require_nonnegative(gamma_sq, "gamma_sq");
  return 2.0 * std::sqrt(gamma_sq / kappa) * mean_pa;
}

QndCoupling effective_qnd_coupling(double omega, double chi, double n, double n_ground) {
  require_positive(n_ground, "N");
  require_nonnegative(n, "n");
  const double f = n / n_ground;
  return {omega * std::sqrt(f), chi * f};
}

nlohmann::json to_json(const Prediction& p) {
  return {{"name", p.name}, {"value", p.value}, {"unit", p.unit}, {"inputs", p.inputs}};
}

std::vector<Prediction> predictions(const ThreeModeParams& p, double t, double mean_pa) {
  std::vector<Prediction> out;
  const nlohmann::json rates = {{"omega", p.omega},
                                {"kappa", p.kappa},
                                {"gamma_m", p.gamma_m},
                                {"gamma_f", p.gamma_f}};
  const double gsq = squeezing_rate(p);
  const double ratio = p.gamma_f / p.gamma_m;
  out.push_back({"squeezing_rate", "Gamma_sq", gsq, "1/s", rates});
  out.push_back({"var_pa", "Var(P_a)", var_pa(t, gsq, ratio), "1",
                 {{"t", t}, {"gamma_sq", gsq}, {"ratio", ratio}}});
  out.push_back({"intrinsic_floor", "gamma_f/(4 gamma_m)", intrinsic_floor(ratio), "1",
                 {{"ratio", ratio}}});
  const double nc = cavity_photon_steady(p.omega, p.kappa, p.gamma_m, p.gamma_f);
  out.push_back({"cavity_photon_steady", "<c^dag c>", nc, "1", rates});
  out.push_back({"photon_leak_rate", "kappa <c^dag c>", p.kappa * nc, "1/s", rates});
  out.push_back({"homodyne_asymptote", "2 sqrt(Gamma_sq/kappa) <P_a>",
                 homodyne_asymptote(gsq, p.kappa, mean_pa), "1",
                 {{"gamma_sq", gsq}, {"kappa", p.kappa}, {"mean_pa", mean_pa}}});
  if (p.gamma_0 > 0.0) {
    const double g0p = effective_relaxation(p.gamma_0, p.gamma_f, p.gamma_m);
    out.push_back({"effective_relaxation", "gamma_0'", g0p, "1/s",
                   {{"gamma_0", p.gamma_0}, {"gamma_f", p.gamma_f}, {"gamma_m", p.gamma_m}}});
    if (gsq > 0.0) {
      const auto lim = decoherence_limits(gsq, g0p);
      const nlohmann::json in = {{"gamma_sq", gsq}, {"gamma_0_prime", g0p}};
      out.push_back({"decoherence_var_pa", "Var(P_a) limit", lim.var_pa_inf, "1", in});
      out.push_back({"decoherence_var_xa", "Var(X_a) limit", lim.var_xa_inf, "1", in});
      out.push_back({"decoherence_squeezing_db", "squeezing limit", lim.squeezing_db, "dB", in});
    }
  }
  return out;
}

nlohmann::json report(const std::vector<Prediction>& preds) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& p : preds) j[p.formula_id] = to_json(p);
  return j;
}

nlohmann::json golden_vectors() {
  nlohmann::json g;
  g["schema_version"] = 1;

  const double ratio = 0.1;
  std::vector<double> xs;
  std::vector<double> vs;
  for (int i = 0; i <= 40; ++i) {
    const double x = 0.25 * i;
    xs.push_back(x);
    vs.push_back(var_pa(x, 1.0, ratio));
  }
  g["var_pa"] = {{"ratio", ratio}, {"gamma_sq_t", xs}, {"values", vs}};

  nlohmann::json dec = nlohmann::json::array();
  for (double r : {0.1, 0.01, 1e-3, 0.0268}) {
    const auto lim = decoherence_limits(1.0, r);
    dec.push_back({{"gamma_sq", 1.0},
                   {"gamma_0_prime", r},
                   {"var_pa_inf", lim.var_pa_inf},
                   {"var_xa_inf", lim.var_xa_inf},
                   {"squeezing_db", lim.squeezing_db}});
  }
  g["decoherence_limits"] = dec;

  nlohmann::json hom = nlohmann::json::array();
  for (double m : {-0.5, 0.0, 0.25, 0.5}) {
    hom.push_back({{"gamma_sq", 1e-3}, {"kappa", 1.0}, {"mean_pa", m},
                   {"value", homodyne_asymptote(1e-3, 1.0, m)}});
  }
  g["homodyne_asymptote"] = hom;
  return g;
}

std::vector<GoldenMismatch> check_golden(const nlohmann::json& golden, double tol) {
  std::vector<GoldenMismatch> bad;
  auto cmp = [&](const std::string& key, double expected, double actual) {
    if (!(std::abs(expected - actual) <= tol)) bad.push_back({key, expected, actual});
  };
  const auto& vp = golden.at("var_pa");
  const double ratio = vp.at("ratio").get<double>();
  const auto xs = vp.at("gamma_sq_t").get<std::vector<double>>();
  const auto vs = vp.at("values").get<std::vector<double>>();
  if (xs.size() != vs.size()) throw std::invalid_argument("var_pa grid and values differ in length");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    cmp("var_pa[" + std::to_string(i) + "]", vs[i], var_pa(xs[i], 1.0, ratio));
  }
  std::size_t i = 0;
  for (const auto& d : golden.at("decoherence_limits")) {
    const auto lim = decoherence_limits(d.at("gamma_sq").get<double>(),
                                        d.at("gamma_0_prime").get<double>());
    const std::string k = "decoherence_limits[" + std::to_string(i++) + "].";
    cmp(k + "var_pa_inf", d.at("var_pa_inf").get<double>(), lim.var_pa_inf);
    cmp(k + "var_xa_inf", d.at("var_xa_inf").get<double>(), lim.var_xa_inf);
    cmp(k + "squeezing_db", d.at("squeezing_db").get<double>(), lim.squeezing_db);
  }
  i = 0;
  for (const auto& h : golden.at("homodyne_asymptote")) {
    cmp("homodyne_asymptote[" + std::to_string(i++) + "]", h.at("value").get<double>(),
        homodyne_asymptote(h.at("gamma_sq").get<double>(), h.at("kappa").get<double>(),
                           h.at("mean_pa").get<double>()));
  }
  return bad;
}

}  // namespace he3sq::analytics
