#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "he3sq/model.hpp"

using namespace he3sq;

namespace {

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(),
                     [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

ThreeModeParams random_valid(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> logu(-6.0, 9.0);
  ThreeModeParams p;
  p.kappa = std::pow(10.0, logu(rng));
  p.omega = std::pow(10.0, logu(rng));
  p.gamma_m = std::pow(10.0, logu(rng));
  p.gamma_f = p.gamma_m * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  p.gamma_0 = std::pow(10.0, logu(rng));
  return p;
}

}  // namespace

TEST(Model, ReferenceRatiosAreValid) {
  const ThreeModeParams p{0.1, 1.0, 0.1, 0.01, 0.0, true};
  EXPECT_TRUE(violations(p).empty());
  EXPECT_EQ(validate(p), p);
  EXPECT_EQ(fig3_params(), p);
}

TEST(Model, NegativeRateIsReported) {
  ThreeModeParams p{0.1, 1.0, 0.1, -1.0};
  auto v = violations(p);
  EXPECT_TRUE(mentions(v, "negative rate"));
  try {
    validate(p);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_TRUE(mentions(e.violations(), "negative rate"));
  }
}

TEST(Model, OrderingOfExchangeRates) {
  ThreeModeParams p{0.1, 1.0, 0.01, 0.1};
  EXPECT_TRUE(mentions(violations(p), "gamma_f > gamma_m"));
  EXPECT_THROW(validate(p), ValidationError);
}

TEST(Model, NonFiniteRate) {
  ThreeModeParams p{NAN, 1.0, 0.1, 0.01};
  EXPECT_TRUE(mentions(violations(p), "non-finite"));
}

TEST(Model, PaperRegimeIsStrict) {
  ThreeModeParams p{0.1, 1.0, 0.1, 0.1, 0.0, true};
  EXPECT_TRUE(mentions(violations(p), "paper regime"));
  p.paper_regime = false;
  EXPECT_TRUE(violations(p).empty());
  ThreeModeParams q{0.1, 0.1, 0.1, 0.01, 0.0, true};
  EXPECT_FALSE(violations(q).empty());
}

TEST(Model, TruncationBelowTwo) {
  EXPECT_TRUE(truncation_violations({5, 5, 8}).empty());
  EXPECT_TRUE(mentions(truncation_violations({5, 1, 8}), "truncation < 2"));
  EXPECT_FALSE(truncation_violations({}).empty());
}

TEST(Model, SemiclassicalCounts) {
  SemiclassicalParams s{0.4, 2.5e16, 1.25e11, 9.8e6, 1.0, 1.0};
  EXPECT_TRUE(violations(s).empty());
  EXPECT_DOUBLE_EQ(s.t_inv(), 9.8e6 * 1.25e11 / 2.5e16);
  s.n_meta_cell = 3e16;
  EXPECT_TRUE(mentions(violations(s), "n_cell > N_cell"));
  s.n_meta_cell = 1.0;
  s.polarization = 1.5;
  EXPECT_THROW(validate(s), ValidationError);
}

TEST(Model, ValidationIsIdempotent) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto p = random_valid(rng);
    EXPECT_EQ(validate(validate(p)), validate(p));
  }
  SemiclassicalParams s{0.3, 10.0, 2.0, 1.0, 2.0, 3.0};
  EXPECT_EQ(validate(validate(s)), validate(s));
}

TEST(Model, NondimensionalizeExperimentalCoupling) {
  ThreeModeParams p;
  p.omega = 2.0 * std::numbers::pi * 4.1e6;
  p.kappa = 2.0 * std::numbers::pi * 1.0e8;
  const auto s = nondimensionalize(p);
  EXPECT_NEAR(s.scaled.omega, 0.041, 1e-15);
  EXPECT_EQ(s.scaled.kappa, 1.0);
  EXPECT_EQ(s.kappa_unit, p.kappa);
}

TEST(Model, NondimensionalizeIdentityAtUnitKappa) {
  const auto p = fig3_params(1e-3);
  EXPECT_EQ(nondimensionalize(p).scaled, p);
}

TEST(Model, NondimensionalizeZeroRates) {
  ThreeModeParams p;
  p.kappa = 3.0;
  const auto s = nondimensionalize(p).scaled;
  EXPECT_EQ(s.omega, 0.0);
  EXPECT_EQ(s.gamma_m, 0.0);
  EXPECT_EQ(s.gamma_f, 0.0);
  EXPECT_EQ(s.gamma_0, 0.0);
}

TEST(Model, NondimensionalizeNeedsKappa) {
  ThreeModeParams p{1.0, 0.0, 0.0, 0.0};
  EXPECT_THROW(nondimensionalize(p), ValidationError);
}

TEST(Model, RoundTripProperty) {
  std::mt19937_64 rng(11);
  auto rel = [](double a, double b) { return b == 0.0 ? std::abs(a) : std::abs(a - b) / std::abs(b); };
  for (int i = 0; i < 1000; ++i) {
    const auto p = random_valid(rng);
    const auto q = redimensionalize(nondimensionalize(p));
    EXPECT_LE(rel(q.omega, p.omega), 1e-12);
    EXPECT_LE(rel(q.kappa, p.kappa), 1e-12);
    EXPECT_LE(rel(q.gamma_m, p.gamma_m), 1e-12);
    EXPECT_LE(rel(q.gamma_f, p.gamma_f), 1e-12);
    EXPECT_LE(rel(q.gamma_0, p.gamma_0), 1e-12);
  }
}

TEST(Model, MaxRateCoversKappa) {
  const auto p = fig3_params();
  EXPECT_GE(max_rate(p), p.kappa);
}
