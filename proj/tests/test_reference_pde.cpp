#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "qlg/errors.hpp"
#include "qlg/initial.hpp"
#include "qlg/reference_pde.hpp"

using namespace qlg;

namespace {

double mode_amplitude(const DensityProfile& p, double mean) {
  const auto n = p.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += (p.rho[i] - mean) * std::sin(2 * std::numbers::pi * i / n);
  return 2.0 * s / n;
}

PdeSpec burgers(const GridSpec& g, double c_s, double nu) {
  PdeSpec s;
  s.c_s = c_s;
  s.nu = nu;
  s.grid = g;
  return s;
}

}  // namespace

TEST(ReferencePde, ConservesMassOverManySteps) {
  const GridSpec g(128, 1.0, 1.0);
  auto spec = burgers(g, 0.8, 0.3);
  spec.fixed_dt = 0.4;
  const auto rho0 = sine_profile(g, 1.0, 0.4);
  const auto sol = solve(spec, rho0, 4000.0, 4000.0);
  ASSERT_GE(sol.substeps, 10000u);
  EXPECT_LT(std::abs(sol.profiles.back().mass() - rho0.mass()), 1e-8);
}

TEST(ReferencePde, DiffusiveDecayMatchesDiscreteRate) {
  const GridSpec g(64, 1.0, 1.0);
  auto spec = burgers(g, 0.0, 0.5);
  spec.fixed_dt = 0.25;
  const double t = 200.0;
  const auto sol = solve(spec, sine_profile(g, 1.0, 0.1), t, t);
  const double k = 2 * std::numbers::pi / 64;
  const double rate = 0.5 * 4.0 * std::pow(std::sin(k / 2), 2);
  const double expected = 0.1 * std::pow(1.0 - 0.25 * rate, t / 0.25);
  EXPECT_NEAR(mode_amplitude(sol.profiles.back(), 1.0) / expected, 1.0, 0.01);
  EXPECT_NEAR(mode_amplitude(sol.profiles.back(), 1.0) / (0.1 * std::exp(-0.5 * k * k * t)), 1.0, 0.01);
}

TEST(ReferencePde, FirstOrderConvergence) {
  // Fixed domain of length 64, inviscid steepening wave sampled before breaking.
  const double length = 64.0, t_final = 16.0;
  auto run = [&](std::size_t n) {
    const GridSpec g(n, length / n, length / n);
    auto spec = burgers(g, 1.0, 0.0);
    spec.cfl_safety = 0.5;
    return solve(spec, sine_profile(g, 1.0, 0.4), t_final, t_final).profiles.back();
  };
  const auto fine = run(4096);
  auto error = [&](std::size_t n) {
    const auto coarse = run(n);
    const std::size_t r = 4096 / n;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      // Cell i of the coarse grid sits at x = i * dx; average the fine values around it.
      double avg = 0.0;
      for (std::size_t j = 0; j < r; ++j) avg += fine.rho[(i * r + j + 4096 - r / 2) % 4096];
      const double d = coarse.rho[i] - avg / r;
      s += d * d;
    }
    return std::sqrt(s / n);
  };
  const double e1 = error(128), e2 = error(256), e3 = error(512);
  EXPECT_GT(e1 / e2, 1.7);
  EXPECT_LT(e1 / e2, 2.3);
  EXPECT_GT(e2 / e3, 1.7);
  EXPECT_LT(e2 / e3, 2.3);
}

TEST(ReferencePde, RefusesOversizedFixedStep) {
  const GridSpec g(64, 1.0, 1.0);
  auto spec = burgers(g, 1.0, 0.5);
  spec.fixed_dt = 2.0;
  try {
    solve(spec, sine_profile(g, 1.0, 0.3), 10.0, 5.0);
    FAIL() << "expected CflError";
  } catch (const CflError& e) {
    EXPECT_GT(e.admissible_dt(), 0.0);
    EXPECT_LT(e.admissible_dt(), 2.0);
  }
}

TEST(ReferencePde, AdmissibleStepCombinesBounds) {
  const GridSpec g(16, 1.0, 1.0);
  auto spec = burgers(g, 1.0, 0.5);
  spec.cfl_safety = 1.0;
  const DensityProfile rho{std::vector<double>(16, 0.0)};
  EXPECT_NEAR(admissible_dt(spec, rho), 1.0 / (2 * 0.5 + 1.0), 1e-15);
}

TEST(ReferencePde, SamplesAtRequestedTimes) {
  const GridSpec g(32, 1.0, 1.0);
  const std::vector<double> times = {0.0, 1.5, 3.0, 7.25};
  const auto sol = solve(burgers(g, 0.5, 0.5), sine_profile(g, 1.0, 0.2), times);
  ASSERT_EQ(sol.times, times);
  EXPECT_EQ(sol.profiles.front().rho, sine_profile(g, 1.0, 0.2).rho);
  EXPECT_FALSE(sol.halted);
}

TEST(ReferencePde, EftHaltsAtTwoBitSingularity) {
  const GridSpec g(64, 1.0, 1.0);
  const std::vector<double> times = {0.0, 10.0, 20.0};
  const auto sol = solve_eft(TwoBit{}, g, sine_profile(g, 1.0, 0.3), times);
  EXPECT_TRUE(sol.halted);
  EXPECT_FALSE(sol.diagnostic.empty());
  EXPECT_LT(sol.profiles.size(), times.size());
}

TEST(ReferencePde, EftRunsBelowTwoBitSingularity) {
  const GridSpec g(64, 1.0, 1.0);
  const std::vector<double> times = {0.0, 5.0, 10.0};
  const auto sol = solve_eft(TwoBit{}, g, sine_profile(g, 0.4, 0.2), times);
  EXPECT_FALSE(sol.halted) << sol.diagnostic;
  EXPECT_EQ(sol.profiles.size(), 3u);
}

TEST(ReferencePde, EftClassicalMatchesBurgersAtSmallAlpha) {
  const GridSpec g(64, 1.0, 1.0);
  const std::vector<double> times = {0.0, 20.0};
  const auto rho0 = sine_profile(g, 1.0, 0.1);
  const auto a = solve_eft(ClassicalBL{0.05}, g, rho0, times);
  const auto b = solve(burgers(g, 0.05, 0.5), rho0, times);
  for (std::size_t i = 0; i < 64; ++i) EXPECT_NEAR(a.profiles[1].rho[i], b.profiles[1].rho[i], 2e-4);
}
