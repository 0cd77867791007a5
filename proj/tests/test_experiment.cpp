#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qlg/config.hpp"
#include "qlg/errors.hpp"
#include "qlg/experiment.hpp"
#include "qlg/sweep.hpp"

using namespace qlg;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("qlg_test_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentSpec small(const CollisionModel& model) {
  ExperimentSpec s;
  s.model = model;
  s.grid = GridSpec(64, 1.0, 1.0);
  s.steps = 32;
  s.snapshot_every = 8;
  return s;
}

}  // namespace

TEST(Settings, ParsesSectionsAndComments) {
  std::istringstream in(
      "# comment\n"
      "name = demo\n"
      "[model]\n"
      "kind = classical   # trailing\n"
      "alpha = 0.25\n"
      "[grid]\n"
      "n_sites = 128\n");
  const auto s = parse_settings(in);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[1].first, "model.kind");
  EXPECT_EQ(s[2].second, "0.25");
  const auto spec = spec_from_settings(s);
  EXPECT_EQ(spec.name, "demo");
  EXPECT_DOUBLE_EQ(std::get<ClassicalBL>(spec.model).alpha, 0.25);
  EXPECT_EQ(spec.grid.n_sites(), 128u);
}

TEST(Settings, ModelKindAppliedFirst) {
  const Settings s = {{"model.alpha", "0.3"}, {"model.kind", "classical"}};
  EXPECT_DOUBLE_EQ(std::get<ClassicalBL>(spec_from_settings(s).model).alpha, 0.3);
}

TEST(Settings, UnknownKeyNamesField) {
  try {
    spec_from_settings({{"model.thetaa", "1"}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "model.thetaa");
  }
  EXPECT_THROW(spec_from_settings({{"model.kind", "quantum"}, {"model.alpha", "0.3"}}), ConfigError);
  EXPECT_THROW(spec_from_settings({{"run.steps", "ten"}}), ConfigError);
}

TEST(Settings, RoundTrip) {
  ExperimentSpec s = small(Quantum{1.234567890123, 0.1, -0.2});
  s.mode = SimulationMode::microscopic;
  s.ensemble.n_realizations = 17;
  s.seed = 99;
  s.reference.kind = ReferenceKind::burgers;
  s.reference.nu = 0.125;
  std::stringstream ss;
  write_settings(ss, to_settings(s));
  const auto back = spec_from_settings(parse_settings(ss));
  EXPECT_EQ(to_settings(back), to_settings(s));
  EXPECT_EQ(std::get<Quantum>(back.model).theta, 1.234567890123);
}

TEST(Validate, Invariants) {
  auto s = small(ClassicalBL{0.5});
  s.steps = 0;
  EXPECT_THROW(validate(s), ConfigError);
  s.steps = 30;
  s.snapshot_every = 8;
  EXPECT_THROW(validate(s), ConfigError);
  s = small(ClassicalBL{0.5});
  s.initial.amplitude = 1.0;
  try {
    validate(s);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "initial.amplitude");
  }
}

TEST(Simulate, SingleStepGivesOnePostStepSnapshot) {
  auto s = small(ClassicalBL{0.5});
  s.steps = 1;
  s.snapshot_every = 1;
  const auto r = simulate(s);
  EXPECT_EQ(r.steps, (std::vector<int>{0, 1}));
}

TEST(Simulate, MesoscopicConservesMass) {
  for (CollisionModel m : {CollisionModel{ClassicalBL{0.7}}, CollisionModel{Quantum{1.0, 0, 0}}, CollisionModel{TwoBit{}}}) {
    const auto r = simulate(small(m));
    EXPECT_LT(r.mass_drift, 1e-12) << model_name(m);
  }
}

TEST(Simulate, MicroscopicDeterministicAcrossThreads) {
  auto s = small(ClassicalBL{0.5});
  s.mode = SimulationMode::microscopic;
  s.ensemble.n_realizations = 20;
  const auto a = simulate(s);
  s.ensemble.threads = 4;
  const auto b = simulate(s);
  EXPECT_EQ(a.snapshots, b.snapshots);
  ASSERT_TRUE(a.particle_drift.has_value());
  EXPECT_EQ(*a.particle_drift, 0);
  s.seed = 2;
  EXPECT_NE(simulate(s).snapshots.back(), a.snapshots.back());
}

TEST(Compare, IdenticalRunsGiveZeroNorms) {
  const auto r = simulate(small(Quantum{0.9, 0, 0}));
  const auto c = compare_runs(r, r);
  EXPECT_EQ(c.error.l2_aggregate, 0.0);
  EXPECT_EQ(c.error.linf_max, 0.0);
}

TEST(Compare, ZeroAlphaIsDiffusion) {
  auto s = small(ClassicalBL{0.0});
  s.grid = GridSpec(128, 1.0, 1.0);
  s.steps = 512;
  s.snapshot_every = 64;
  s.split = Split::symmetric;
  s.reference.kind = ReferenceKind::burgers;
  s.reference.nu = 0.5;
  const auto c = compare_to_reference(simulate(s));
  EXPECT_LT(c.error.l2_max, 0.01);
}

TEST(Compare, TwoBitBurgersReferenceNeedsCoefficients) {
  auto s = small(TwoBit{});
  s.reference.kind = ReferenceKind::burgers;
  EXPECT_THROW(compare_to_reference(simulate(s)), ConfigError);
}

TEST(RunDirectory, WritesAndReloads) {
  const auto dir = scratch("run");
  auto s = small(ClassicalBL{0.4});
  s.output_dir = dir.string();
  s.reference.kind = ReferenceKind::burgers;
  const auto out = run(s);
  ASSERT_TRUE(out.report.has_value());
  for (const char* f : {"index.csv", "provenance.txt", "coefficients.csv", "plot.gp", "comparison.txt",
                        "snapshot_000000.csv", "snapshot_000032.csv", "reference_000032.csv"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const auto back = load_run(dir);
  EXPECT_EQ(back.steps, out.record.steps);
  EXPECT_EQ(back.snapshots, out.record.snapshots);
  // Provenance re-runs to the same snapshots.
  auto again = back.spec;
  EXPECT_EQ(simulate(again).snapshots, out.record.snapshots);
  fs::remove_all(dir);
}

TEST(RunDirectory, OutputRootVariable) {
  ::setenv("QLG_OUTPUT_ROOT", "/tmp/qlg_root", 1);
  EXPECT_EQ(resolve_output_dir("a/b"), fs::path("/tmp/qlg_root/a/b"));
  EXPECT_EQ(resolve_output_dir("/abs"), fs::path("/abs"));
  ::unsetenv("QLG_OUTPUT_ROOT");
  EXPECT_EQ(resolve_output_dir("a/b"), fs::path("a/b"));
}

TEST(Presets, FigureParameters) {
  const auto f1 = preset_specs("fig1");
  ASSERT_EQ(f1.size(), 3u);
  EXPECT_DOUBLE_EQ(std::get<ClassicalBL>(f1[1].model).alpha, 0.707);
  EXPECT_TRUE(std::holds_alternative<TwoBit>(f1[2].model));
  const auto f2 = preset_specs("fig2");
  ASSERT_EQ(f2.size(), 2u);
  EXPECT_DOUBLE_EQ(std::get<Quantum>(f2[0].model).theta, 1.5);
  EXPECT_DOUBLE_EQ(std::get<ClassicalBL>(f2[1].model).alpha, 0.5);
  for (const auto& s : f1) EXPECT_EQ(s.grid.n_sites(), 256u);
  EXPECT_THROW(preset_specs("fig3"), ConfigError);
}

TEST(Fit, RecoversBurgersCoefficients) {
  const GridSpec g(64, 1.0, 1.0);
  PdeSpec pde;
  pde.c_s = 0.6;
  pde.nu = 0.3;
  pde.grid = g;
  std::vector<double> times;
  for (int k = 0; k <= 8; ++k) times.push_back(4.0 * k);
  ExperimentSpec s = small(ClassicalBL{0.5});
  const auto sol = solve(pde, initial_profile(s), times);
  const auto fit = fit_burgers(g, times, sol.profiles);
  EXPECT_NEAR(fit.c_s, 0.6, 0.01);
  EXPECT_NEAR(fit.nu, 0.3, 0.01);
  EXPECT_LT(fit.rel_l2, 1e-4);
}

TEST(Sweep, KindsParseAndCsv) {
  EXPECT_EQ(parse_sweep_kind("angle_scan"), SweepKind::angle_scan);
  EXPECT_THROW(parse_sweep_kind("nope"), ConfigError);
  SweepTable t;
  t.columns = {"a", "b"};
  t.rows = {{1, 2}};
  t.summary = {{"slope", -0.5}};
  std::ostringstream out;
  write_sweep_csv(out, t);
  EXPECT_EQ(out.str(), "a,b\n1,2\n# slope = -0.5\n");
}

TEST(Sweep, GridConvergenceDecreases) {
  const auto t = run_sweep(SweepKind::grid_convergence, small(ClassicalBL{0.5}));
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(*t.find_summary("monotone"), 1.0);
}

TEST(Sweep, AngleScanSoundSpeed) {
  const auto t = run_sweep(SweepKind::angle_scan, ExperimentSpec{});
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_LT(*t.find_summary("max_c_s_rel_error"), 0.10);
}
