#include "qlg/sweep.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <ostream>

#include "qlg/errors.hpp"
#include "qlg/experiment.hpp"
#include "qlg/theory.hpp"

namespace qlg {

namespace {

SweepTable ensemble_noise(const ExperimentSpec& base) {
  ExperimentSpec spec = base;
  if (!std::holds_alternative<Quantum>(spec.model)) spec.model = Quantum{std::numbers::pi / 4.0, 0.0, 0.0};
  spec.steps = 32;
  spec.snapshot_every = 32;

  ExperimentSpec meso = spec;
  meso.mode = SimulationMode::mesoscopic;
  const auto reference = simulate(meso).snapshots.back();

  SweepTable t;
  t.columns = {"n_realizations", "seed", "std_plus", "std_minus", "std_all"};
  const std::vector<double> sizes = {16, 64, 256, 1024};
  const std::vector<std::uint64_t> seeds = {1, 2, 3};
  std::vector<double> mean_std;
  for (double n : sizes) {
    double acc = 0.0;
    for (auto seed : seeds) {
      ExperimentSpec micro = spec;
      micro.mode = SimulationMode::microscopic;
      micro.ensemble.n_realizations = static_cast<std::size_t>(n);
      micro.seed = base.seed + seed - 1;
      const auto stats = measure_noise(simulate(micro).snapshots.back(), reference);
      t.rows.push_back({n, static_cast<double>(micro.seed), stats.std_plus, stats.std_minus, stats.std_all});
      acc += stats.std_all;
    }
    mean_std.push_back(acc / static_cast<double>(seeds.size()));
  }
  t.summary.emplace_back("slope", fit_loglog_slope(sizes, mean_std));
  return t;
}

CollisionModel scaled_model(const CollisionModel& model, double r) {
  if (const auto* m = std::get_if<ClassicalBL>(&model)) return ClassicalBL{m->alpha / r};
  if (const auto* m = std::get_if<Quantum>(&model)) {
    const double c = std::cos(m->zeta - m->xi) / r;
    return Quantum{m->theta, std::acos(c), 0.0};
  }
  throw ConfigError("model.kind", "grid_convergence needs a classical or quantum model");
}

SweepTable grid_convergence(const ExperimentSpec& base) {
  SweepTable t;
  t.columns = {"n_x", "dx", "dt", "steps", "l2_aggregate", "l2_max"};
  const double length = 128.0;
  const double t_final = 64.0;
  double previous = 0.0;
  bool monotone = true;
  for (int n : {128, 256, 512, 1024}) {
    const double r = n / length;
    ExperimentSpec spec = base;
    spec.mode = SimulationMode::mesoscopic;
    spec.grid = GridSpec(n, 1.0 / r, 1.0 / (r * r));
    spec.model = scaled_model(base.model, r);
    spec.steps = static_cast<int>(std::lround(t_final * r * r));
    spec.snapshot_every = spec.steps / 4;
    spec.reference.kind = ReferenceKind::burgers;
    spec.reference.c_s.reset();
    spec.reference.nu.reset();
    const auto report = compare_to_reference(simulate(spec));
    t.rows.push_back({static_cast<double>(n), spec.grid.dx(), spec.grid.dt(),
                      static_cast<double>(spec.steps), report.error.l2_aggregate, report.error.l2_max});
    if (t.rows.size() > 1 && report.error.l2_aggregate >= previous) monotone = false;
    previous = report.error.l2_aggregate;
  }
  t.summary.emplace_back("monotone", monotone ? 1.0 : 0.0);
  t.summary.emplace_back("ratio_first_last", t.rows.front()[4] / t.rows.back()[4]);
  return t;
}

SweepTable angle_scan(const ExperimentSpec& base) {
  SweepTable t;
  t.columns = {"theta", "c_s_theory", "nu_theory", "c_s_fit", "nu_fit", "fit_l2", "c_s_rel_error"};
  double worst = 0.0;
  for (double theta : {1.0, 1.2, std::numbers::pi / 4.0, 1.5}) {
    ExperimentSpec spec = base;
    spec.mode = SimulationMode::mesoscopic;
    spec.model = Quantum{theta, 0.0, 0.0};
    const auto theory = leading_order_transport(spec.model, spec.grid);
    const auto w = fit_window(spec, pre_shock_steps(spec));
    const double rel = std::abs(w.fit.c_s - theory.c_s) / std::abs(theory.c_s);
    worst = std::max(worst, rel);
    t.rows.push_back({theta, theory.c_s, theory.nu, w.fit.c_s, w.fit.nu, w.fit.rel_l2, rel});
  }
  t.summary.emplace_back("max_c_s_rel_error", worst);
  return t;
}

}  // namespace

SweepKind parse_sweep_kind(const std::string& name) {
  if (name == "ensemble_noise") return SweepKind::ensemble_noise;
  if (name == "grid_convergence") return SweepKind::grid_convergence;
  if (name == "angle_scan") return SweepKind::angle_scan;
  throw ConfigError("sweep", fmt::format("unknown sweep `{}`", name));
}

std::string to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::ensemble_noise: return "ensemble_noise";
    case SweepKind::grid_convergence: return "grid_convergence";
    case SweepKind::angle_scan: return "angle_scan";
  }
  return "?";
}

const double* SweepTable::find_summary(const std::string& key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return &v;
  }
  return nullptr;
}

SweepTable run_sweep(SweepKind kind, const ExperimentSpec& base) {
  switch (kind) {
    case SweepKind::ensemble_noise: return ensemble_noise(base);
    case SweepKind::grid_convergence: return grid_convergence(base);
    case SweepKind::angle_scan: return angle_scan(base);
  }
  throw ConfigError("sweep", "unknown sweep");
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << fmt::format("{:.10g}", row[c]);
    out << '\n';
  }
  for (const auto& [k, v] : table.summary) out << fmt::format("# {} = {:.10g}\n", k, v);
}

}  // namespace qlg
