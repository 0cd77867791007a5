#include "qlg/experiment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "qlg/collision.hpp"
#include "qlg/errors.hpp"
#include "qlg/initial.hpp"
#include "qlg/microscopic.hpp"
#include "qlg/theory.hpp"

namespace qlg {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string snapshot_name(const std::string& prefix, int step) {
  return fmt::format("{}_{:06d}.csv", prefix, step);
}

double microscopic_alpha(const CollisionModel& model) {
  if (const auto* m = std::get_if<ClassicalBL>(&model)) return m->alpha;
  return 1.0;  // the two-bit gas is the alpha = 1 rule
}

RunRecord simulate_mesoscopic(const ExperimentSpec& spec, const OccupancyField& initial) {
  RunRecord rec;
  rec.spec = spec;
  OccupancyField field = initial;
  const double mass0 = field.mass();
  rec.steps.push_back(0);
  rec.snapshots.push_back(field);
  for (int s = 1; s <= spec.steps; ++s) {
    field = step(field, spec.model);
    rec.mass_drift = std::max(rec.mass_drift, std::abs(field.mass() - mass0));
    if (s % spec.snapshot_every == 0) {
      rec.steps.push_back(s);
      rec.snapshots.push_back(field);
    }
  }
  return rec;
}

RunRecord simulate_microscopic(const ExperimentSpec& spec, const OccupancyField& initial) {
  RunRecord rec;
  rec.spec = spec;
  EnsembleSpec ens = spec.ensemble;
  ens.master_seed = spec.seed;
  const auto* quantum = std::get_if<Quantum>(&spec.model);
  ens.mode = quantum ? EnsembleMode::quantum_sampled : EnsembleMode::classical_bits;

  BitEnsemble ensemble = BitEnsemble::sample(initial, ens);
  OccupancyField estimate = ensemble_average(ensemble);
  const double mass0 = estimate.mass();
  const auto particles0 = static_cast<long long>(ensemble.particle_count());
  rec.steps.push_back(0);
  rec.snapshots.push_back(estimate);

  const UnitaryGate gate =
      quantum ? build_unitary(quantum->theta, quantum->zeta, quantum->xi) : UnitaryGate::identity();
  const double alpha = microscopic_alpha(spec.model);
  for (int s = 1; s <= spec.steps; ++s) {
    if (quantum) {
      estimate = quantum_micro_step(estimate, gate, ensemble);
    } else {
      classical_micro_step(ensemble, alpha);
      estimate = ensemble_average(ensemble);
    }
    rec.mass_drift = std::max(rec.mass_drift, std::abs(estimate.mass() - mass0));
    if (s % spec.snapshot_every == 0) {
      rec.steps.push_back(s);
      rec.snapshots.push_back(estimate);
    }
  }
  if (!quantum) {
    rec.particle_drift = static_cast<long long>(ensemble.particle_count()) - particles0;
    if (*rec.particle_drift != 0) {
      throw ContractViolation(fmt::format("microscopic particle count drifted by {}", *rec.particle_drift));
    }
  }
  return rec;
}

TransportCoefficients reference_coefficients(const ExperimentSpec& spec) {
  TransportCoefficients tc;
  if (!std::holds_alternative<TwoBit>(spec.model)) tc = leading_order_transport(spec.model, spec.grid);
  if (spec.reference.c_s) {
    tc.c_s = *spec.reference.c_s;
  } else if (std::holds_alternative<TwoBit>(spec.model)) {
    throw ConfigError("reference.c_s", "required for the two-bit gas");
  }
  if (spec.reference.nu) {
    tc.nu = *spec.reference.nu;
  } else if (std::holds_alternative<TwoBit>(spec.model)) {
    throw ConfigError("reference.nu", "required for the two-bit gas");
  }
  return tc;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

std::vector<DensityProfile> RunRecord::densities() const {
  std::vector<DensityProfile> out;
  out.reserve(snapshots.size());
  for (const auto& s : snapshots) out.push_back(density(s));
  return out;
}

RunRecord simulate(const ExperimentSpec& spec) {
  validate(spec);
  const auto initial = initial_occupancy(spec);
  RunRecord rec = spec.mode == SimulationMode::mesoscopic ? simulate_mesoscopic(spec, initial)
                                                          : simulate_microscopic(spec, initial);
  rec.times.reserve(rec.steps.size());
  for (int s : rec.steps) rec.times.push_back(s * spec.grid.dt());
  return rec;
}

ComparisonReport compare_runs(const RunRecord& a, const RunRecord& b) {
  if (a.spec.grid.n_sites() != b.spec.grid.n_sites()) {
    throw std::invalid_argument("runs live on different grids");
  }
  std::map<int, std::size_t> b_index;
  for (std::size_t k = 0; k < b.steps.size(); ++k) b_index[b.steps[k]] = k;
  std::vector<DensityProfile> da, db;
  ComparisonReport r;
  r.label = fmt::format("{} vs {}", a.spec.name, b.spec.name);
  for (std::size_t k = 0; k < a.steps.size(); ++k) {
    const auto it = b_index.find(a.steps[k]);
    if (it == b_index.end()) continue;
    r.times.push_back(a.times[k]);
    da.push_back(density(a.snapshots[k]));
    db.push_back(density(b.snapshots[it->second]));
  }
  if (r.times.empty()) throw std::invalid_argument("runs share no snapshot steps");
  r.error = series_error(da, db);
  r.mass_drift = std::max(a.mass_drift, b.mass_drift);
  return r;
}

PdeSolution reference_solution(const RunRecord& run) {
  const auto& spec = run.spec;
  const auto rho0 = density(run.snapshots.front());
  switch (spec.reference.kind) {
    case ReferenceKind::none:
      throw ConfigError("reference.kind", "no reference configured");
    case ReferenceKind::burgers: {
      const auto tc = reference_coefficients(spec);
      PdeSpec pde;
      pde.kind = PdeKind::burgers;
      pde.c_s = tc.c_s;
      pde.nu = tc.nu;
      pde.grid = spec.grid;
      pde.cfl_safety = spec.reference.cfl_safety;
      pde.fixed_dt = spec.reference.fixed_dt;
      return solve(pde, rho0, run.times);
    }
    case ReferenceKind::eft: {
      PdeSpec pde;
      pde.kind = PdeKind::general_eft;
      pde.eft_model = spec.model;
      pde.grid = spec.grid;
      pde.cfl_safety = spec.reference.cfl_safety;
      pde.fixed_dt = spec.reference.fixed_dt;
      return solve(pde, rho0, run.times);
    }
  }
  return {};
}

ComparisonReport compare_to_reference(const RunRecord& run) {
  const auto sol = reference_solution(run);
  ComparisonReport r;
  r.label = fmt::format("{} vs {} reference", run.spec.name,
                        run.spec.reference.kind == ReferenceKind::eft ? "eft" : "burgers");
  const auto n = sol.profiles.size();
  auto dens = run.densities();
  dens.resize(n);
  r.times.assign(run.times.begin(), run.times.begin() + static_cast<std::ptrdiff_t>(n));
  if (n > 0) r.error = series_error(dens, sol.profiles);
  r.mass_drift = run.mass_drift;
  r.diagnostic = sol.diagnostic;
  return r;
}

BurgersFit fit_run(const RunRecord& run, const FitOptions& options) {
  return fit_burgers(run.spec.grid, run.times, run.densities(), options);
}

void write_comparison(std::ostream& out, const ComparisonReport& report) {
  out << "label = " << report.label << '\n';
  out << fmt::format("l2_aggregate = {:.9g}\n", report.error.l2_aggregate);
  out << fmt::format("l2_max = {:.9g}\n", report.error.l2_max);
  out << fmt::format("linf_max = {:.9g}\n", report.error.linf_max);
  out << fmt::format("mass_drift = {:.9g}\n", report.mass_drift);
  if (report.fit) {
    out << fmt::format("c_s_fit = {:.9g}\n", report.fit->c_s);
    out << fmt::format("nu_fit = {:.9g}\n", report.fit->nu);
    out << fmt::format("fit_l2 = {:.9g}\n", report.fit->rel_l2);
  }
  if (!report.diagnostic.empty()) out << "diagnostic = " << report.diagnostic << '\n';
  for (std::size_t k = 0; k < report.times.size() && k < report.error.l2.size(); ++k) {
    out << fmt::format("t_{:.9g} = l2 {:.9g} linf {:.9g}\n", report.times[k], report.error.l2[k],
                       report.error.linf[k]);
  }
}

fs::path resolve_output_dir(const std::string& dir) {
  fs::path p(dir);
  if (p.is_relative()) {
    if (const char* root = std::getenv("QLG_OUTPUT_ROOT"); root != nullptr && *root != '\0') {
      return fs::path(root) / p;
    }
  }
  return p;
}

void write_run(const RunRecord& run, const fs::path& dir, const ComparisonReport* report,
               const PdeSolution* reference) {
  fs::create_directories(dir);
  {
    auto index = open_out(dir / "index.csv");
    index << "step,time,file,mass\n";
    for (std::size_t k = 0; k < run.steps.size(); ++k) {
      const auto name = snapshot_name("snapshot", run.steps[k]);
      auto out = open_out(dir / name);
      write_snapshot_csv(out, run.snapshots[k], run.spec.grid);
      index << fmt::format("{},{:.17g},{},{:.17g}\n", run.steps[k], run.times[k], name,
                           run.snapshots[k].mass());
    }
  }
  {
    auto out = open_out(dir / "provenance.txt");
    out << "# re-run with: qlg run --config provenance.txt\n";
    write_settings(out, to_settings(run.spec));
    out << fmt::format("provenance.mass_drift = {:.17g}\n", run.mass_drift);
    if (run.particle_drift) out << "provenance.particle_drift = " << *run.particle_drift << '\n';
    TheoryReport theory = make_theory_report(run.spec.model, run.spec.grid);
    for (const auto& [k, v] : theory.entries) out << "theory." << k << " = " << v << '\n';
  }
  {
    auto out = open_out(dir / "coefficients.csv");
    write_coefficient_table(out, run.spec.model, run.spec.grid, 100);
  }
  if (report != nullptr) {
    auto out = open_out(dir / "comparison.txt");
    write_comparison(out, *report);
  }
  if (reference != nullptr) {
    for (std::size_t k = 0; k < reference->profiles.size() && k < run.steps.size(); ++k) {
      auto out = open_out(dir / snapshot_name("reference", run.steps[k]));
      write_density_csv(out, reference->profiles[k], run.spec.grid);
    }
  }
  {
    auto out = open_out(dir / "plot.gp");
    write_overlay_plot(out, {{run.spec.name, run}}, dir);
  }
}

RunRecord load_run(const fs::path& dir) {
  std::ifstream prov(dir / "provenance.txt");
  if (!prov) throw std::runtime_error("no provenance.txt in " + dir.string());
  RunRecord rec;
  rec.spec = spec_from_settings(parse_settings(prov));
  std::ifstream index(dir / "index.csv");
  if (!index) throw std::runtime_error("no index.csv in " + dir.string());
  std::string line;
  std::getline(index, line);
  while (std::getline(index, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() < 3) throw std::runtime_error("malformed index row: " + line);
    rec.steps.push_back(std::stoi(cells[0]));
    rec.times.push_back(std::stod(cells[1]));
    std::ifstream snap(dir / cells[2]);
    if (!snap) throw std::runtime_error("missing snapshot " + cells[2]);
    rec.snapshots.push_back(read_snapshot_csv(snap));
  }
  return rec;
}

RunOutcome run(const ExperimentSpec& spec) {
  RunOutcome out;
  out.record = simulate(spec);
  out.directory = resolve_output_dir(spec.output_dir);
  std::optional<PdeSolution> reference;
  if (spec.reference.kind != ReferenceKind::none) {
    reference = reference_solution(out.record);
    out.report = compare_to_reference(out.record);
  }
  if (spec.reference.fit) {
    if (!out.report) {
      out.report = ComparisonReport{};
      out.report->label = spec.name + " fit";
      out.report->mass_drift = out.record.mass_drift;
    }
    out.report->fit = fit_run(out.record);
  }
  write_run(out.record, out.directory, out.report ? &*out.report : nullptr,
            reference ? &*reference : nullptr);
  return out;
}

int pre_shock_steps(const ExperimentSpec& spec, double fraction, int cap) {
  const auto rho0 = initial_profile(spec);
  double c_s;
  if (std::holds_alternative<TwoBit>(spec.model)) {
    c_s = spec.grid.c() / std::max(1e-6, 1.0 - spec.initial.mean);
  } else {
    c_s = leading_order_transport(spec.model, spec.grid).c_s;
  }
  const double t_star = shock_time_estimate(rho0, spec.grid, c_s);
  const double steps = fraction * t_star / spec.grid.dt();
  if (!std::isfinite(steps)) return cap;
  return std::clamp(static_cast<int>(steps), 1, cap);
}

WindowFit fit_window(ExperimentSpec spec, int steps, int samples, const FitOptions& options) {
  if (samples < 2) throw std::invalid_argument("fit window needs >= 2 samples");
  const int every = std::max(1, (steps + samples - 1) / samples);
  spec.snapshot_every = every;
  spec.steps = every * samples;
  WindowFit w;
  w.run = simulate(spec);
  w.fit = fit_run(w.run, options);
  return w;
}

std::vector<ExperimentSpec> preset_specs(const std::string& name) {
  ExperimentSpec base;
  base.grid = GridSpec(256, 1.0, 1.0);
  base.initial = InitialCondition{};
  base.split = Split::equilibrium;
  std::vector<ExperimentSpec> specs;
  auto add = [&](std::string run_name, CollisionModel model) {
    ExperimentSpec s = base;
    s.name = std::move(run_name);
    s.model = model;
    specs.push_back(std::move(s));
  };
  if (name == "fig1") {
    base.steps = 512;
    base.snapshot_every = 64;
    add("quantum_theta_pi_4", Quantum{std::numbers::pi / 4.0, 0.0, 0.0});
    add("classical_alpha_0.707", ClassicalBL{0.707});
    add("twobit", TwoBit{});
  } else if (name == "fig2") {
    base.steps = 4096;
    base.snapshot_every = 512;
    add("quantum_theta_1.5", Quantum{1.5, 0.0, 0.0});
    add("classical_alpha_0.5", ClassicalBL{0.5});
  } else {
    throw ConfigError("preset", fmt::format("unknown preset `{}` (fig1|fig2)", name));
  }
  return specs;
}

PresetOutcome run_preset(const std::string& name, const fs::path& root) {
  PresetOutcome out;
  out.directory = root / name;
  std::vector<std::pair<std::string, RunRecord>> overlay;
  for (auto spec : preset_specs(name)) {
    spec.output_dir = (out.directory / spec.name).string();
    RunOutcome r;
    r.record = simulate(spec);
    r.directory = spec.output_dir;
    if (!std::holds_alternative<TwoBit>(spec.model)) {
      const auto w = fit_window(spec, pre_shock_steps(spec));
      out.fits.emplace_back(spec.name, w.fit);
      ComparisonReport report;
      report.label = spec.name + " pre-shock Burgers fit";
      report.mass_drift = r.record.mass_drift;
      report.fit = w.fit;
      r.report = report;
    }
    write_run(r.record, r.directory, r.report ? &*r.report : nullptr);
    overlay.emplace_back(spec.name, r.record);
    out.runs.push_back(std::move(r));
  }
  {
    auto plot = open_out(out.directory / "plot.gp");
    write_overlay_plot(plot, overlay, out.directory);
  }
  {
    auto summary = open_out(out.directory / "summary.txt");
    for (const auto& [run_name, fit] : out.fits) {
      summary << fmt::format("{}.c_s_fit = {:.6g}\n{}.nu_fit = {:.6g}\n{}.fit_l2 = {:.6g}\n",
                             run_name, fit.c_s, run_name, fit.nu, run_name, fit.rel_l2);
    }
    for (std::size_t i = 0; i + 1 < out.runs.size(); ++i) {
      for (std::size_t j = i + 1; j < out.runs.size(); ++j) {
        const auto c = compare_runs(out.runs[i].record, out.runs[j].record);
        summary << fmt::format("{}: l2_aggregate = {:.6g}, l2_max = {:.6g}\n", c.label,
                               c.error.l2_aggregate, c.error.l2_max);
      }
    }
  }
  return out;
}

void write_overlay_plot(std::ostream& out, const std::vector<std::pair<std::string, RunRecord>>& runs,
                        const fs::path& base) {
  if (runs.empty()) return;
  const auto& steps = runs.front().second.steps;
  const int cols = 3;
  const int rows = static_cast<int>((steps.size() + cols - 1) / cols);
  out << "# gnuplot script: density snapshots\n";
  out << "set datafile separator ','\n";
  out << fmt::format("set terminal pngcairo size {},{}\n", 400 * cols, 300 * rows);
  out << "set output 'density.png'\n";
  out << "set yrange [0.5:1.5]\nset key off\n";
  out << fmt::format("set multiplot layout {},{}\n", rows, cols);
  const bool single = runs.size() == 1;
  for (int s : steps) {
    out << fmt::format("set title 'step {}'\n", s);
    out << "plot ";
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const auto dir = single ? fs::path(".") : fs::relative(base / runs[r].first, base);
      out << fmt::format("'{}' using 2:5 with lines dt {} title '{}'{}",
                         (dir / snapshot_name("snapshot", s)).string(), r + 1, runs[r].first,
                         r + 1 < runs.size() ? ", " : "\n");
    }
  }
  out << "unset multiplot\n";
}

}  // namespace qlg
