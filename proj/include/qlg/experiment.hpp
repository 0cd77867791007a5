#ifndef QLG_EXPERIMENT_HPP_
#define QLG_EXPERIMENT_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qlg/config.hpp"
#include "qlg/field.hpp"
#include "qlg/fitting.hpp"
#include "qlg/reference_pde.hpp"

namespace qlg {

struct RunRecord {
  ExperimentSpec spec;
  std::vector<int> steps;
  std::vector<double> times;  // steps * grid.dt
  std::vector<OccupancyField> snapshots;
  double mass_drift = 0.0;  // max |mass(t) - mass(0)| over every step
  // Classical microscopic runs: total bits per realization at the end minus at the start.
  std::optional<long long> particle_drift;

  std::vector<DensityProfile> densities() const;
};

// Deterministic given the spec (including seed and regardless of ensemble.threads).
RunRecord simulate(const ExperimentSpec& spec);

struct ComparisonReport {
  std::string label;
  std::vector<double> times;
  SeriesError error;
  double mass_drift = 0.0;
  std::optional<BurgersFit> fit;
  std::string diagnostic;  // set when the reference solver halted early
};

// b is the reference; snapshots are matched by step index.
ComparisonReport compare_runs(const RunRecord& a, const RunRecord& b);

// Reference solution configured in run.spec.reference (must not be `none`).
PdeSolution reference_solution(const RunRecord& run);
ComparisonReport compare_to_reference(const RunRecord& run);

// Fits effective Burgers coefficients to the run's density snapshots.
BurgersFit fit_run(const RunRecord& run, const FitOptions& options = {});

void write_comparison(std::ostream& out, const ComparisonReport& report);

// Relative paths are placed under $QLG_OUTPUT_ROOT when that variable is set.
std::filesystem::path resolve_output_dir(const std::string& dir);

// Writes snapshot_<step>.csv files, index.csv, provenance.txt (spec + theory report),
// coefficients.csv and plot.gp; comparison.txt and reference_<step>.csv when given.
void write_run(const RunRecord& run, const std::filesystem::path& dir,
               const ComparisonReport* report = nullptr, const PdeSolution* reference = nullptr);
RunRecord load_run(const std::filesystem::path& dir);

struct RunOutcome {
  RunRecord record;
  std::optional<ComparisonReport> report;
  std::filesystem::path directory;
};

// simulate + optional reference comparison/fit + write_run.
RunOutcome run(const ExperimentSpec& spec);

// Steps before the inviscid breaking time of the spec's initial profile, scaled by `fraction`,
// using the leading-order sound speed (the two-bit gas uses c / (1 - mean density)).
int pre_shock_steps(const ExperimentSpec& spec, double fraction = 0.8, int cap = 2000);

struct WindowFit {
  RunRecord run;
  BurgersFit fit;
};

// Re-runs `spec` for `steps` steps with `samples` evenly spaced snapshots and fits effective
// Burgers coefficients to that window.
WindowFit fit_window(ExperimentSpec spec, int steps, int samples = 16,
                     const FitOptions& options = {});

// fig1: quantum theta = pi/4, classical alpha = 0.707 and the two-bit gas; fig2: quantum
// theta = 1.5 and classical alpha = 0.5. All on a 256-site ring from the default sine.
std::vector<ExperimentSpec> preset_specs(const std::string& name);

struct PresetOutcome {
  std::vector<RunOutcome> runs;
  std::vector<std::pair<std::string, BurgersFit>> fits;
  std::filesystem::path directory;
};

PresetOutcome run_preset(const std::string& name, const std::filesystem::path& root);

// gnuplot script overlaying rho of several runs, one panel per snapshot.
void write_overlay_plot(std::ostream& out, const std::vector<std::pair<std::string, RunRecord>>& runs,
                        const std::filesystem::path& base);

}  // namespace qlg

#endif  // QLG_EXPERIMENT_HPP_
