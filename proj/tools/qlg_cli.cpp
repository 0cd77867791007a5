// qlg: run lattice-gas experiments, sweeps, presets and theory reports.
#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>

#include "qlg/errors.hpp"
#include "qlg/experiment.hpp"
#include "qlg/sweep.hpp"
#include "qlg/theory.hpp"

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kContract = 3, kCfl = 4 };

// Leftover `--section.key value` / `--section.key=value` pairs.
qlg::Settings overrides(const std::vector<std::string>& extras) {
  qlg::Settings out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const auto& arg = extras[i];
    if (arg.rfind("--", 0) != 0 || arg.size() < 3) {
      throw qlg::ConfigError(arg, "unexpected argument");
    }
    const auto body = arg.substr(2);
    if (const auto eq = body.find('='); eq != std::string::npos) {
      out.emplace_back(body.substr(0, eq), body.substr(eq + 1));
    } else {
      if (i + 1 >= extras.size()) throw qlg::ConfigError(body, "missing value");
      out.emplace_back(body, extras[++i]);
    }
  }
  return out;
}

qlg::ExperimentSpec load_spec(const std::string& config, const std::vector<std::string>& extras) {
  qlg::Settings settings;
  if (!config.empty()) {
    std::ifstream in(config);
    if (!in) throw qlg::ConfigError("config", "cannot open " + config);
    settings = qlg::parse_settings(in);
  }
  for (auto& kv : overrides(extras)) settings.push_back(std::move(kv));
  return qlg::spec_from_settings(settings);
}

void print_fit(const std::string& name, const qlg::BurgersFit& fit) {
  fmt::print("{}: c_s_fit = {:.6g}, nu_fit = {:.6g}, rel_l2 = {:.4g}\n", name, fit.c_s, fit.nu, fit.rel_l2);
}

int dispatch(int argc, char** argv) {
  CLI::App app{"One-dimensional lattice-gas models of the Burgers equation"};
  app.require_subcommand(1);

  std::string config;
  std::string table;

  auto* run = app.add_subcommand("run", "simulate one configuration and write its run directory");
  run->add_option("-c,--config", config, "key = value settings file");
  run->allow_extras();

  std::string dir_a, dir_b, compare_out;
  auto* compare = app.add_subcommand("compare", "compare the density series of two run directories");
  compare->add_option("run", dir_a, "run directory")->required();
  compare->add_option("reference", dir_b, "reference run directory")->required();
  compare->add_option("-o,--out", compare_out, "write the report here instead of stdout");

  std::string sweep_kind;
  auto* sweep = app.add_subcommand("sweep", "ensemble_noise | grid_convergence | angle_scan");
  sweep->add_option("kind", sweep_kind)->required();
  sweep->add_option("-c,--config", config, "base settings file");
  sweep->add_option("--table", table, "CSV output path (default: stdout)");
  sweep->allow_extras();

  std::string preset_name, preset_root = "presets";
  auto* preset = app.add_subcommand("preset", "reproduce a figure: fig1 | fig2");
  preset->add_option("name", preset_name)->required();
  preset->add_option("-o,--out", preset_root, "output root");

  auto* theory = app.add_subcommand("theory-report", "equilibria, Jacobian and transport coefficients");
  theory->add_option("-c,--config", config, "settings file");
  theory->add_option("--table", table, "also write the coefficient table as CSV");
  theory->allow_extras();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  if (*run) {
    const auto spec = load_spec(config, run->remaining());
    const auto outcome = qlg::run(spec);
    fmt::print("wrote {} snapshots to {}\n", outcome.record.snapshots.size(), outcome.directory.string());
    fmt::print("mass_drift = {:.3g}\n", outcome.record.mass_drift);
    if (outcome.report) {
      if (outcome.report->error.l2.size() > 0) {
        fmt::print("reference l2_aggregate = {:.6g}\n", outcome.report->error.l2_aggregate);
      }
      if (!outcome.report->diagnostic.empty()) fmt::print("reference: {}\n", outcome.report->diagnostic);
      if (outcome.report->fit) print_fit(spec.name, *outcome.report->fit);
    }
  } else if (*compare) {
    const auto report = qlg::compare_runs(qlg::load_run(dir_a), qlg::load_run(dir_b));
    if (compare_out.empty()) {
      qlg::write_comparison(std::cout, report);
    } else {
      std::ofstream out(compare_out);
      qlg::write_comparison(out, report);
    }
  } else if (*sweep) {
    const auto kind = qlg::parse_sweep_kind(sweep_kind);
    const auto result = qlg::run_sweep(kind, load_spec(config, sweep->remaining()));
    if (table.empty()) {
      qlg::write_sweep_csv(std::cout, result);
    } else {
      std::ofstream out(qlg::resolve_output_dir(table));
      qlg::write_sweep_csv(out, result);
      for (const auto& [k, v] : result.summary) fmt::print("{} = {:.6g}\n", k, v);
    }
  } else if (*preset) {
    const auto outcome = qlg::run_preset(preset_name, qlg::resolve_output_dir(preset_root));
    fmt::print("wrote {}\n", outcome.directory.string());
    for (const auto& [name, fit] : outcome.fits) print_fit(name, fit);
  } else if (*theory) {
    const auto spec = load_spec(config, theory->remaining());
    qlg::write_theory_report(std::cout, qlg::make_theory_report(spec.model, spec.grid));
    if (!table.empty()) {
      std::ofstream out(qlg::resolve_output_dir(table));
      qlg::write_coefficient_table(out, spec.model, spec.grid, 100);
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const qlg::ConfigError& e) {
    std::cerr << "config error [" << e.field() << "]: " << e.what() << '\n';
    return kConfig;
  } catch (const qlg::CflError& e) {
    std::cerr << "CFL refusal: " << e.what() << '\n';
    return kCfl;
  } catch (const qlg::ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << '\n';
    return kContract;
  } catch (const qlg::SingularityError& e) {
    std::cerr << "singularity: " << e.what() << '\n';
    return kContract;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
