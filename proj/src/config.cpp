#include "qlg/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "qlg/errors.hpp"

namespace qlg {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end || !std::isfinite(out)) {
    throw ConfigError(key, fmt::format("expected a number, got `{}`", value));
  }
  return out;
}

long long to_integer(const std::string& key, const std::string& value) {
  long long out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError(key, fmt::format("expected an integer, got `{}`", value));
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(key, fmt::format("expected true/false, got `{}`", value));
}

std::string fmt_double(double v) { return fmt::format("{:.17g}", v); }

void set_grid(ExperimentSpec& spec, const std::string& key, std::size_t n, double dx, double dt) {
  try {
    spec.grid = GridSpec(n, dx, dt);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(key, err.what());
  }
}

template <class Model>
Model& model_as(ExperimentSpec& spec, const std::string& key) {
  auto* m = std::get_if<Model>(&spec.model);
  if (m == nullptr) {
    throw ConfigError(key, fmt::format("not a parameter of {}", model_name(spec.model)));
  }
  return *m;
}

}  // namespace

Settings parse_settings(std::istream& in) {
  Settings out;
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(fmt::format("line {}", line_no), "unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("line {}", line_no), "expected `key = value`");
    }
    std::string key = trim(line.substr(0, eq));
    if (!section.empty()) key = section + "." + key;
    out.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return out;
}

void apply_setting(ExperimentSpec& spec, const std::string& key, const std::string& value) {
  if (key.rfind("theory.", 0) == 0 || key.rfind("provenance.", 0) == 0) return;

  if (key == "name") {
    spec.name = value;
  } else if (key == "model.kind") {
    if (value == "quantum") {
      if (!std::holds_alternative<Quantum>(spec.model)) spec.model = Quantum{0.78539816339744831, 0.0, 0.0};
    } else if (value == "classical") {
      if (!std::holds_alternative<ClassicalBL>(spec.model)) spec.model = ClassicalBL{0.707};
    } else if (value == "twobit") {
      spec.model = TwoBit{};
    } else {
      throw ConfigError(key, fmt::format("unknown model `{}` (quantum|classical|twobit)", value));
    }
  } else if (key == "model.alpha") {
    model_as<ClassicalBL>(spec, key).alpha = to_double(key, value);
  } else if (key == "model.theta") {
    model_as<Quantum>(spec, key).theta = to_double(key, value);
  } else if (key == "model.zeta") {
    model_as<Quantum>(spec, key).zeta = to_double(key, value);
  } else if (key == "model.xi") {
    model_as<Quantum>(spec, key).xi = to_double(key, value);
  } else if (key == "grid.n_sites") {
    const auto n = to_integer(key, value);
    if (n < 4) throw ConfigError(key, "must be >= 4");
    set_grid(spec, key, static_cast<std::size_t>(n), spec.grid.dx(), spec.grid.dt());
  } else if (key == "grid.dx") {
    set_grid(spec, key, spec.grid.n_sites(), to_double(key, value), spec.grid.dt());
  } else if (key == "grid.dt") {
    set_grid(spec, key, spec.grid.n_sites(), spec.grid.dx(), to_double(key, value));
  } else if (key == "run.mode") {
    if (value == "mesoscopic") spec.mode = SimulationMode::mesoscopic;
    else if (value == "microscopic") spec.mode = SimulationMode::microscopic;
    else throw ConfigError(key, fmt::format("unknown mode `{}` (mesoscopic|microscopic)", value));
  } else if (key == "run.split") {
    if (value == "equilibrium") spec.split = Split::equilibrium;
    else if (value == "symmetric") spec.split = Split::symmetric;
    else throw ConfigError(key, fmt::format("unknown split `{}` (equilibrium|symmetric)", value));
  } else if (key == "run.steps") {
    spec.steps = static_cast<int>(to_integer(key, value));
  } else if (key == "run.snapshot_every") {
    spec.snapshot_every = static_cast<int>(to_integer(key, value));
  } else if (key == "ensemble.n_realizations") {
    const auto n = to_integer(key, value);
    if (n < 1) throw ConfigError(key, "must be >= 1");
    spec.ensemble.n_realizations = static_cast<std::size_t>(n);
  } else if (key == "ensemble.coupling") {
    if (value == "mean_field") spec.ensemble.coupling = Coupling::mean_field;
    else if (value == "independent") spec.ensemble.coupling = Coupling::independent;
    else throw ConfigError(key, fmt::format("unknown coupling `{}` (mean_field|independent)", value));
  } else if (key == "ensemble.threads") {
    const auto n = to_integer(key, value);
    if (n < 0) throw ConfigError(key, "must be >= 0");
    spec.ensemble.threads = static_cast<unsigned>(n);
  } else if (key == "seed" || key == "ensemble.seed") {
    spec.seed = static_cast<std::uint64_t>(to_integer(key, value));
  } else if (key == "initial.kind") {
    if (value == "sine") spec.initial.kind = InitialKind::sine;
    else if (value == "step") spec.initial.kind = InitialKind::step;
    else if (value == "gaussian") spec.initial.kind = InitialKind::gaussian;
    else if (value == "file") spec.initial.kind = InitialKind::file;
    else throw ConfigError(key, fmt::format("unknown initial condition `{}` (sine|step|gaussian|file)", value));
  } else if (key == "initial.path") {
    spec.initial.path = value;
  } else if (key == "initial.mean") {
    spec.initial.mean = to_double(key, value);
  } else if (key == "initial.amplitude") {
    spec.initial.amplitude = to_double(key, value);
  } else if (key == "initial.low") {
    spec.initial.low = to_double(key, value);
  } else if (key == "initial.high") {
    spec.initial.high = to_double(key, value);
  } else if (key == "initial.width") {
    spec.initial.width = to_double(key, value);
  } else if (key == "reference.kind") {
    if (value == "none") spec.reference.kind = ReferenceKind::none;
    else if (value == "burgers") spec.reference.kind = ReferenceKind::burgers;
    else if (value == "eft") spec.reference.kind = ReferenceKind::eft;
    else throw ConfigError(key, fmt::format("unknown reference `{}` (none|burgers|eft)", value));
  } else if (key == "reference.c_s") {
    spec.reference.c_s = to_double(key, value);
  } else if (key == "reference.nu") {
    spec.reference.nu = to_double(key, value);
  } else if (key == "reference.cfl_safety") {
    spec.reference.cfl_safety = to_double(key, value);
  } else if (key == "reference.fixed_dt") {
    spec.reference.fixed_dt = to_double(key, value);
  } else if (key == "reference.fit") {
    spec.reference.fit = to_bool(key, value);
  } else if (key == "output.dir") {
    spec.output_dir = value;
  } else {
    throw ConfigError(key, "unknown setting");
  }
}

ExperimentSpec spec_from_settings(const Settings& settings, ExperimentSpec base) {
  // The model kind decides which parameter keys are legal, so it goes first.
  for (const auto& [k, v] : settings) {
    if (k == "model.kind") apply_setting(base, k, v);
  }
  for (const auto& [k, v] : settings) {
    if (k != "model.kind") apply_setting(base, k, v);
  }
  return base;
}

void validate(const ExperimentSpec& spec) {
  try {
    qlg::validate(spec.model);
  } catch (const std::invalid_argument& err) {
    throw ConfigError("model", err.what());
  }
  if (spec.steps < 1) throw ConfigError("run.steps", "must be >= 1");
  if (spec.snapshot_every < 1) throw ConfigError("run.snapshot_every", "must be >= 1");
  if (spec.steps % spec.snapshot_every != 0) {
    throw ConfigError("run.snapshot_every", "must divide run.steps");
  }
  if (!(spec.reference.cfl_safety > 0.0 && spec.reference.cfl_safety <= 1.0)) {
    throw ConfigError("reference.cfl_safety", "must lie in (0,1]");
  }
  if (spec.reference.nu && *spec.reference.nu < 0.0) throw ConfigError("reference.nu", "must be >= 0");
  if (spec.reference.fixed_dt && !(*spec.reference.fixed_dt > 0.0)) {
    throw ConfigError("reference.fixed_dt", "must be > 0");
  }
  const auto& ic = spec.initial;
  switch (ic.kind) {
    case InitialKind::sine:
    case InitialKind::gaussian:
      if (!(ic.mean - std::abs(ic.amplitude) > 0.0 && ic.mean + std::abs(ic.amplitude) < 2.0)) {
        throw ConfigError("initial.amplitude", "initial density must stay inside (0,2)");
      }
      if (ic.kind == InitialKind::gaussian && !(ic.width > 0.0)) {
        throw ConfigError("initial.width", "must be positive");
      }
      break;
    case InitialKind::step:
      for (double level : {ic.low, ic.high}) {
        if (!(level > 0.0 && level < 2.0)) throw ConfigError("initial.low/high", "levels must lie in (0,2)");
      }
      break;
    case InitialKind::file:
      if (ic.path.empty()) throw ConfigError("initial.path", "required for initial.kind = file");
      break;
  }
}

Settings to_settings(const ExperimentSpec& spec) {
  Settings s;
  s.emplace_back("name", spec.name);
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, ClassicalBL>) {
          s.emplace_back("model.kind", "classical");
          s.emplace_back("model.alpha", fmt_double(m.alpha));
        } else if constexpr (std::is_same_v<M, TwoBit>) {
          s.emplace_back("model.kind", "twobit");
        } else {
          s.emplace_back("model.kind", "quantum");
          s.emplace_back("model.theta", fmt_double(m.theta));
          s.emplace_back("model.zeta", fmt_double(m.zeta));
          s.emplace_back("model.xi", fmt_double(m.xi));
        }
      },
      spec.model);
  s.emplace_back("grid.n_sites", std::to_string(spec.grid.n_sites()));
  s.emplace_back("grid.dx", fmt_double(spec.grid.dx()));
  s.emplace_back("grid.dt", fmt_double(spec.grid.dt()));
  s.emplace_back("run.mode", spec.mode == SimulationMode::mesoscopic ? "mesoscopic" : "microscopic");
  s.emplace_back("run.split", spec.split == Split::equilibrium ? "equilibrium" : "symmetric");
  s.emplace_back("run.steps", std::to_string(spec.steps));
  s.emplace_back("run.snapshot_every", std::to_string(spec.snapshot_every));
  s.emplace_back("ensemble.n_realizations", std::to_string(spec.ensemble.n_realizations));
  s.emplace_back("ensemble.coupling",
                 spec.ensemble.coupling == Coupling::mean_field ? "mean_field" : "independent");
  s.emplace_back("ensemble.threads", std::to_string(spec.ensemble.threads));
  s.emplace_back("seed", std::to_string(spec.seed));
  static constexpr const char* kInitial[] = {"sine", "step", "gaussian", "file"};
  s.emplace_back("initial.kind", kInitial[static_cast<int>(spec.initial.kind)]);
  if (!spec.initial.path.empty()) s.emplace_back("initial.path", spec.initial.path);
  s.emplace_back("initial.mean", fmt_double(spec.initial.mean));
  s.emplace_back("initial.amplitude", fmt_double(spec.initial.amplitude));
  s.emplace_back("initial.low", fmt_double(spec.initial.low));
  s.emplace_back("initial.high", fmt_double(spec.initial.high));
  s.emplace_back("initial.width", fmt_double(spec.initial.width));
  static constexpr const char* kReference[] = {"none", "burgers", "eft"};
  s.emplace_back("reference.kind", kReference[static_cast<int>(spec.reference.kind)]);
  if (spec.reference.c_s) s.emplace_back("reference.c_s", fmt_double(*spec.reference.c_s));
  if (spec.reference.nu) s.emplace_back("reference.nu", fmt_double(*spec.reference.nu));
  s.emplace_back("reference.cfl_safety", fmt_double(spec.reference.cfl_safety));
  if (spec.reference.fixed_dt) s.emplace_back("reference.fixed_dt", fmt_double(*spec.reference.fixed_dt));
  s.emplace_back("reference.fit", spec.reference.fit ? "true" : "false");
  s.emplace_back("output.dir", spec.output_dir);
  return s;
}

void write_settings(std::ostream& out, const Settings& settings) {
  for (const auto& [k, v] : settings) out << k << " = " << v << '\n';
}

DensityProfile initial_profile(const ExperimentSpec& spec) {
  const auto& ic = spec.initial;
  switch (ic.kind) {
    case InitialKind::sine: return sine_profile(spec.grid, ic.mean, ic.amplitude);
    case InitialKind::step: return step_profile(spec.grid, ic.low, ic.high);
    case InitialKind::gaussian: return gaussian_profile(spec.grid, ic.mean, ic.amplitude, ic.width);
    case InitialKind::file: return density(initial_occupancy(spec));
  }
  return {};
}

OccupancyField initial_occupancy(const ExperimentSpec& spec) {
  if (spec.initial.kind != InitialKind::file) {
    return init_from_density(initial_profile(spec), spec.model, spec.split);
  }
  std::ifstream in(spec.initial.path);
  if (!in) throw ConfigError("initial.path", "cannot open " + spec.initial.path);
  auto field = read_snapshot_csv(in);
  if (field.size() != spec.grid.n_sites()) {
    throw ConfigError("initial.path", fmt::format("snapshot has {} sites, grid has {}", field.size(),
                                                  spec.grid.n_sites()));
  }
  check_probabilities(field, kProbabilityTolerance);
  return field;
}

}  // namespace qlg
