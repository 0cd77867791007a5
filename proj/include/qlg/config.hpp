#ifndef QLG_CONFIG_HPP_
#define QLG_CONFIG_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qlg/collision.hpp"
#include "qlg/grid.hpp"
#include "qlg/initial.hpp"
#include "qlg/microscopic.hpp"

namespace qlg {

enum class SimulationMode { mesoscopic, microscopic };
enum class InitialKind { sine, step, gaussian, file };
enum class ReferenceKind { none, burgers, eft };

struct InitialCondition {
  InitialKind kind = InitialKind::sine;
  double mean = 1.0;
  double amplitude = 0.4;
  double low = 0.8;    // step
  double high = 1.2;   // step
  double width = 16.0; // gaussian, length units
  std::string path;    // file: snapshot CSV giving p_plus, p_minus directly
};

struct ReferenceSpec {
  ReferenceKind kind = ReferenceKind::none;
  // Burgers coefficients; unset values come from leading_order_transport of the model.
  std::optional<double> c_s;
  std::optional<double> nu;
  double cfl_safety = 0.9;
  std::optional<double> fixed_dt;  // PDE step; refused (CflError) when above the stability bound
  bool fit = false;  // also fit effective (c_s, nu) from the run
};

struct ExperimentSpec {
  std::string name = "run";
  CollisionModel model = Quantum{0.78539816339744831, 0.0, 0.0};
  GridSpec grid;
  SimulationMode mode = SimulationMode::mesoscopic;
  EnsembleSpec ensemble;
  InitialCondition initial;
  Split split = Split::equilibrium;
  int steps = 256;
  int snapshot_every = 32;
  ReferenceSpec reference;
  std::string output_dir = "qlg_out";
  std::uint64_t seed = 1;  // master seed of the microscopic ensemble
};

using Settings = std::vector<std::pair<std::string, std::string>>;

// `key = value` lines; `#` starts a comment; `[section]` prefixes following keys with
// `section.`. Keys under `theory.` and `provenance.` are informational and skipped on apply.
Settings parse_settings(std::istream& in);

// Applies one dotted key. Throws ConfigError naming the key on unknown keys or bad values.
void apply_setting(ExperimentSpec& spec, const std::string& key, const std::string& value);
ExperimentSpec spec_from_settings(const Settings& settings, ExperimentSpec base = {});

// Throws ConfigError when the spec breaks an invariant (steps >= 1, cadence divides steps,
// initial density inside (0,2), valid model).
void validate(const ExperimentSpec& spec);

// Full spec as `key = value` lines; parse_settings + spec_from_settings round-trips it.
Settings to_settings(const ExperimentSpec& spec);
void write_settings(std::ostream& out, const Settings& settings);

DensityProfile initial_profile(const ExperimentSpec& spec);
// Occupations at step 0: the profile split per spec.split, or the snapshot file as is.
// Throws ContractViolation when a loaded probability leaves [0,1].
OccupancyField initial_occupancy(const ExperimentSpec& spec);

}  // namespace qlg

#endif  // QLG_CONFIG_HPP_
