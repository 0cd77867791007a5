#ifndef QLG_SWEEP_HPP_
#define QLG_SWEEP_HPP_

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qlg/config.hpp"

namespace qlg {

enum class SweepKind { ensemble_noise, grid_convergence, angle_scan };

SweepKind parse_sweep_kind(const std::string& name);
std::string to_string(SweepKind kind);

struct SweepTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, double>> summary;

  const double* find_summary(const std::string& key) const;
};

// ensemble_noise: quantum sampled runs for N in {16, 64, 256, 1024} and a few seeds against the
//   mesoscopic run of the same model; summary slope of std against N.
// grid_convergence: N_x in {128, 256, 512, 1024} on a fixed domain with diffusive scaling
//   (dx = 128 / N_x, dt = dx^2), lattice gas against the leading-order Burgers solution.
// angle_scan: theta in {1.0, 1.2, pi/4, 1.5} at zeta = xi = 0, effective (c_s, nu) fitted over
//   the pre-shock window.
// `base` supplies the model and initial condition where the sweep does not override them.
SweepTable run_sweep(SweepKind kind, const ExperimentSpec& base);

void write_sweep_csv(std::ostream& out, const SweepTable& table);

}  // namespace qlg

#endif  // QLG_SWEEP_HPP_
