#ifndef QLG_REFERENCE_PDE_HPP_
#define QLG_REFERENCE_PDE_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qlg/collision.hpp"
#include "qlg/field.hpp"
#include "qlg/grid.hpp"

namespace qlg {

enum class PdeKind { burgers, general_eft };

// Explicit finite-volume integrator for
//   burgers:     d_t rho + c_s (1 - rho) d_x rho = nu d_x^2 rho
//   general_eft: d_t rho + advection(rho) d_x rho + s G(rho) (d_x rho)^2 + diffusion(rho) d_x^2 rho = 0
// with coefficient functions from eft_coefficients(eft_model) and s = gradient_sign.
struct PdeSpec {
  PdeKind kind = PdeKind::burgers;
  double c_s = 0.0;
  double nu = 0.0;
  std::optional<CollisionModel> eft_model;
  GridSpec grid;
  double cfl_safety = 0.9;
  // When set, the solver never steps further than this and refuses to run if it exceeds the
  // stability bound. Otherwise the step is chosen from the bound.
  std::optional<double> fixed_dt;
  // -1 matches d_x [nu(rho) d_x rho] with nu = -diffusion; +1 is the literal transcription.
  double gradient_sign = -1.0;
};

struct PdeSolution {
  std::vector<double> times;
  std::vector<DensityProfile> profiles;
  bool halted = false;
  std::string diagnostic;
  std::size_t substeps = 0;
};

// Largest stable step for the current state:
//   cfl_safety / max_i (2 nu_i / dx^2 + |speed_i| / dx).
double admissible_dt(const PdeSpec& spec, const DensityProfile& rho);

// Integrates from t = 0, recording the profile at each requested time (ascending, >= 0).
// Flux-form Godunov advection and centred diffusion; sub-steps land exactly on the sample times.
// Throws CflError when fixed_dt exceeds the bound. For general_eft, a singular or anti-diffusive
// coefficient halts the run and the partial series is returned with a diagnostic.
PdeSolution solve(const PdeSpec& spec, const DensityProfile& rho0, std::span<const double> times);
PdeSolution solve(const PdeSpec& spec, const DensityProfile& rho0, double t_final,
                  double sample_every);

// general_eft integration with the model's coefficient functions.
PdeSolution solve_eft(const CollisionModel& model, const GridSpec& grid, const DensityProfile& rho0,
                      std::span<const double> times, double gradient_sign = -1.0);

}  // namespace qlg

#endif  // QLG_REFERENCE_PDE_HPP_
