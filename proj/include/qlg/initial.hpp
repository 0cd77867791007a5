#ifndef QLG_INITIAL_HPP_
#define QLG_INITIAL_HPP_

#include "qlg/collision.hpp"
#include "qlg/field.hpp"
#include "qlg/grid.hpp"

namespace qlg {

enum class Split { equilibrium, symmetric };

// symmetric: plus = minus = rho/2. equilibrium: (d_+(rho), d_-(rho)) of the model, which
// removes the initial relaxation transient. Every rho_i must lie in (0, 2).
OccupancyField init_from_density(const DensityProfile& rho, const CollisionModel& model,
                                 Split split);

// rho = mean + amplitude sin(2 pi x / L).
DensityProfile sine_profile(const GridSpec& grid, double mean, double amplitude, int mode = 1);
// high on the middle half of the ring, low elsewhere.
DensityProfile step_profile(const GridSpec& grid, double low, double high);
// mean + amplitude exp(-(x - L/2)^2 / (2 width^2)).
DensityProfile gaussian_profile(const GridSpec& grid, double mean, double amplitude, double width);

}  // namespace qlg

#endif  // QLG_INITIAL_HPP_
