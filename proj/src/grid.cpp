#include "qlg/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace qlg {

GridSpec::GridSpec(std::size_t n_sites, double dx, double dt)
    : n_sites_(n_sites), dx_(dx), dt_(dt), c_(dx / dt) {
  if (n_sites < 4) throw std::invalid_argument("grid.n_sites must be >= 4");
  if (!(dx > 0.0) || !std::isfinite(dx)) throw std::invalid_argument("grid.dx must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("grid.dt must be positive");
}

}  // namespace qlg
