#include "qlg/initial.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qlg/theory.hpp"

namespace qlg {

OccupancyField init_from_density(const DensityProfile& rho, const CollisionModel& model,
                                 Split split) {
  OccupancyField out;
  out.plus.resize(rho.size());
  out.minus.resize(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double r = rho.rho[i];
    if (!(r > 0.0 && r < 2.0)) {
      throw std::invalid_argument(fmt::format("initial rho = {} at site {} outside (0,2)", r, i));
    }
    if (split == Split::symmetric) {
      out.plus[i] = 0.5 * r;
      out.minus[i] = 0.5 * r;
    } else {
      const auto d = equilibrium(model, r);
      out.plus[i] = d.d_plus;
      // Keeps plus + minus == rho to the last bit.
      out.minus[i] = r - d.d_plus;
    }
  }
  return out;
}

DensityProfile sine_profile(const GridSpec& grid, double mean, double amplitude, int mode) {
  DensityProfile p;
  p.rho.resize(grid.n_sites());
  const double k = 2.0 * std::numbers::pi * mode / grid.length();
  for (std::size_t i = 0; i < grid.n_sites(); ++i) {
    p.rho[i] = mean + amplitude * std::sin(k * grid.x(i));
  }
  return p;
}

DensityProfile step_profile(const GridSpec& grid, double low, double high) {
  DensityProfile p;
  p.rho.resize(grid.n_sites());
  const auto n = grid.n_sites();
  for (std::size_t i = 0; i < n; ++i) p.rho[i] = (i >= n / 4 && i < 3 * n / 4) ? high : low;
  return p;
}

DensityProfile gaussian_profile(const GridSpec& grid, double mean, double amplitude, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian width must be positive");
  DensityProfile p;
  p.rho.resize(grid.n_sites());
  const double centre = 0.5 * grid.length();
  for (std::size_t i = 0; i < grid.n_sites(); ++i) {
    const double d = grid.x(i) - centre;
    p.rho[i] = mean + amplitude * std::exp(-d * d / (2.0 * width * width));
  }
  return p;
}

}  // namespace qlg
