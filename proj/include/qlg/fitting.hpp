#ifndef QLG_FITTING_HPP_
#define QLG_FITTING_HPP_

#include <cstddef>
#include <vector>

#include "qlg/field.hpp"
#include "qlg/grid.hpp"

namespace qlg {

// Relative norms between two time-aligned density series (b is the reference).
struct SeriesError {
  std::vector<double> l2;    // ||a - b||_2 / ||b||_2 per sample
  std::vector<double> linf;  // max |a - b| / max |b| per sample
  double l2_aggregate = 0.0; // over all samples at once
  double l2_max = 0.0;
  double linf_max = 0.0;
};

SeriesError series_error(const std::vector<DensityProfile>& a, const std::vector<DensityProfile>& b);

struct FitOptions {
  double c_s_min = -2.0;
  double c_s_max = 2.0;
  int c_s_points = 81;
  // Coarse viscosity grid in units of dx^2/dt; empty selects a default log-spaced grid on [0, 2].
  std::vector<double> nu_grid;
  double tolerance = 1e-3;
  double cfl_safety = 0.9;
};

struct BurgersFit {
  double c_s = 0.0;
  double nu = 0.0;
  double rel_l2 = 0.0;           // aggregate relative L2 at the optimum
  double coarse_min_rel_l2 = 0.0;  // best value found on the coarse grid
  std::size_t evaluations = 0;
};

// Aggregate relative L2 of `target` against the Burgers solution started from target[0].
double burgers_misfit(const GridSpec& grid, const std::vector<double>& times,
                      const std::vector<DensityProfile>& target, double c_s, double nu,
                      double cfl_safety = 0.9);

// Coarse (c_s, nu) grid scan followed by nested golden-section searches (outer c_s, inner nu)
// between the neighbouring c_s grid points and over [0, next nu grid point].
BurgersFit fit_burgers(const GridSpec& grid, const std::vector<double>& times,
                       const std::vector<DensityProfile>& target, const FitOptions& options = {});

// Breaking time 1 / (|c_s| max |d_x rho|) of the inviscid Burgers solution.
double shock_time_estimate(const DensityProfile& rho0, const GridSpec& grid, double c_s);

}  // namespace qlg

#endif  // QLG_FITTING_HPP_
