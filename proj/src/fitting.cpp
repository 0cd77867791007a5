#include "qlg/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qlg/reference_pde.hpp"

namespace qlg {

namespace {

constexpr double kInvPhi = 0.61803398874989485;

template <class F>
std::pair<double, double> golden_minimize(F&& f, double lo, double hi, double tol) {
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol * (std::abs(0.5 * (a + b)) + 1e-3)) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

std::vector<double> default_nu_grid() {
  return {0.0,  0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.15, 0.2,  0.3,
          0.4,  0.5,   0.6,   0.7,   0.8,  0.9,  1.0,  1.2, 1.4,  1.7,  2.0};
}

}  // namespace

SeriesError series_error(const std::vector<DensityProfile>& a, const std::vector<DensityProfile>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("series lengths differ");
  SeriesError e;
  double num_total = 0.0, den_total = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].size() != b[k].size()) throw std::invalid_argument("profile sizes differ");
    double num = 0.0, den = 0.0, diff_max = 0.0, ref_max = 0.0;
    for (std::size_t i = 0; i < a[k].size(); ++i) {
      const double d = a[k].rho[i] - b[k].rho[i];
      num += d * d;
      den += b[k].rho[i] * b[k].rho[i];
      diff_max = std::max(diff_max, std::abs(d));
      ref_max = std::max(ref_max, std::abs(b[k].rho[i]));
    }
    num_total += num;
    den_total += den;
    e.l2.push_back(den > 0.0 ? std::sqrt(num / den) : std::sqrt(num));
    e.linf.push_back(ref_max > 0.0 ? diff_max / ref_max : diff_max);
  }
  e.l2_aggregate = den_total > 0.0 ? std::sqrt(num_total / den_total) : std::sqrt(num_total);
  if (!e.l2.empty()) {
    e.l2_max = *std::max_element(e.l2.begin(), e.l2.end());
    e.linf_max = *std::max_element(e.linf.begin(), e.linf.end());
  }
  return e;
}

double burgers_misfit(const GridSpec& grid, const std::vector<double>& times,
                      const std::vector<DensityProfile>& target, double c_s, double nu,
                      double cfl_safety) {
  if (times.size() != target.size() || target.empty()) {
    throw std::invalid_argument("fit target needs one profile per time");
  }
  PdeSpec spec;
  spec.kind = PdeKind::burgers;
  spec.c_s = c_s;
  spec.nu = std::max(nu, 0.0);
  spec.grid = grid;
  spec.cfl_safety = cfl_safety;
  std::vector<double> offsets(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) offsets[k] = times[k] - times.front();
  const auto sol = solve(spec, target.front(), offsets);
  return series_error(sol.profiles, target).l2_aggregate;
}

BurgersFit fit_burgers(const GridSpec& grid, const std::vector<double>& times,
                       const std::vector<DensityProfile>& target, const FitOptions& options) {
  if (options.c_s_points < 3) throw std::invalid_argument("fit needs >= 3 c_s grid points");
  const double diffusive = grid.dx() * grid.dx() / grid.dt();
  std::vector<double> nu_grid = options.nu_grid.empty() ? default_nu_grid() : options.nu_grid;
  for (double& nu : nu_grid) nu *= diffusive;
  std::vector<double> cs_grid(options.c_s_points);
  for (int i = 0; i < options.c_s_points; ++i) {
    cs_grid[i] = grid.c() * (options.c_s_min +
                             (options.c_s_max - options.c_s_min) * i / (options.c_s_points - 1));
  }

  BurgersFit fit;
  auto misfit = [&](double c_s, double nu) {
    ++fit.evaluations;
    return burgers_misfit(grid, times, target, c_s, nu, options.cfl_safety);
  };

  double best = std::numeric_limits<double>::infinity();
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 0; i < cs_grid.size(); ++i) {
    for (std::size_t j = 0; j < nu_grid.size(); ++j) {
      const double m = misfit(cs_grid[i], nu_grid[j]);
      if (m < best) {
        best = m;
        bi = i;
        bj = j;
      }
    }
  }
  fit.coarse_min_rel_l2 = best;

  const double cs_lo = cs_grid[bi == 0 ? 0 : bi - 1];
  const double cs_hi = cs_grid[std::min(bi + 1, cs_grid.size() - 1)];
  const double nu_lo = 0.0;
  const double nu_hi = nu_grid[std::min(bj + 1, nu_grid.size() - 1)];

  auto inner = [&](double c_s) {
    return golden_minimize([&](double nu) { return misfit(c_s, nu); }, nu_lo, nu_hi,
                           options.tolerance);
  };
  const auto [c_s, value] = golden_minimize([&](double c) { return inner(c).second; }, cs_lo,
                                            cs_hi, options.tolerance);
  const auto [nu, refined] = inner(c_s);
  if (refined <= best) {
    fit.c_s = c_s;
    fit.nu = nu;
    fit.rel_l2 = refined;
  } else {
    fit.c_s = cs_grid[bi];
    fit.nu = nu_grid[bj];
    fit.rel_l2 = best;
  }
  (void)value;
  return fit;
}

double shock_time_estimate(const DensityProfile& rho0, const GridSpec& grid, double c_s) {
  const auto n = rho0.size();
  double max_grad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = (rho0.rho[(i + 1) % n] - rho0.rho[(i + n - 1) % n]) / (2.0 * grid.dx());
    max_grad = std::max(max_grad, std::abs(g));
  }
  if (max_grad == 0.0 || c_s == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (std::abs(c_s) * max_grad);
}

}  // namespace qlg
