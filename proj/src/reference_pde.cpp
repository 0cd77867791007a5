#include "qlg/reference_pde.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qlg/errors.hpp"
#include "qlg/theory.hpp"

namespace qlg {

namespace {

// A step this small relative to the lattice step means a coefficient is blowing up.
constexpr double kMinStepFraction = 1e-4;

struct CellCoefficients {
  std::vector<double> flux;       // advective flux
  std::vector<double> speed;      // |characteristic speed| bound
  std::vector<double> viscosity;  // coefficient of d_x^2 rho on the right-hand side
  std::vector<double> gradient;   // coefficient of (d_x rho)^2 on the right-hand side
  double flux_at_one = 0.0;       // flux extremum (all supported fluxes peak or dip at rho = 1)
};

class HaltError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void validate_spec(const PdeSpec& spec) {
  if (!(spec.cfl_safety > 0.0 && spec.cfl_safety <= 1.0)) {
    throw std::invalid_argument("pde.cfl_safety must lie in (0,1]");
  }
  if (spec.kind == PdeKind::burgers) {
    if (!(spec.nu >= 0.0) || !std::isfinite(spec.nu)) throw std::invalid_argument("pde.nu must be >= 0");
    if (!std::isfinite(spec.c_s)) throw std::invalid_argument("pde.c_s must be finite");
  } else if (!spec.eft_model) {
    throw std::invalid_argument("general_eft needs a collision model");
  }
  if (spec.fixed_dt && !(*spec.fixed_dt > 0.0)) throw std::invalid_argument("pde.fixed_dt must be positive");
}

CellCoefficients coefficients(const PdeSpec& spec, const std::vector<double>& rho) {
  const auto n = rho.size();
  const double dx = spec.grid.dx();
  CellCoefficients k;
  k.flux.resize(n);
  k.speed.resize(n);
  k.viscosity.resize(n);
  k.gradient.resize(n);
  if (spec.kind == PdeKind::burgers) {
    for (std::size_t i = 0; i < n; ++i) {
      k.flux[i] = spec.c_s * (rho[i] - 0.5 * rho[i] * rho[i]);
      k.speed[i] = std::abs(spec.c_s * (1.0 - rho[i]));
      k.viscosity[i] = spec.nu;
    }
    k.flux_at_one = 0.5 * spec.c_s;
    return k;
  }
  const auto& model = *spec.eft_model;
  k.flux_at_one = spec.grid.c() * equilibrium(model, 1.0).flux();
  for (std::size_t i = 0; i < n; ++i) {
    EftCoefficients e;
    try {
      e = eft_coefficients(model, spec.grid, rho[i]);
    } catch (const SingularityError& err) {
      throw HaltError(fmt::format("singular coefficient at site {}: {}", i, err.what()));
    } catch (const std::invalid_argument& err) {
      throw HaltError(fmt::format("coefficient domain left at site {}: {}", i, err.what()));
    }
    if (-e.diffusion < 0.0) {
      throw HaltError(fmt::format("anti-diffusive coefficient {} at site {} (rho = {})",
                                  e.diffusion, i, rho[i]));
    }
    const double grad = (rho[(i + 1) % n] - rho[(i + n - 1) % n]) / (2.0 * dx);
    k.flux[i] = e.flux;
    k.viscosity[i] = -e.diffusion;
    k.gradient[i] = -spec.gradient_sign * e.gradient_squared;
    k.speed[i] = std::abs(e.advection) + std::abs(e.gradient_squared * grad);
  }
  return k;
}

double bound_from(const PdeSpec& spec, const CellCoefficients& k) {
  const double dx = spec.grid.dx();
  double rate = 0.0;
  for (std::size_t i = 0; i < k.speed.size(); ++i) {
    rate = std::max(rate, 2.0 * std::max(k.viscosity[i], 0.0) / (dx * dx) + k.speed[i] / dx);
  }
  if (rate == 0.0) return std::numeric_limits<double>::infinity();
  return spec.cfl_safety / rate;
}

double godunov(double left, double right, double f_left, double f_right, double f_one) {
  if (left <= right) {
    double f = std::min(f_left, f_right);
    if (left < 1.0 && 1.0 < right) f = std::min(f, f_one);
    return f;
  }
  double f = std::max(f_left, f_right);
  if (right < 1.0 && 1.0 < left) f = std::max(f, f_one);
  return f;
}

void advance(const PdeSpec& spec, const CellCoefficients& k, std::vector<double>& rho,
             std::vector<double>& scratch, double dt) {
  const auto n = rho.size();
  const double dx = spec.grid.dx();
  // scratch[i] = flux through the interface between i and i+1.
  scratch.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = (i + 1) % n;
    scratch[i] = godunov(rho[i], rho[r], k.flux[i], k.flux[r], k.flux_at_one);
  }
  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t l = (i + n - 1) % n;
    const std::size_t r = (i + 1) % n;
    double rhs = -(scratch[i] - scratch[l]) / dx;
    if (spec.kind == PdeKind::burgers) {
      // nu (rho_r - rho_i)/dx - nu (rho_i - rho_l)/dx in flux difference form.
      rhs += (spec.nu * (rho[r] - rho[i]) - spec.nu * (rho[i] - rho[l])) / (dx * dx);
    } else {
      const double grad = (rho[r] - rho[l]) / (2.0 * dx);
      rhs += k.viscosity[i] * (rho[r] - 2.0 * rho[i] + rho[l]) / (dx * dx) +
             k.gradient[i] * grad * grad;
    }
    next[i] = rho[i] + dt * rhs;
  }
  rho.swap(next);
}

}  // namespace

double admissible_dt(const PdeSpec& spec, const DensityProfile& rho) {
  validate_spec(spec);
  try {
    return bound_from(spec, coefficients(spec, rho.rho));
  } catch (const HaltError& err) {
    throw SingularityError(err.what());
  }
}

PdeSolution solve(const PdeSpec& spec, const DensityProfile& rho0, std::span<const double> times) {
  validate_spec(spec);
  if (rho0.size() != spec.grid.n_sites()) throw std::invalid_argument("rho0 size differs from grid");
  for (double r : rho0.rho) {
    if (!(r >= 0.0 && r <= 2.0)) throw std::invalid_argument(fmt::format("rho0 = {} outside [0,2]", r));
  }
  if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0)) {
    throw std::invalid_argument("sample times must be ascending and non-negative");
  }

  PdeSolution out;
  std::vector<double> rho = rho0.rho;
  std::vector<double> scratch;
  double t = 0.0;

  try {
    if (spec.fixed_dt) {
      const double bound = bound_from(spec, coefficients(spec, rho));
      if (*spec.fixed_dt > bound) {
        throw CflError(fmt::format("pde step {} exceeds the stability bound; admissible step <= {}",
                                   *spec.fixed_dt, bound),
                       bound);
      }
    }
    out.times.reserve(times.size());
    for (double target : times) {
      while (t < target) {
        const auto k = coefficients(spec, rho);
        const double bound = bound_from(spec, k);
        const double remaining = target - t;
        double dt;
        if (spec.fixed_dt) {
          if (*spec.fixed_dt > bound) {
            throw CflError(fmt::format("pde step {} exceeds the stability bound {} at t = {}",
                                       *spec.fixed_dt, bound, t),
                           bound);
          }
          dt = remaining / std::ceil(remaining / *spec.fixed_dt * (1.0 - 1e-12));
        } else {
          if (bound < kMinStepFraction * spec.grid.dt()) {
            throw HaltError(fmt::format("stable step {} collapsed at t = {} (coefficient blow-up)",
                                        bound, t));
          }
          dt = remaining / std::ceil(remaining / bound * (1.0 - 1e-12));
        }
        if (dt >= remaining) dt = remaining;
        advance(spec, k, rho, scratch, dt);
        ++out.substeps;
        t = (dt == remaining) ? target : t + dt;
        for (double r : rho) {
          if (!std::isfinite(r)) throw HaltError(fmt::format("non-finite density at t = {}", t));
        }
      }
      out.times.push_back(target);
      out.profiles.push_back(DensityProfile{rho});
    }
  } catch (const HaltError& err) {
    out.halted = true;
    out.diagnostic = err.what();
  }
  return out;
}

PdeSolution solve(const PdeSpec& spec, const DensityProfile& rho0, double t_final,
                  double sample_every) {
  if (!(sample_every > 0.0) || !(t_final >= 0.0)) throw std::invalid_argument("bad sample cadence");
  std::vector<double> times;
  const auto n = static_cast<std::size_t>(std::floor(t_final / sample_every + 1e-9));
  for (std::size_t k = 0; k <= n; ++k) times.push_back(static_cast<double>(k) * sample_every);
  if (times.back() < t_final) times.push_back(t_final);
  return solve(spec, rho0, times);
}

PdeSolution solve_eft(const CollisionModel& model, const GridSpec& grid, const DensityProfile& rho0,
                      std::span<const double> times, double gradient_sign) {
  PdeSpec spec;
  spec.kind = PdeKind::general_eft;
  spec.eft_model = model;
  spec.grid = grid;
  spec.gradient_sign = gradient_sign;
  return solve(spec, rho0, times);
}

}  // namespace qlg
