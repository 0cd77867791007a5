#include "qlg/theory.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "qlg/errors.hpp"

namespace qlg {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kResidualTolerance = 1e-10;
constexpr double kSingularLambda = 1e-12;
constexpr double kRhoStep = 1e-6;

void require_density(double rho, bool open) {
  const bool ok = open ? (rho > 0.0 && rho < 2.0) : (rho >= 0.0 && rho <= 2.0);
  if (!ok) throw std::invalid_argument(fmt::format("rho = {} outside admissible range", rho));
}

// Offset d_+ - d_- of the quantum equilibrium (magnitude), written without cancellation:
// (sqrt(1+a^2) - sqrt(1+a^2 (rho-1)^2)) / a.
double quantum_offset(double rho, double alpha) {
  const double r = rho - 1.0;
  return alpha * rho * (2.0 - rho) /
         (std::sqrt(1.0 + alpha * alpha) + std::sqrt(1.0 + alpha * alpha * r * r));
}

double quantum_residual(const Equilibrium& e, const Quantum& m) {
  return omega_quantum_closed(e.d_plus, e.d_minus, m.theta, m.zeta, m.xi);
}

bool admissible(const Equilibrium& e) {
  return e.d_plus >= 0.0 && e.d_plus <= 1.0 && e.d_minus >= 0.0 && e.d_minus <= 1.0;
}

// Root of Omega(p, rho - p) for p in [max(0, rho-1), min(1, rho)]. Omega is non-negative at the
// lower end and non-positive at the upper end for every gate angle.
double bisect_quantum(double rho, const Quantum& m) {
  double lo = std::max(0.0, rho - 1.0);
  double hi = std::min(1.0, rho);
  auto g = [&](double p) { return omega_quantum_closed(p, rho - p, m.theta, m.zeta, m.xi); };
  double g_lo = g(lo);
  if (g_lo == 0.0) return lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g_mid = g(mid);
    if (g_mid == 0.0) return mid;
    if ((g_mid > 0.0) == (g_lo > 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double lambda2_of(const CollisionModel& model, double rho) { return jacobian(model, rho).lambda2(); }

}  // namespace

std::string to_string(EquilibriumBranch branch) {
  switch (branch) {
    case EquilibriumBranch::printed_sign: return "printed_sign";
    case EquilibriumBranch::flipped_sign: return "flipped_sign";
    case EquilibriumBranch::bisection: return "bisection";
  }
  return "unknown";
}

Equilibrium classical_equilibrium(double rho, double alpha) {
  require_density(rho, false);
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha outside [0,1]");
  const double q = rho * (1.0 - 0.5 * rho);
  const double disc = 1.0 - 2.0 * alpha * alpha * q;
  if (disc < 0.0) throw ContractViolation("classical equilibrium: negative discriminant");
  // [1 - sqrt(disc)] / (2 alpha), rationalised so alpha = 0 needs no special case.
  const double a = alpha * q / (1.0 + std::sqrt(disc));
  return {0.5 * rho + a, 0.5 * rho - a};
}

Equilibrium classical_equilibrium_leading_order(double rho, double alpha) {
  const double a = alpha * 0.5 * rho * (1.0 - 0.5 * rho);
  return {0.5 * rho + a, 0.5 * rho - a};
}

QuantumEquilibrium quantum_equilibrium(double rho, double theta, double zeta, double xi) {
  require_density(rho, true);
  const Quantum m{theta, zeta, xi};
  validate(m);
  const double alpha = alpha_eff(m);

  QuantumEquilibrium out;
  out.bisection_d_plus = bisect_quantum(rho, m);

  const double half = 0.5 * quantum_offset(rho, alpha);
  const Equilibrium printed{0.5 * rho - half, 0.5 * rho + half};
  const Equilibrium flipped{0.5 * rho + half, 0.5 * rho - half};
  auto passes = [&](const Equilibrium& e) {
    return admissible(e) && std::abs(quantum_residual(e, m)) < kResidualTolerance &&
           std::abs(e.d_plus - out.bisection_d_plus) < 1e-8;
  };
  if (passes(printed)) {
    out.value = printed;
    out.branch = EquilibriumBranch::printed_sign;
  } else if (passes(flipped)) {
    out.value = flipped;
    out.branch = EquilibriumBranch::flipped_sign;
  } else {
    out.value = {out.bisection_d_plus, rho - out.bisection_d_plus};
    out.branch = EquilibriumBranch::bisection;
    if (std::abs(quantum_residual(out.value, m)) > kResidualTolerance) {
      throw ContractViolation(fmt::format("no quantum equilibrium found at rho = {}", rho));
    }
  }
  return out;
}

Equilibrium twobit_equilibrium(double rho) {
  require_density(rho, false);
  return {std::min(rho, 1.0), std::max(rho - 1.0, 0.0)};
}

Equilibrium equilibrium(const CollisionModel& model, double rho) {
  return std::visit(Overloaded{
                        [&](const ClassicalBL& m) { return classical_equilibrium(rho, m.alpha); },
                        [&](const TwoBit&) { return twobit_equilibrium(rho); },
                        [&](const Quantum& m) {
                          return quantum_equilibrium(rho, m.theta, m.zeta, m.xi).value;
                        },
                    },
                    model);
}

double equilibrium_flux_slope(const CollisionModel& model, double rho) {
  return std::visit(
      Overloaded{
          [&](const ClassicalBL& m) {
            require_density(rho, false);
            const double disc = 1.0 - 2.0 * m.alpha * m.alpha * rho * (1.0 - 0.5 * rho);
            return m.alpha * (1.0 - rho) / std::sqrt(disc);
          },
          [&](const TwoBit&) {
            require_density(rho, false);
            if (rho == 1.0) throw SingularityError("two-bit flux has a kink at rho = 1");
            return rho < 1.0 ? 1.0 : -1.0;
          },
          [&](const Quantum& m) {
            require_density(rho, true);
            const double alpha = alpha_eff(m);
            const double r = rho - 1.0;
            // Sign follows the root-verified branch of quantum_equilibrium.
            const auto eq = quantum_equilibrium(rho, m.theta, m.zeta, m.xi);
            const double sign = eq.branch == EquilibriumBranch::printed_sign ? -1.0 : 1.0;
            return sign * (-alpha * r / std::sqrt(1.0 + alpha * alpha * r * r));
          },
      },
      model);
}

JacobianPair jacobian(const CollisionModel& model, double rho) {
  return std::visit(
      Overloaded{
          [&](const ClassicalBL& m) {
            const auto d = classical_equilibrium(rho, m.alpha);
            return JacobianPair{-0.5 + 0.5 * m.alpha * (1.0 - 2.0 * d.d_minus),
                                0.5 + 0.5 * m.alpha * (1.0 - 2.0 * d.d_plus)};
          },
          [&](const TwoBit&) {
            const auto d = twobit_equilibrium(rho);
            return JacobianPair{-d.d_minus, 1.0 - d.d_plus};
          },
          [&](const Quantum& m) {
            const auto d = quantum_equilibrium(rho, m.theta, m.zeta, m.xi).value;
            const double vp = d.d_plus * (1.0 - d.d_plus);
            const double vm = d.d_minus * (1.0 - d.d_minus);
            const double root = std::sqrt(vp * vm);
            if (!(root > 1e-300)) {
              throw SingularityError(
                  fmt::format("quantum Jacobian singular: equilibrium on boundary at rho = {}", rho));
            }
            const double s2 = std::sin(m.theta) * std::sin(m.theta);
            const double alpha = alpha_eff(m);
            return JacobianPair{s2 * (-1.0 - alpha * (2.0 * d.d_plus - 1.0) * vm / root),
                                s2 * (1.0 - alpha * (2.0 * d.d_minus - 1.0) * vp / root)};
          },
      },
      model);
}

Matrix2 jacobian_matrix(const JacobianPair& j) {
  return {Vec2{j.j_plus, j.j_minus}, Vec2{-j.j_plus, -j.j_minus}};
}

Matrix2 multiply(const Matrix2& a, const Matrix2& b) {
  Matrix2 out{};
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) {
      out[i][k] = a[i][0] * b[0][k] + a[i][1] * b[1][k];
    }
  }
  return out;
}

SpectralData spectral(const Matrix2& j) {
  const double jp = j[0][0];
  const double jm = j[0][1];
  const double lambda2 = jp - jm;
  if (std::abs(lambda2) < kSingularLambda) {
    throw SingularityError("collision Jacobian has a double zero eigenvalue (no relaxation)");
  }
  SpectralData s;
  s.lambda1 = 0.0;
  s.lambda2 = lambda2;
  s.left1 = {1.0, 1.0};
  s.right1 = {jm / (jm - jp), -jp / (jm - jp)};
  s.left2 = {jp / lambda2, jm / lambda2};
  s.right2 = {1.0, -1.0};
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) s.generalized_inverse[r][c] = s.right2[r] * s.left2[c] / lambda2;
  }
  return s;
}

TransportCoefficients transport_coefficients(const CollisionModel& model, const GridSpec& grid) {
  const double diffusive = grid.dx() * grid.dx() / grid.dt();
  return std::visit(
      Overloaded{
          [&](const ClassicalBL& m) {
            return TransportCoefficients{grid.c() * m.alpha, 0.5 * diffusive};
          },
          [&](const TwoBit&) -> TransportCoefficients {
            throw std::invalid_argument("the two-bit gas has no Burgers transport coefficients");
          },
          [&](const Quantum& m) {
            const double cot = std::cos(m.theta) / std::sin(m.theta);
            return TransportCoefficients{grid.c() * cot * std::cos(m.zeta - m.xi),
                                         cot * cot * diffusive};
          },
      },
      model);
}

TransportCoefficients leading_order_transport(const CollisionModel& model, const GridSpec& grid) {
  const double diffusive = grid.dx() * grid.dx() / grid.dt();
  return std::visit(
      Overloaded{
          [&](const ClassicalBL& m) {
            return TransportCoefficients{grid.c() * m.alpha, 0.5 * diffusive};
          },
          [&](const TwoBit&) -> TransportCoefficients {
            throw std::invalid_argument("the two-bit gas has no Burgers transport coefficients");
          },
          [&](const Quantum& m) {
            const double cot = std::cos(m.theta) / std::sin(m.theta);
            return TransportCoefficients{grid.c() * cot * std::cos(m.zeta - m.xi),
                                         0.5 * cot * cot * diffusive};
          },
      },
      model);
}

EftCoefficients eft_coefficients(const CollisionModel& model, const GridSpec& grid, double rho) {
  const double diffusive = grid.dx() * grid.dx() / grid.dt();
  EftCoefficients out;
  const auto d = equilibrium(model, rho);
  out.flux = grid.c() * d.flux();
  out.advection = grid.c() * equilibrium_flux_slope(model, rho);
  out.lambda2 = lambda2_of(model, rho);
  if (std::abs(out.lambda2) < kSingularLambda) {
    throw SingularityError(fmt::format("relaxation eigenvalue vanishes at rho = {}", rho));
  }
  const double slope = std::visit(
      Overloaded{
          [&](const ClassicalBL& m) {
            // lambda2 = -1 + alpha (d_+ - d_-)
            return m.alpha * equilibrium_flux_slope(model, rho);
          },
          [&](const TwoBit&) { return rho < 1.0 ? 1.0 : -1.0; },
          [&](const Quantum&) {
            const double lo = std::max(rho - kRhoStep, 0.5 * rho);
            const double hi = std::min(rho + kRhoStep, 0.5 * (rho + 2.0));
            return (lambda2_of(model, hi) - lambda2_of(model, lo)) / (hi - lo);
          },
      },
      model);
  out.gradient_squared = diffusive * slope / (out.lambda2 * out.lambda2);
  out.diffusion = 0.5 * diffusive * (2.0 / out.lambda2 + 1.0);
  return out;
}

double quantum_f_factor(const Quantum& model, double rho) {
  const double alpha = alpha_eff(model);
  if (alpha == 0.0) throw std::invalid_argument("f factor undefined at alpha = 0");
  const double s2 = std::sin(model.theta) * std::sin(model.theta);
  const double lambda2 = jacobian(model, rho).lambda2();
  return (-lambda2 / (2.0 * s2) - 1.0) / (alpha * alpha);
}

TurbulenceScales turbulence_scales(double L, double u_L, double nu, double c) {
  if (!(L > 0.0 && u_L > 0.0 && nu > 0.0 && c > 0.0)) {
    throw std::invalid_argument("turbulence scales need positive L, u_L, nu, c");
  }
  TurbulenceScales t;
  t.L = L;
  t.u_L = u_L;
  t.nu = nu;
  t.epsilon = u_L * u_L * u_L / L;
  t.lambda = std::pow(nu * nu * nu / t.epsilon, 0.25);
  t.u_lambda = std::pow(nu * t.epsilon, 0.25);
  t.Re = L * u_L / nu;
  t.M = u_L / c;
  t.n_x_required = std::pow(t.Re, 0.75);
  t.n_required_lower = std::sqrt(t.Re) / (t.M * t.M);
  return t;
}

Complexity complexity(double n_ensemble, double n_x, double local_resources) {
  if (!(n_ensemble >= 1.0 && n_x >= 1.0 && local_resources >= 1.0)) {
    throw std::invalid_argument("complexity counts must be >= 1");
  }
  return {n_ensemble * n_x * local_resources, n_ensemble * n_x * std::log2(local_resources)};
}

void TheoryReport::add(std::string key, std::string value) {
  entries.emplace_back(std::move(key), std::move(value));
}

void TheoryReport::add(std::string key, double value) {
  add(std::move(key), fmt::format("{:.17g}", value));
}

const std::string* TheoryReport::find(const std::string& key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

TheoryReport make_theory_report(const CollisionModel& model, const GridSpec& grid) {
  validate(model);
  TheoryReport r;
  r.add("model", model_name(model));
  r.add("grid.n_sites", std::to_string(grid.n_sites()));
  r.add("grid.dx", grid.dx());
  r.add("grid.dt", grid.dt());
  r.add("grid.c", grid.c());
  r.add("alpha_eff", alpha_eff(model));

  if (!std::holds_alternative<TwoBit>(model)) {
    const auto printed = transport_coefficients(model, grid);
    const auto leading = leading_order_transport(model, grid);
    r.add("transport.c_s", printed.c_s);
    r.add("transport.nu", printed.nu);
    r.add("transport.leading_order.c_s", leading.c_s);
    r.add("transport.leading_order.nu", leading.nu);
  }
  if (const auto* q = std::get_if<Quantum>(&model)) {
    r.add("quantum.equilibrium_branch",
          to_string(quantum_equilibrium(1.2, q->theta, q->zeta, q->xi).branch));
  }

  for (double rho : {0.6, 1.0, 1.4}) {
    const auto key = fmt::format("rho_{:.1f}", rho);
    try {
      const auto d = equilibrium(model, rho);
      r.add(key + ".d_plus", d.d_plus);
      r.add(key + ".d_minus", d.d_minus);
      const auto j = jacobian(model, rho);
      r.add(key + ".J_plus", j.j_plus);
      r.add(key + ".J_minus", j.j_minus);
      r.add(key + ".lambda2", j.lambda2());
      const auto e = eft_coefficients(model, grid, rho);
      r.add(key + ".advection", e.advection);
      r.add(key + ".gradient_squared", e.gradient_squared);
      r.add(key + ".diffusion", e.diffusion);
      r.add(key + ".nu_local", -e.diffusion);
    } catch (const SingularityError& err) {
      r.add(key + ".singular", err.what());
    }
  }
  if (!std::holds_alternative<TwoBit>(model)) {
    // Local sound speed: advection(rho) ~ c_s (1 - rho) near rho = 1.
    const double h = 1e-4;
    const double c_s_local = -(eft_coefficients(model, grid, 1.0 + h).advection -
                               eft_coefficients(model, grid, 1.0 - h).advection) /
                             (2.0 * h);
    r.add("rho_1.0.c_s_local", c_s_local);
  }
  return r;
}

void write_theory_report(std::ostream& out, const TheoryReport& report) {
  for (const auto& [k, v] : report.entries) out << k << " = " << v << '\n';
}

void write_coefficient_table(std::ostream& out, const CollisionModel& model, const GridSpec& grid,
                             int n_samples) {
  if (n_samples < 2) throw std::invalid_argument("coefficient table needs >= 2 samples");
  out << "rho,d_plus,d_minus,J_plus,J_minus,adv_coeff,diff_coeff\n";
  for (int i = 0; i < n_samples; ++i) {
    const double rho = 0.05 + 1.9 * i / (n_samples - 1);
    const auto d = equilibrium(model, rho);
    const auto j = jacobian(model, rho);
    double adv = std::nan("");
    double diff = std::nan("");
    try {
      const auto e = eft_coefficients(model, grid, rho);
      adv = e.advection;
      diff = e.diffusion;
    } catch (const SingularityError&) {
    }
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", rho, d.d_plus,
                       d.d_minus, j.j_plus, j.j_minus, adv, diff);
  }
}

}  // namespace qlg
