#include "qlg/collision.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "qlg/errors.hpp"

namespace qlg {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void require_probability(double p, const char* name) {
  if (!(p >= -kProbabilityTolerance && p <= 1.0 + kProbabilityTolerance)) {
    throw std::invalid_argument(fmt::format("{} = {} outside [0,1]", name, p));
  }
}

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

// sqrt(p+(1-p+)p-(1-p-)) with rounding overshoot of the inputs absorbed.
double entanglement_factor(double p_plus, double p_minus) {
  const double a = clamp01(p_plus);
  const double b = clamp01(p_minus);
  return std::sqrt(a * (1.0 - a) * b * (1.0 - b));
}

}  // namespace

void validate(const CollisionModel& model) {
  std::visit(Overloaded{
                 [](const ClassicalBL& m) {
                   if (!(m.alpha >= 0.0 && m.alpha <= 1.0)) {
                     throw std::invalid_argument(
                         fmt::format("model.alpha = {} outside [0,1]", m.alpha));
                   }
                 },
                 [](const TwoBit&) {},
                 [](const Quantum& m) {
                   if (!std::isfinite(m.theta) || !std::isfinite(m.zeta) ||
                       !std::isfinite(m.xi)) {
                     throw std::invalid_argument("model angles must be finite");
                   }
                   if (std::abs(std::sin(m.theta)) < 1e-12) {
                     throw std::invalid_argument("model.theta must not be a multiple of pi");
                   }
                 },
             },
             model);
}

std::string model_name(const CollisionModel& model) {
  return std::visit(Overloaded{
                        [](const ClassicalBL& m) { return fmt::format("classical(alpha={})", m.alpha); },
                        [](const TwoBit&) { return std::string("twobit"); },
                        [](const Quantum& m) {
                          return fmt::format("quantum(theta={},zeta={},xi={})", m.theta, m.zeta,
                                             m.xi);
                        },
                    },
                    model);
}

double alpha_eff(const CollisionModel& model) {
  return std::visit(Overloaded{
                        [](const ClassicalBL& m) { return m.alpha; },
                        [](const TwoBit&) { return 1.0; },
                        [](const Quantum& m) {
                          return std::cos(m.theta) / std::sin(m.theta) * std::cos(m.zeta - m.xi);
                        },
                    },
                    model);
}

UnitaryGate UnitaryGate::identity() {
  UnitaryGate g;
  for (int i = 0; i < 4; ++i) g.m[i][i] = 1.0;
  return g;
}

double UnitaryGate::unitarity_defect() const {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      std::complex<double> sum = 0.0;
      for (int k = 0; k < 4; ++k) sum += std::conj(m[k][i]) * m[k][j];
      worst = std::max(worst, std::abs(sum - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

std::complex<double> UnitaryGate::determinant() const {
  // Laplace expansion along the first row of 3x3 minors.
  auto det3 = [this](int skip_col) {
    int c[3];
    for (int j = 0, k = 0; j < 4; ++j) {
      if (j != skip_col) c[k++] = j;
    }
    const auto& a = m;
    return a[1][c[0]] * (a[2][c[1]] * a[3][c[2]] - a[2][c[2]] * a[3][c[1]]) -
           a[1][c[1]] * (a[2][c[0]] * a[3][c[2]] - a[2][c[2]] * a[3][c[0]]) +
           a[1][c[2]] * (a[2][c[0]] * a[3][c[1]] - a[2][c[1]] * a[3][c[0]]);
  };
  std::complex<double> det = 0.0;
  for (int j = 0; j < 4; ++j) det += (j % 2 == 0 ? 1.0 : -1.0) * m[0][j] * det3(j);
  return det;
}

UnitaryGate build_unitary(double theta, double zeta, double xi) {
  using std::polar;
  UnitaryGate g = UnitaryGate::identity();
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  g.m[1][1] = polar(1.0, xi) * c;
  g.m[1][2] = polar(1.0, zeta) * s;
  g.m[2][1] = -polar(1.0, -zeta) * s;
  g.m[2][2] = polar(1.0, -xi) * c;
  return g;
}

void print_gate(std::ostream& out, const UnitaryGate& gate) {
  static constexpr const char* kLabels[] = {"|11>", "|10>", "|01>", "|00>"};
  for (int i = 0; i < 4; ++i) {
    out << kLabels[i];
    for (int j = 0; j < 4; ++j) {
      out << fmt::format("  {:+.6f}{:+.6f}i", gate.m[i][j].real(), gate.m[i][j].imag());
    }
    out << '\n';
  }
}

double omega_classical(double p_plus, double p_minus, double alpha) {
  require_probability(p_plus, "p_plus");
  require_probability(p_minus, "p_minus");
  require_probability(alpha, "alpha");
  return 0.5 * (p_minus - p_plus) + 0.5 * alpha * (p_plus + p_minus - 2.0 * p_plus * p_minus);
}

double omega_twobit(double p_plus, double p_minus) {
  require_probability(p_plus, "p_plus");
  require_probability(p_minus, "p_minus");
  return (1.0 - p_plus) * p_minus;
}

double omega_quantum_expect(double p_plus, double p_minus, const UnitaryGate& gate) {
  require_probability(p_plus, "p_plus");
  require_probability(p_minus, "p_minus");
  if (gate.unitarity_defect() > 1e-12) throw std::invalid_argument("gate is not unitary");

  const double a = clamp01(p_plus);
  const double b = clamp01(p_minus);
  const std::array<double, 4> psi{std::sqrt(a * b), std::sqrt(a * (1.0 - b)),
                                  std::sqrt((1.0 - a) * b), std::sqrt((1.0 - a) * (1.0 - b))};
  std::array<double, 4> prob{};
  for (int i = 0; i < 4; ++i) {
    std::complex<double> amp = 0.0;
    for (int j = 0; j < 4; ++j) amp += gate.m[i][j] * psi[j];
    prob[i] = std::norm(amp);
  }
  const double n1 = prob[0] + prob[1];
  const double n2 = prob[0] + prob[2];
  const double result = n1 - p_plus;
  if (std::abs((n2 - p_minus) + result) > 1e-12) {
    throw ContractViolation(
        fmt::format("gate does not conserve particle number: dn1 = {}, dn2 = {}", result,
                    n2 - p_minus));
  }
  return result;
}

double omega_quantum_closed(double p_plus, double p_minus, double theta, double zeta, double xi) {
  require_probability(p_plus, "p_plus");
  require_probability(p_minus, "p_minus");
  const double s = std::sin(theta);
  return s * s * (p_minus - p_plus) +
         std::sin(2.0 * theta) * std::cos(zeta - xi) * entanglement_factor(p_plus, p_minus);
}

double omega(const CollisionModel& model, double p_plus, double p_minus) {
  return std::visit(
      Overloaded{
          [&](const ClassicalBL& m) { return omega_classical(p_plus, p_minus, m.alpha); },
          [&](const TwoBit&) { return omega_twobit(p_plus, p_minus); },
          [&](const Quantum& m) {
            return omega_quantum_closed(p_plus, p_minus, m.theta, m.zeta, m.xi);
          },
      },
      model);
}

OccupancyField collide(const OccupancyField& field, const CollisionModel& model) {
  check_probabilities(field, kProbabilityTolerance);
  OccupancyField out = field;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double w = omega(model, field.plus[i], field.minus[i]);
    out.plus[i] = field.plus[i] + w;
    out.minus[i] = field.minus[i] - w;
    for (double p : {out.plus[i], out.minus[i]}) {
      if (!(p >= -kProbabilityTolerance && p <= 1.0 + kProbabilityTolerance)) {
        throw ContractViolation(fmt::format(
            "collision of {} at site {} produced probability {} from ({}, {})",
            model_name(model), i, p, field.plus[i], field.minus[i]));
      }
    }
  }
  return out;
}

OccupancyField step(const OccupancyField& field, const CollisionModel& model) {
  return stream(collide(field, model));
}

}  // namespace qlg
