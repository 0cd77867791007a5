#ifndef QLG_COLLISION_HPP_
#define QLG_COLLISION_HPP_

#include <array>
#include <complex>
#include <iosfwd>
#include <string>
#include <variant>

#include "qlg/field.hpp"

namespace qlg {

// Boghosian-Levermore 3-bit gas: alpha is the occupation probability of the bias bit.
struct ClassicalBL {
  double alpha = 0.0;
};

// Degenerate 3-bit gas with the bias bit pinned to 1.
struct TwoBit {};

// 2-qubit gas; theta, zeta, xi are the Euler angles of the collision gate.
struct Quantum {
  double theta = 0.0;
  double zeta = 0.0;
  double xi = 0.0;
};

using CollisionModel = std::variant<ClassicalBL, TwoBit, Quantum>;

// Throws std::invalid_argument on alpha outside [0,1], non-finite angles or sin(theta) == 0.
void validate(const CollisionModel& model);

std::string model_name(const CollisionModel& model);

// Nonlinearity parameter: alpha for ClassicalBL, 1 for TwoBit, cot(theta) cos(zeta - xi) for Quantum.
double alpha_eff(const CollisionModel& model);

// Basis order |11>, |10>, |01>, |00>; the first qubit carries the plus particle.
struct UnitaryGate {
  std::array<std::array<std::complex<double>, 4>, 4> m{};

  static UnitaryGate identity();
  // Max-norm of U^dagger U - I.
  double unitarity_defect() const;
  std::complex<double> determinant() const;
};

UnitaryGate build_unitary(double theta, double zeta, double xi);
void print_gate(std::ostream& out, const UnitaryGate& gate);

// Probabilities may overshoot [0,1] by this much from rounding before inputs are rejected.
inline constexpr double kProbabilityTolerance = 1e-12;

double omega_classical(double p_plus, double p_minus, double alpha);
double omega_twobit(double p_plus, double p_minus);

// Encodes both qubits with real amplitudes, applies the gate and reads <n_1> - p_plus.
// Cross-checks <n_2> - p_minus = -Omega to 1e-12.
double omega_quantum_expect(double p_plus, double p_minus, const UnitaryGate& gate);

// sin^2(theta) (p_- - p_+) + sin(2 theta) cos(zeta - xi) sqrt(p_+(1-p_+) p_-(1-p_-)).
double omega_quantum_closed(double p_plus, double p_minus, double theta, double zeta, double xi);

double omega(const CollisionModel& model, double p_plus, double p_minus);

// Site-local plus += Omega, minus -= Omega. Aborts with ContractViolation if an input or a
// result leaves [-1e-12, 1 + 1e-12].
OccupancyField collide(const OccupancyField& field, const CollisionModel& model);

// One lattice-Boltzmann time step: stream(collide(field)).
OccupancyField step(const OccupancyField& field, const CollisionModel& model);

}  // namespace qlg

#endif  // QLG_COLLISION_HPP_
