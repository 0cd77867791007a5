#ifndef QLG_THEORY_HPP_
#define QLG_THEORY_HPP_

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "qlg/collision.hpp"
#include "qlg/grid.hpp"

namespace qlg {

struct Equilibrium {
  double d_plus = 0.0;
  double d_minus = 0.0;

  double flux() const noexcept { return d_plus - d_minus; }
};

// Which closed form of the quantum equilibrium survived the residual check.
enum class EquilibriumBranch {
  printed_sign,  // d_pm = rho/2 -+ offset/2, as usually written
  flipped_sign,  // d_pm = rho/2 +- offset/2
  bisection,     // neither closed form passed; the bracketed root is used
};

std::string to_string(EquilibriumBranch branch);

struct QuantumEquilibrium {
  Equilibrium value;
  EquilibriumBranch branch = EquilibriumBranch::printed_sign;
  double bisection_d_plus = 0.0;  // independent root on p_+ + p_- = rho
};

// Exact root of alpha A^2 - A + (alpha rho / 2)(1 - rho / 2) = 0 continuous with A -> 0 as
// alpha -> 0; d_pm = rho/2 +- A. Valid for rho in [0,2], alpha in [0,1].
Equilibrium classical_equilibrium(double rho, double alpha);
// Leading-order form A = alpha (rho/2)(1 - rho/2); residual O(alpha^3).
Equilibrium classical_equilibrium_leading_order(double rho, double alpha);

// Fermi-Dirac equilibrium of the 2-qubit gas, root-verified against bisection of Omega along
// p_+ + p_- = rho. Requires rho in (0,2) and sin(theta) != 0.
QuantumEquilibrium quantum_equilibrium(double rho, double theta, double zeta, double xi);

// Exact piecewise equilibrium of Omega = (1 - p_+) p_-: (rho, 0) for rho <= 1, (1, rho - 1) above.
Equilibrium twobit_equilibrium(double rho);

Equilibrium equilibrium(const CollisionModel& model, double rho);

// d/drho (d_+ - d_-) at the equilibrium, analytic for all three models.
double equilibrium_flux_slope(const CollisionModel& model, double rho);

struct JacobianPair {
  double j_plus = 0.0;
  double j_minus = 0.0;

  double lambda2() const noexcept { return j_plus - j_minus; }
};

// Analytic dOmega/dp_pm at the equilibrium for density rho.
JacobianPair jacobian(const CollisionModel& model, double rho);

using Vec2 = std::array<double, 2>;
using Matrix2 = std::array<Vec2, 2>;

// [[J+, J-], [-J+, -J-]].
Matrix2 jacobian_matrix(const JacobianPair& j);
Matrix2 multiply(const Matrix2& a, const Matrix2& b);

struct SpectralData {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  Vec2 left1{}, right1{};
  Vec2 left2{}, right2{};
  Matrix2 generalized_inverse{};  // (1/lambda2) |xi_2><xi_2|
};

// Throws SingularityError when lambda2 vanishes.
SpectralData spectral(const Matrix2& j);

struct TransportCoefficients {
  double c_s = 0.0;
  double nu = 0.0;
};

// Burgers coefficients as usually quoted: classical (c alpha, dx^2/(2 dt)); quantum
// (c cot(theta) cos(zeta - xi), cot^2(theta) dx^2/dt). The two-bit gas has none (throws).
TransportCoefficients transport_coefficients(const CollisionModel& model, const GridSpec& grid);

// Small-alpha limit of the general coefficients below: nu = (dx^2/dt)(-1/lambda2 - 1/2) with
// the alpha -> 0 relaxation eigenvalue. Quantum: nu = cot^2(theta) dx^2 / (2 dt).
TransportCoefficients leading_order_transport(const CollisionModel& model, const GridSpec& grid);

// Coefficient functions of the general two-speed macroscopic equation
//   d_t rho + advection d_x rho + gradient_squared (d_x rho)^2 + diffusion d_x^2 rho = 0.
// The sign carried by the gradient-squared term when integrating is chosen in PdeSpec.
struct EftCoefficients {
  double flux = 0.0;
  double advection = 0.0;         // c d/drho (d_+ - d_-)
  double gradient_squared = 0.0;  // (dx^2/dt) lambda2'(rho) / lambda2^2
  double diffusion = 0.0;         // (dx^2 / 2dt)(2/lambda2 + 1)
  double lambda2 = 0.0;
};

// Throws SingularityError where lambda2 vanishes (two-bit gas at rho = 1).
EftCoefficients eft_coefficients(const CollisionModel& model, const GridSpec& grid, double rho);

// f in lambda2 = -2 sin^2(theta) (1 + alpha^2 f) for the quantum gas.
double quantum_f_factor(const Quantum& model, double rho);

struct TurbulenceScales {
  double L = 0.0;
  double u_L = 0.0;
  double nu = 0.0;
  double epsilon = 0.0;   // u_L^3 / L
  double lambda = 0.0;    // (nu^3 / epsilon)^(1/4)
  double u_lambda = 0.0;  // (nu epsilon)^(1/4)
  double Re = 0.0;        // L u_L / nu
  double M = 0.0;         // u_L / c
  double n_x_required = 0.0;      // Re^(3/4)
  double n_required_lower = 0.0;  // Re^(1/2) / M^2
};

TurbulenceScales turbulence_scales(double L, double u_L, double nu, double c);

struct Complexity {
  double classical = 0.0;      // N N_x rho_local
  double quantum_lower = 0.0;  // N N_x log2(rho_local)
};

Complexity complexity(double n_ensemble, double n_x, double local_resources);

// Bits per node the classical gas needs, qubits per node the quantum gas needs.
inline constexpr int kClassicalBitsPerNode = 3;
inline constexpr int kQuantumQubitsPerNode = 2;

struct TheoryReport {
  std::vector<std::pair<std::string, std::string>> entries;

  void add(std::string key, std::string value);
  void add(std::string key, double value);
  const std::string* find(const std::string& key) const;
};

TheoryReport make_theory_report(const CollisionModel& model, const GridSpec& grid);
// `key = value` lines.
void write_theory_report(std::ostream& out, const TheoryReport& report);
// CSV `rho,d_plus,d_minus,J_plus,J_minus,adv_coeff,diff_coeff` sampled on (0,2).
void write_coefficient_table(std::ostream& out, const CollisionModel& model, const GridSpec& grid,
                             int n_samples);

}  // namespace qlg

#endif  // QLG_THEORY_HPP_
