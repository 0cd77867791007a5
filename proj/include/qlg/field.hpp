#ifndef QLG_FIELD_HPP_
#define QLG_FIELD_HPP_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "qlg/grid.hpp"

namespace qlg {

// Per-site density rho = p_plus + p_minus, each entry in [0, 2].
struct DensityProfile {
  std::vector<double> rho;

  std::size_t size() const noexcept { return rho.size(); }
  double mass() const;
};

// Occupation probabilities of the right-moving (plus) and left-moving (minus) particle.
struct OccupancyField {
  std::vector<double> plus;
  std::vector<double> minus;

  OccupancyField() = default;
  OccupancyField(std::vector<double> plus_in, std::vector<double> minus_in);
  static OccupancyField uniform(std::size_t n_sites, double p_plus, double p_minus);

  std::size_t size() const noexcept { return plus.size(); }
  double mass() const;

  friend bool operator==(const OccupancyField&, const OccupancyField&) = default;
};

// Throws ContractViolation when an entry leaves [-tol, 1 + tol].
void check_probabilities(const OccupancyField& field, double tol = 0.0);

// Shifts plus one site toward +x and minus one site toward -x, periodically.
// A pure index rotation: every value is moved, none is changed.
OccupancyField stream(const OccupancyField& field);

DensityProfile density(const OccupancyField& field);

// u_i = c (rho_i - 1).
std::vector<double> flow_velocity(const OccupancyField& field, const GridSpec& grid);

// Snapshot CSV: header `site,x,p_plus,p_minus,rho,u`, one row per site.
void write_snapshot_csv(std::ostream& out, const OccupancyField& field, const GridSpec& grid);
// Density-only snapshot (PDE output): p_plus = p_minus = rho/2.
void write_density_csv(std::ostream& out, const DensityProfile& profile, const GridSpec& grid);
OccupancyField read_snapshot_csv(std::istream& in);

}  // namespace qlg

#endif  // QLG_FIELD_HPP_
