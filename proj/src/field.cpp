#include "qlg/field.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "qlg/errors.hpp"

namespace qlg {

double DensityProfile::mass() const { return std::accumulate(rho.begin(), rho.end(), 0.0); }

OccupancyField::OccupancyField(std::vector<double> plus_in, std::vector<double> minus_in)
    : plus(std::move(plus_in)), minus(std::move(minus_in)) {
  if (plus.size() != minus.size()) {
    throw std::invalid_argument("occupancy components differ in length");
  }
}

OccupancyField OccupancyField::uniform(std::size_t n_sites, double p_plus, double p_minus) {
  return {std::vector<double>(n_sites, p_plus), std::vector<double>(n_sites, p_minus)};
}

double OccupancyField::mass() const {
  return std::accumulate(plus.begin(), plus.end(), 0.0) +
         std::accumulate(minus.begin(), minus.end(), 0.0);
}

void check_probabilities(const OccupancyField& field, double tol) {
  for (std::size_t i = 0; i < field.size(); ++i) {
    for (double p : {field.plus[i], field.minus[i]}) {
      if (!(p >= -tol && p <= 1.0 + tol)) {
        throw ContractViolation(fmt::format("probability {} at site {} outside [0,1]", p, i));
      }
    }
  }
}

OccupancyField stream(const OccupancyField& field) {
  const auto n = field.size();
  OccupancyField out;
  out.plus.resize(n);
  out.minus.resize(n);
  if (n == 0) return out;
  std::rotate_copy(field.plus.begin(), field.plus.end() - 1, field.plus.end(), out.plus.begin());
  std::rotate_copy(field.minus.begin(), field.minus.begin() + 1, field.minus.end(),
                   out.minus.begin());
  return out;
}

DensityProfile density(const OccupancyField& field) {
  DensityProfile out;
  out.rho.resize(field.size());
  std::transform(field.plus.begin(), field.plus.end(), field.minus.begin(), out.rho.begin(),
                 std::plus<>{});
  return out;
}

std::vector<double> flow_velocity(const OccupancyField& field, const GridSpec& grid) {
  const auto rho = density(field).rho;
  std::vector<double> u(rho.size());
  std::transform(rho.begin(), rho.end(), u.begin(),
                 [c = grid.c()](double r) { return c * (r - 1.0); });
  return u;
}

void write_snapshot_csv(std::ostream& out, const OccupancyField& field, const GridSpec& grid) {
  out << "site,x,p_plus,p_minus,rho,u\n";
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double rho = field.plus[i] + field.minus[i];
    out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", i, grid.x(i),
                       field.plus[i], field.minus[i], rho, grid.c() * (rho - 1.0));
  }
}

void write_density_csv(std::ostream& out, const DensityProfile& profile, const GridSpec& grid) {
  OccupancyField split;
  split.plus.resize(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) split.plus[i] = 0.5 * profile.rho[i];
  split.minus = split.plus;
  write_snapshot_csv(out, split, grid);
}

OccupancyField read_snapshot_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("site,x,p_plus,p_minus", 0) != 0) {
    throw std::runtime_error("snapshot: missing header");
  }
  OccupancyField field;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
    if (values.size() != 6) throw std::runtime_error("snapshot: malformed row `" + line + "`");
    if (static_cast<std::size_t>(values[0]) != field.size()) {
      throw std::runtime_error("snapshot: sites out of order");
    }
    field.plus.push_back(values[2]);
    field.minus.push_back(values[3]);
  }
  return field;
}

}  // namespace qlg
