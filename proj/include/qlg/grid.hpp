#ifndef QLG_GRID_HPP_
#define QLG_GRID_HPP_

#include <cstddef>

namespace qlg {

// Periodic one-dimensional lattice. c = dx/dt is computed once and stored.
class GridSpec {
 public:
  GridSpec() : GridSpec(256, 1.0, 1.0) {}
  GridSpec(std::size_t n_sites, double dx, double dt);

  std::size_t n_sites() const noexcept { return n_sites_; }
  double dx() const noexcept { return dx_; }
  double dt() const noexcept { return dt_; }
  double c() const noexcept { return c_; }
  double length() const noexcept { return static_cast<double>(n_sites_) * dx_; }
  double x(std::size_t site) const noexcept { return static_cast<double>(site) * dx_; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  std::size_t n_sites_;
  double dx_;
  double dt_;
  double c_;
};

}  // namespace qlg

#endif  // QLG_GRID_HPP_
