#ifndef QLG_ERRORS_HPP_
#define QLG_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace qlg {

// Malformed configuration or experiment specification.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// A numerical contract (probability range, conservation) was broken. Signals a bug, never clamped.
class ContractViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Coefficients or derivatives hit a singular point (e.g. vanishing relaxation eigenvalue).
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An explicit PDE step exceeds the stability bound.
class CflError : public std::runtime_error {
 public:
  CflError(const std::string& what, double admissible_dt)
      : std::runtime_error(what), admissible_dt_(admissible_dt) {}
  double admissible_dt() const noexcept { return admissible_dt_; }

 private:
  double admissible_dt_;
};

}  // namespace qlg

#endif  // QLG_ERRORS_HPP_
