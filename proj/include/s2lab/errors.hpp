#pragma once

#include <stdexcept>
#include <string>

namespace s2lab {

/// Raised when an operation is called outside its mathematical domain
/// (index out of range, cone order outside (-1, 0], evaluation at a
/// singular point, level value outside the profile range, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised by the radial integrator. Carries the last accepted state so a
/// caller can report how far the integration got.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t, double h, double dh)
      : std::runtime_error(what), t_(t), h_(h), dh_(dh) {}

  double t() const noexcept { return t_; }
  double h() const noexcept { return h_; }
  double dh() const noexcept { return dh_; }

 private:
  double t_;
  double h_;
  double dh_;
};

}  // namespace s2lab
