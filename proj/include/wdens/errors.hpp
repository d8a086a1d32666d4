#pragma once

#include <stdexcept>
#include <string>

namespace wdens {

/// Bad argument values (non-finite sigma, empty sample, out-of-range beta, ...).
class invalid_parameter_error : public std::invalid_argument {
public:
  explicit invalid_parameter_error(const std::string& what)
      : std::invalid_argument(what) {}
};

/// An index set or table would exceed a configured size cap.
class capacity_error : public std::runtime_error {
public:
  capacity_error(const std::string& what, unsigned long long requested)
      : std::runtime_error(what), requested_count(requested) {}
  unsigned long long requested_count;
};

/// Numerical routine failed (eigensolver did not converge, ...).
class numerical_error : public std::runtime_error {
public:
  explicit numerical_error(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace wdens
