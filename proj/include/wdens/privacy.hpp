#pragma once

#include <cmath>

#include "wdens/errors.hpp"

namespace wdens {

/// (alpha, beta)-privacy budget plus the derivative-norm bound on the signals.
struct PrivacyBudget {
  double alpha;  // > 0
  double beta;   // in (0, 2]
  double c_x1;   // > 0, bound on ||X'||_2

  void validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
      throw invalid_parameter_error("PrivacyBudget: alpha must be finite and > 0");
    if (!(beta > 0.0) || beta > 2.0 || !std::isfinite(beta))
      throw invalid_parameter_error("PrivacyBudget: beta must lie in (0, 2]");
    if (!(c_x1 > 0.0) || !std::isfinite(c_x1))
      throw invalid_parameter_error("PrivacyBudget: c_x1 must be finite and > 0");
  }
};

/// Infimum noise scale 2 * C_{X,1} * sqrt(2 * ln(2/beta)) / alpha. Any sigma
/// strictly above this value privatizes the observations; the bound itself
/// does not.
inline double min_privacy_sigma(const PrivacyBudget& b) {
  b.validate();
  return 2.0 * b.c_x1 * std::sqrt(2.0 * std::log(2.0 / b.beta)) / b.alpha;
}

}  // namespace wdens
