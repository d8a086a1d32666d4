#pragma once

#include <string>
#include <vector>

#include "wdens/errors.hpp"

namespace wdens {

/// Shape family of the signal components phi_j.
enum class PhiFamily { Sine, CosineKappa, SineKappa };

/// Built-in simulation settings.
enum class Setting { I, II, III, IV, V, Custom };

/// Data-generating model: X(t) = sum_j sqrt(lambda_j) Z_j phi_j(t) with Z_j the
/// mean of two independent U[-0.1, 0.1] draws, observed as Y = X + sigma * W.
struct ModelSpec {
  Setting setting = Setting::Custom;
  int J = 0;
  double sigma = 0.1;
  std::vector<double> lambda;
  PhiFamily phi_family = PhiFamily::Sine;

  static ModelSpec builtin(Setting s);

  void validate() const;

  double phi(int j, double t) const;        // j = 1..J
  double phi_deriv(int j, double t) const;  // d/dt phi_j(t)
};

std::string to_string(Setting s);
Setting setting_from_string(const std::string& name);
std::string to_string(PhiFamily f);
PhiFamily phi_family_from_string(const std::string& name);

}  // namespace wdens
