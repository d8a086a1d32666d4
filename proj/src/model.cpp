#include "wdens/model.hpp"

#include <cmath>

namespace wdens {

namespace {

constexpr double kPi = 3.14159265358979323846;

double kappa(double t) {
  const double e = std::exp(10.0 * t);
  return 2.0 * e / (1.0 + e) - 1.0;
}

double kappa_deriv(double t) {
  const double e = std::exp(10.0 * t);
  const double d = 1.0 + e;
  return 20.0 * e / (d * d);
}

std::vector<double> exp_decay_lambda(int J) {
  std::vector<double> l(J);
  for (int j = 1; j <= J; ++j) l[j - 1] = std::exp(-static_cast<double>(j));
  return l;
}

}  // namespace

ModelSpec ModelSpec::builtin(Setting s) {
  ModelSpec m;
  m.setting = s;
  switch (s) {
    case Setting::I:
      m.J = 20; m.sigma = 0.1; m.phi_family = PhiFamily::Sine;
      break;
    case Setting::II:
      m.J = 40; m.sigma = 0.1; m.phi_family = PhiFamily::Sine;
      break;
    case Setting::III:
      m.J = 40; m.sigma = 0.075; m.phi_family = PhiFamily::Sine;
      break;
    case Setting::IV:
      m.J = 20; m.sigma = 0.075; m.phi_family = PhiFamily::CosineKappa;
      break;
    case Setting::V:
      m.J = 20; m.sigma = 0.075; m.phi_family = PhiFamily::SineKappa;
      break;
    case Setting::Custom:
      throw invalid_parameter_error("Custom is not a built-in setting");
  }
  m.lambda = exp_decay_lambda(m.J);
  return m;
}

void ModelSpec::validate() const {
  if (J < 0) throw invalid_parameter_error("ModelSpec: J must be >= 0");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw invalid_parameter_error("ModelSpec: sigma must be finite and > 0");
  if (static_cast<int>(lambda.size()) != J)
    throw invalid_parameter_error("ModelSpec: lambda size must equal J");
  for (double l : lambda)
    if (!(l >= 0.0) || !std::isfinite(l))
      throw invalid_parameter_error("ModelSpec: lambda entries must be finite and >= 0");
}

double ModelSpec::phi(int j, double t) const {
  const double s = std::sqrt(2.0);
  switch (phi_family) {
    case PhiFamily::Sine:        return s * std::sin(kPi * j * t);
    case PhiFamily::CosineKappa: return s * std::cos(kPi * j * t) * kappa(t);
    case PhiFamily::SineKappa:   return s * std::sin(kPi * j * t) * kappa(t);
  }
  return 0.0;
}

double ModelSpec::phi_deriv(int j, double t) const {
  const double s = std::sqrt(2.0);
  const double w = kPi * j;
  switch (phi_family) {
    case PhiFamily::Sine:
      return s * w * std::cos(w * t);
    case PhiFamily::CosineKappa:
      return -s * w * std::sin(w * t) * kappa(t) + s * std::cos(w * t) * kappa_deriv(t);
    case PhiFamily::SineKappa:
      return s * w * std::cos(w * t) * kappa(t) + s * std::sin(w * t) * kappa_deriv(t);
  }
  return 0.0;
}

std::string to_string(Setting s) {
  switch (s) {
    case Setting::I: return "i";
    case Setting::II: return "ii";
    case Setting::III: return "iii";
    case Setting::IV: return "iv";
    case Setting::V: return "v";
    case Setting::Custom: return "custom";
  }
  return "custom";
}

Setting setting_from_string(const std::string& name) {
  if (name == "i") return Setting::I;
  if (name == "ii") return Setting::II;
  if (name == "iii") return Setting::III;
  if (name == "iv") return Setting::IV;
  if (name == "v") return Setting::V;
  if (name == "custom") return Setting::Custom;
  throw invalid_parameter_error("unknown setting: " + name);
}

std::string to_string(PhiFamily f) {
  switch (f) {
    case PhiFamily::Sine: return "sine";
    case PhiFamily::CosineKappa: return "cosine-kappa";
    case PhiFamily::SineKappa: return "sine-kappa";
  }
  return "sine";
}

PhiFamily phi_family_from_string(const std::string& name) {
  if (name == "sine") return PhiFamily::Sine;
  if (name == "cosine-kappa") return PhiFamily::CosineKappa;
  if (name == "sine-kappa") return PhiFamily::SineKappa;
  throw invalid_parameter_error("unknown phi family: " + name);
}

}  // namespace wdens
