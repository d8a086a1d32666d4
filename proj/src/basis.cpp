#include "wdens/basis.hpp"

#include <cmath>

namespace wdens {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;
}  // namespace

double SineBasis::eval(int j, double t) const {
  if (j < 1 || j > M) throw std::out_of_range("SineBasis: index out of range");
  return kSqrt2 * std::sin(kPi * j * t);
}

double SineBasis::eval_deriv(int j, double t) const {
  if (j < 1 || j > M) throw std::out_of_range("SineBasis: index out of range");
  return kSqrt2 * kPi * j * std::cos(kPi * j * t);
}

double EstimatedBasis::eval(int ell, double t) const {
  if (ell < 1 || ell > M) throw std::out_of_range("EstimatedBasis: index out of range");
  double v = 0.0;
  for (int j = 1; j <= M; ++j)
    v += coeffs(ell - 1, j - 1) * kSqrt2 * std::sin(kPi * j * t);
  return v;
}

int ProjectionBasis::size() const {
  if (const auto* s = std::get_if<SineBasis>(&rep_)) return s->M;
  return std::get<EstimatedBasis>(rep_).M;
}

double ProjectionBasis::eval(int ell, double t) const {
  if (const auto* s = std::get_if<SineBasis>(&rep_)) return s->eval(ell, t);
  return std::get<EstimatedBasis>(rep_).eval(ell, t);
}

Eigen::MatrixXd ProjectionBasis::values_on_grid(const Grid& grid, int count) const {
  if (count < 1 || count > size())
    throw std::out_of_range("ProjectionBasis: requested more functions than available");
  if (const auto* est = std::get_if<EstimatedBasis>(&rep_)) {
    // phi_hat values = coeff rows times sine values; one pass over the sine table.
    Eigen::MatrixXd sine_vals(est->M, grid.T);
    for (int j = 1; j <= est->M; ++j)
      for (int k = 0; k < grid.T; ++k)
        sine_vals(j - 1, k) = kSqrt2 * std::sin(kPi * j * grid.t(k));
    return est->coeffs.topRows(count) * sine_vals;
  }
  Eigen::MatrixXd vals(count, grid.T);
  for (int ell = 1; ell <= count; ++ell)
    for (int k = 0; k < grid.T; ++k)
      vals(ell - 1, k) = kSqrt2 * std::sin(kPi * ell * grid.t(k));
  return vals;
}

}  // namespace wdens
