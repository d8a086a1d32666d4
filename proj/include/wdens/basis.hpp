#pragma once

#include <Eigen/Dense>
#include <variant>
#include <vector>

#include "wdens/errors.hpp"
#include "wdens/grid.hpp"

namespace wdens {

/// Fourier sine family psi_j(t) = sqrt(2) sin(pi j t), j = 1..M.
/// psi_j(0) = psi_j(1) = 0, which the integration-by-parts step relies on.
struct SineBasis {
  int M;

  explicit SineBasis(int count) : M(count) {
    if (M < 1) throw invalid_parameter_error("SineBasis: M must be >= 1");
  }

  double eval(int j, double t) const;
  double eval_deriv(int j, double t) const;
};

/// Basis estimated from data: row ell-1 of `coeffs` holds the expansion of
/// phi_hat_ell over the sine family. Rows are orthonormal; eigenvalues sorted
/// in non-increasing order.
struct EstimatedBasis {
  int M = 0;
  Eigen::MatrixXd coeffs;             // M x M, row-major semantics (row = function)
  std::vector<double> eigenvalues;    // descending

  double eval(int ell, double t) const;
};

/// Either the analytic sine family or an estimated family.
class ProjectionBasis {
public:
  static ProjectionBasis sine(int M) { return ProjectionBasis(SineBasis(M)); }
  static ProjectionBasis estimated(EstimatedBasis b) { return ProjectionBasis(std::move(b)); }

  int size() const;
  double eval(int ell, double t) const;  // ell = 1..size()

  bool is_sine() const { return std::holds_alternative<SineBasis>(rep_); }
  const EstimatedBasis* estimated_rep() const { return std::get_if<EstimatedBasis>(&rep_); }

  /// Values phi_ell(t_k) for ell = 1..count as a count x T matrix.
  Eigen::MatrixXd values_on_grid(const Grid& grid, int count) const;

private:
  explicit ProjectionBasis(SineBasis b) : rep_(b) {}
  explicit ProjectionBasis(EstimatedBasis b) : rep_(std::move(b)) {}
  std::variant<SineBasis, EstimatedBasis> rep_;
};

}  // namespace wdens
