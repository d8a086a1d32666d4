#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "wdens/basis.hpp"
#include "wdens/grid.hpp"

namespace wdens {

/// Left-endpoint Ito sum: sum_k phi_ell(t_k) * (path[k+1] - path[k]).
double ito_coefficient(const GridPath& path, const ProjectionBasis& basis, int ell);

/// Row j holds the first m Ito coefficients of sample[j].
Eigen::MatrixXd coefficient_matrix(const std::vector<GridPath>& sample,
                                   const ProjectionBasis& basis, int m);

/// Same, with a precomputed m x T table of basis values on the grid.
Eigen::MatrixXd coefficient_matrix(const std::vector<GridPath>& sample,
                                   const Eigen::MatrixXd& basis_values, const Grid& grid);

/// Sample second-moment matrix of a_l = (integral of psi_j' * Y_l dt)_j,
/// computed by trapezoid quadrature; exactly symmetric by construction.
Eigen::MatrixXd mhat(const std::vector<GridPath>& sample, const SineBasis& sine);

/// Population counterpart: same quadrature pipeline applied to an analytic
/// covariance kernel c(t, s) = E{Y(t) Y(s)} evaluated on the grid.
Eigen::MatrixXd mhat_from_kernel(const std::function<double(double, double)>& kernel,
                                 const SineBasis& sine, const Grid& grid);

/// Eigen-decomposition of mhat: rows sorted by descending eigenvalue, each
/// row's first nonzero component (tolerance 1e-12) made positive.
EstimatedBasis estimate_basis(const std::vector<GridPath>& sample, int M);

/// Same decomposition applied to an already-built symmetric matrix.
EstimatedBasis basis_from_matrix(const Eigen::MatrixXd& m_matrix);

}  // namespace wdens
