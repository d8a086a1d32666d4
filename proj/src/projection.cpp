#include "wdens/projection.hpp"

#include <cmath>
#include <sstream>

namespace wdens {

double ito_coefficient(const GridPath& path, const ProjectionBasis& basis, int ell) {
  if (ell < 1 || ell > basis.size())
    throw std::out_of_range("ito_coefficient: basis index out of range");
  const Grid& g = path.grid;
  double s = 0.0;
  for (int k = 0; k + 1 < g.T; ++k)
    s += basis.eval(ell, g.t(k)) * (path.values[k + 1] - path.values[k]);
  return s;
}

Eigen::MatrixXd coefficient_matrix(const std::vector<GridPath>& sample,
                                   const Eigen::MatrixXd& basis_values, const Grid& grid) {
  const int n = static_cast<int>(sample.size());
  const int m = static_cast<int>(basis_values.rows());
  Eigen::MatrixXd out(n, m);
  for (int j = 0; j < n; ++j) {
    if (!(sample[j].grid == grid))
      throw invalid_parameter_error("coefficient_matrix: path grid mismatch");
    const auto& v = sample[j].values;
    for (int ell = 0; ell < m; ++ell) {
      double s = 0.0;
      for (int k = 0; k + 1 < grid.T; ++k)
        s += basis_values(ell, k) * (v[k + 1] - v[k]);
      out(j, ell) = s;
    }
  }
  return out;
}

Eigen::MatrixXd coefficient_matrix(const std::vector<GridPath>& sample,
                                   const ProjectionBasis& basis, int m) {
  if (m < 1 || m > basis.size())
    throw std::out_of_range("coefficient_matrix: m out of range for basis");
  if (sample.empty())
    throw invalid_parameter_error("coefficient_matrix: empty sample");
  const Grid grid = sample.front().grid;
  return coefficient_matrix(sample, basis.values_on_grid(grid, m), grid);
}

namespace {

// Trapezoid weights on the grid.
std::vector<double> trapezoid_weights(const Grid& g) {
  std::vector<double> w(g.T, g.dt());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

Eigen::MatrixXd sine_deriv_table(const SineBasis& sine, const Grid& g) {
  Eigen::MatrixXd d(sine.M, g.T);
  for (int j = 1; j <= sine.M; ++j)
    for (int k = 0; k < g.T; ++k) d(j - 1, k) = sine.eval_deriv(j, g.t(k));
  return d;
}

}  // namespace

Eigen::MatrixXd mhat(const std::vector<GridPath>& sample, const SineBasis& sine) {
  if (sample.empty()) throw invalid_parameter_error("mhat: empty sample");
  const Grid g = sample.front().grid;
  const auto w = trapezoid_weights(g);
  const Eigen::MatrixXd deriv = sine_deriv_table(sine, g);

  const int M = sine.M;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(M, M);
  Eigen::VectorXd a(M);
  for (const auto& path : sample) {
    if (!(path.grid == g)) throw invalid_parameter_error("mhat: path grid mismatch");
    for (int j = 0; j < M; ++j) {
      double s = 0.0;
      for (int k = 0; k < g.T; ++k) s += deriv(j, k) * path.values[k] * w[k];
      a(j) = s;
    }
    // a_i * a_j is written to both (i,j) and (j,i) from the same product, so
    // the result is symmetric to the last bit.
    for (int i = 0; i < M; ++i) {
      out(i, i) += a(i) * a(i);
      for (int j = i + 1; j < M; ++j) {
        const double p = a(i) * a(j);
        out(i, j) += p;
        out(j, i) = out(i, j);
      }
    }
  }
  out /= static_cast<double>(sample.size());
  for (int i = 0; i < M; ++i)
    for (int j = i + 1; j < M; ++j) out(j, i) = out(i, j);
  return out;
}

Eigen::MatrixXd mhat_from_kernel(const std::function<double(double, double)>& kernel,
                                 const SineBasis& sine, const Grid& g) {
  const auto w = trapezoid_weights(g);
  const Eigen::MatrixXd deriv = sine_deriv_table(sine, g);
  Eigen::MatrixXd cov(g.T, g.T);
  for (int a = 0; a < g.T; ++a)
    for (int b = 0; b < g.T; ++b) cov(a, b) = kernel(g.t(a), g.t(b)) * w[a] * w[b];
  Eigen::MatrixXd out = deriv * cov * deriv.transpose();
  // Symmetrize away quadrature round-off so downstream code sees one matrix class.
  out = 0.5 * (out + out.transpose()).eval();
  return out;
}

EstimatedBasis basis_from_matrix(const Eigen::MatrixXd& m_matrix) {
  const int M = static_cast<int>(m_matrix.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m_matrix);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "estimate_basis: eigensolver failed for M=" << M
        << " matrix, |max entry|=" << m_matrix.cwiseAbs().maxCoeff();
    throw numerical_error(msg.str());
  }

  EstimatedBasis basis;
  basis.M = M;
  basis.coeffs.resize(M, M);
  basis.eigenvalues.resize(M);
  // Eigen returns ascending order; emit descending.
  for (int ell = 0; ell < M; ++ell) {
    const int src = M - 1 - ell;
    basis.eigenvalues[ell] = solver.eigenvalues()(src);
    Eigen::VectorXd v = solver.eigenvectors().col(src);
    for (int j = 0; j < M; ++j) {
      if (std::abs(v(j)) > 1e-12) {
        if (v(j) < 0.0) v = -v;
        break;
      }
    }
    basis.coeffs.row(ell) = v.transpose();
  }
  return basis;
}

EstimatedBasis estimate_basis(const std::vector<GridPath>& sample, int M) {
  if (M < 1) throw invalid_parameter_error("estimate_basis: M must be >= 1");
  return basis_from_matrix(mhat(sample, SineBasis(M)));
}

}  // namespace wdens
