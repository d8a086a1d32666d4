// Shared test-only oracles: Gauss-Hermite quadrature, the derivative-form
// Hermite polynomials, and small statistics helpers. Everything here is kept
// independent of the library's evaluation paths so it can serve as a check on
// them.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <vector>

namespace testsupport {

struct GaussHermite {
  std::vector<double> nodes;    // for weight exp(-x^2)
  std::vector<double> weights;
};

// Golub-Welsch on the physicists' Hermite recurrence: off-diagonals sqrt(k/2),
// total mass sqrt(pi).
inline GaussHermite gauss_hermite(int n) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = std::sqrt(k / 2.0);
    jac(k, k - 1) = b;
    jac(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jac);
  GaussHermite gh;
  gh.nodes.resize(n);
  gh.weights.resize(n);
  const double mu0 = std::sqrt(M_PI);
  for (int i = 0; i < n; ++i) {
    gh.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    gh.weights[i] = mu0 * v0 * v0;
  }
  return gh;
}

// Integral of f against the standard normal density, via substitution
// x = sqrt(2) u into the exp(-u^2) rule.
template <typename F>
double gaussian_integral(const GaussHermite& gh, const F& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i)
    s += gh.weights[i] * f(std::sqrt(2.0) * gh.nodes[i]);
  return s / std::sqrt(M_PI);
}

// Monomial coefficients of p_k with phi^(k)(x) = p_k(x) phi(x), built by
// repeated symbolic differentiation: p_{k+1} = p_k' - x p_k. Then
// (-1)^k phi^(k)/(phi sqrt(k!)) = (-1)^k p_k / sqrt(k!).
inline std::vector<double> hermite_from_derivatives(int k) {
  std::vector<double> p{1.0};
  for (int j = 0; j < k; ++j) {
    std::vector<double> next(p.size() + 1, 0.0);
    for (std::size_t i = 1; i < p.size(); ++i) next[i - 1] += i * p[i];  // p'
    for (std::size_t i = 0; i < p.size(); ++i) next[i + 1] -= p[i];      // -x p
    p = std::move(next);
  }
  double fact = 1.0;
  for (int j = 2; j <= k; ++j) fact *= j;
  const double scale = (k % 2 == 0 ? 1.0 : -1.0) / std::sqrt(fact);
  for (double& c : p) c *= scale;
  return p;
}

inline double eval_poly(const std::vector<double>& coeffs, double x) {
  double v = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) v = v * x + coeffs[i];
  return v;
}

inline double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

inline double sample_variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / (v.size() - 1);
}

// Standard error of the sample mean.
inline double se_of_mean(const std::vector<double>& v) {
  return std::sqrt(sample_variance(v) / v.size());
}

}  // namespace testsupport
