#pragma once

#include <variant>
#include <vector>

#include "wdens/basis.hpp"
#include "wdens/grid.hpp"
#include "wdens/model.hpp"
#include "wdens/rng.hpp"

namespace wdens {

/// A signal path together with its derivative on the grid (the derivative is
/// supplied analytically; it is never obtained by differencing).
struct PathWithDeriv {
  GridPath x;
  std::vector<double> deriv;  // X'(t_k), k = 0..T-1
};

struct PointMassLaw {
  PathWithDeriv atom;
};

struct FiniteMixtureLaw {
  std::vector<double> weights;  // positive, summing to 1 within 1e-12
  std::vector<PathWithDeriv> atoms;
};

struct SimModelLaw {
  ModelSpec model;
  Grid grid{101};
  int mc_draws = 100000;  // R
};

using KnownSignalLaw = std::variant<PointMassLaw, FiniteMixtureLaw, SimModelLaw>;

void validate_law(const KnownSignalLaw& law, const Grid& grid);

/// Girsanov exponent of one signal draw against path v:
/// sigma^-2 sum_k X'(t_k) (v_{k+1} - v_k) - (2 sigma^2)^-1 sum_k X'(t_k)^2 dt.
double girsanov_exponent(const std::vector<double>& deriv, const GridPath& v, double sigma);

struct McValue {
  double value;
  double std_error;  // 0 for exact (finite-sum) laws
};

/// Density of Y = X + sigma W against the sigma-scaled Wiener measure at v.
/// Exact finite sum for point masses and mixtures; seeded Monte Carlo with R
/// fresh draws for simulation models.
McValue true_density(const KnownSignalLaw& law, const GridPath& v, double sigma,
                     const RngFactory& rng);

/// Batch evaluation. For simulation models one bank of R draws is shared by
/// all points, which makes the per-point cost independent of R's setup work;
/// values stay unbiased, only their Monte-Carlo errors become correlated.
std::vector<McValue> true_density_batch(const KnownSignalLaw& law,
                                        const std::vector<GridPath>& points, double sigma,
                                        const RngFactory& rng);

/// m-term approximation: E exp(sigma^-2 sum_j b_j s_j - (2 sigma^2)^-1 sum_j b_j^2)
/// with b_j the Ito projection of each atom onto the basis.
McValue sieve_density(const KnownSignalLaw& law, const ProjectionBasis& basis,
                      const std::vector<double>& s, double sigma, const RngFactory& rng);

struct Quartiles {
  double median;
  double q1;
  double q3;
};

/// Quartiles of the per-point squared errors (linear-interpolation quantiles).
Quartiles squared_error_summary(const std::vector<double>& estimates,
                                const std::vector<double>& truths);

/// Linear-interpolation quantile of arbitrary data (p in [0, 1]).
double quantile(std::vector<double> values, double p);

/// Mean of (a_i - b_i)^2; the integrated-squared-difference statistic body.
double mean_squared_difference(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace wdens
