#pragma once

#include <functional>
#include <random>
#include <vector>

#include "wdens/grid.hpp"
#include "wdens/model.hpp"
#include "wdens/rng.hpp"

namespace wdens {

/// Scaled Wiener path: values[0] = 0, increments i.i.d. N(0, sigma^2 * dt).
GridPath simulate_wiener(const Grid& grid, double sigma, std::mt19937_64& rng);

struct Sample {
  std::vector<GridPath> y;  // observed, fed to estimators
  std::vector<GridPath> x;  // latent signal, kept for oracle evaluation only
};

/// Draws n paths from the model. Path i consumes its own substream rng.stream(i).
Sample simulate_sample(const ModelSpec& model, int n, const Grid& grid,
                       const RngFactory& rng);

/// Latent signal only (no noise); used by oracles and tests.
GridPath simulate_signal(const ModelSpec& model, const Grid& grid, std::mt19937_64& rng);

/// Coefficients Z_j of one signal draw (mean of two U[-0.1,0.1] per component).
std::vector<double> draw_signal_coeffs(const ModelSpec& model, std::mt19937_64& rng);

/// X - X(0) on the grid. Inputs are raw values (they need not start at zero;
/// producing a zero start is what pre-masking is for).
GridPath premask_subtract_start(const Grid& grid, const std::vector<double>& values);

/// Pointwise X * w; requires w(0) = 0 and w(1) = 1.
GridPath premask_weight(const Grid& grid, const std::vector<double>& values,
                        const std::function<double(double)>& w);

}  // namespace wdens
