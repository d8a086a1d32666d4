#include "wdens/simulate.hpp"

#include <cmath>

namespace wdens {

GridPath simulate_wiener(const Grid& grid, double sigma, std::mt19937_64& rng) {
  if (!std::isfinite(sigma) || sigma < 0.0)
    throw invalid_parameter_error("simulate_wiener: sigma must be finite and >= 0");
  std::vector<double> v(grid.T, 0.0);
  if (sigma > 0.0) {
    std::normal_distribution<double> inc(0.0, sigma * std::sqrt(grid.dt()));
    for (int k = 1; k < grid.T; ++k) v[k] = v[k - 1] + inc(rng);
  }
  return GridPath(grid, std::move(v));
}

std::vector<double> draw_signal_coeffs(const ModelSpec& model, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  std::vector<double> z(model.J);
  for (int j = 0; j < model.J; ++j) z[j] = 0.5 * (u(rng) + u(rng));
  return z;
}

GridPath simulate_signal(const ModelSpec& model, const Grid& grid, std::mt19937_64& rng) {
  const auto z = draw_signal_coeffs(model, rng);
  std::vector<double> v(grid.T, 0.0);
  for (int j = 1; j <= model.J; ++j) {
    const double a = std::sqrt(model.lambda[j - 1]) * z[j - 1];
    if (a == 0.0) continue;
    for (int k = 1; k < grid.T; ++k) v[k] += a * model.phi(j, grid.t(k));
  }
  return GridPath(grid, std::move(v));
}

Sample simulate_sample(const ModelSpec& model, int n, const Grid& grid,
                       const RngFactory& rng) {
  model.validate();
  if (n < 1) throw invalid_parameter_error("simulate_sample: n must be >= 1");
  Sample s;
  s.y.reserve(n);
  s.x.reserve(n);
  for (int i = 0; i < n; ++i) {
    auto g = rng.stream(static_cast<std::uint64_t>(i));
    GridPath x = simulate_signal(model, grid, g);
    GridPath w = simulate_wiener(grid, model.sigma, g);
    std::vector<double> y(grid.T);
    for (int k = 0; k < grid.T; ++k) y[k] = x.values[k] + w.values[k];
    s.y.emplace_back(grid, std::move(y));
    s.x.push_back(std::move(x));
  }
  return s;
}

GridPath premask_subtract_start(const Grid& grid, const std::vector<double>& values) {
  if (static_cast<int>(values.size()) != grid.T)
    throw invalid_parameter_error("premask: value count does not match grid");
  std::vector<double> v(grid.T);
  for (int k = 0; k < grid.T; ++k) v[k] = values[k] - values[0];
  v[0] = 0.0;
  return GridPath(grid, std::move(v));
}

GridPath premask_weight(const Grid& grid, const std::vector<double>& values,
                        const std::function<double(double)>& w) {
  if (static_cast<int>(values.size()) != grid.T)
    throw invalid_parameter_error("premask: value count does not match grid");
  if (w(0.0) != 0.0)
    throw invalid_parameter_error("premask: weight function must satisfy w(0) = 0");
  if (std::abs(w(1.0) - 1.0) > 1e-12)
    throw invalid_parameter_error("premask: weight function must satisfy w(1) = 1");
  std::vector<double> v(grid.T);
  for (int k = 0; k < grid.T; ++k) v[k] = values[k] * w(grid.t(k));
  v[0] = 0.0;
  return GridPath(grid, std::move(v));
}

}  // namespace wdens
