#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "wdens/errors.hpp"

namespace wdens {

/// Uniform grid t_k = k/(T-1) on [0,1].
struct Grid {
  int T = 101;

  explicit Grid(int points = 101) : T(points) {
    if (T < 2) throw invalid_parameter_error("Grid needs at least 2 points");
  }

  double dt() const { return 1.0 / (T - 1); }
  double t(int k) const { return static_cast<double>(k) / (T - 1); }

  bool operator==(const Grid& other) const { return T == other.T; }
};

/// A function sampled on a Grid; every path in this system starts at zero.
struct GridPath {
  Grid grid;
  std::vector<double> values;

  GridPath() : grid(2), values(2, 0.0) {}

  GridPath(Grid g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.T)
      throw invalid_parameter_error("GridPath value count does not match grid");
    if (values[0] != 0.0)
      throw invalid_parameter_error("GridPath must start at zero");
  }

  static GridPath zeros(Grid g) { return GridPath(g, std::vector<double>(g.T, 0.0)); }

  double operator[](int k) const { return values[k]; }
};

/// Trapezoid rule for a function given at the grid points.
inline double trapezoid(const Grid& g, const std::vector<double>& f) {
  double s = 0.5 * (f.front() + f.back());
  for (int k = 1; k + 1 < g.T; ++k) s += f[k];
  return s * g.dt();
}

}  // namespace wdens
