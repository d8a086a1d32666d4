#include "wdens/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wdens/parallel.hpp"
#include "wdens/projection.hpp"
#include "wdens/simulate.hpp"

namespace wdens {

void validate_law(const KnownSignalLaw& law, const Grid& grid) {
  const auto check_atom = [&grid](const PathWithDeriv& a) {
    if (!(a.x.grid == grid))
      throw invalid_parameter_error("signal law: atom grid mismatch");
    if (static_cast<int>(a.deriv.size()) != grid.T)
      throw invalid_parameter_error("signal law: derivative length mismatch");
  };
  if (const auto* pm = std::get_if<PointMassLaw>(&law)) {
    check_atom(pm->atom);
  } else if (const auto* mix = std::get_if<FiniteMixtureLaw>(&law)) {
    if (mix->atoms.empty() || mix->weights.size() != mix->atoms.size())
      throw invalid_parameter_error("mixture law: weights/atoms mismatch");
    double sum = 0.0;
    for (double w : mix->weights) {
      if (!(w > 0.0)) throw invalid_parameter_error("mixture law: weights must be positive");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw invalid_parameter_error("mixture law: weights must sum to 1");
    for (const auto& a : mix->atoms) check_atom(a);
  } else {
    const auto& sm = std::get<SimModelLaw>(law);
    sm.model.validate();
    if (sm.mc_draws < 1)
      throw invalid_parameter_error("simulation-model law: draw count must be >= 1");
    if (!(sm.grid == grid))
      throw invalid_parameter_error("simulation-model law: grid mismatch");
  }
}

double girsanov_exponent(const std::vector<double>& deriv, const GridPath& v, double sigma) {
  const Grid& g = v.grid;
  if (static_cast<int>(deriv.size()) != g.T)
    throw invalid_parameter_error("girsanov_exponent: derivative length mismatch");
  const double dt = g.dt();
  double ito = 0.0, energy = 0.0;
  for (int k = 0; k + 1 < g.T; ++k) {
    ito += deriv[k] * (v.values[k + 1] - v.values[k]);
    energy += deriv[k] * deriv[k] * dt;
  }
  return ito / (sigma * sigma) - 0.5 * energy / (sigma * sigma);
}

namespace {

struct McAccumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t n = 0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  McValue result() const {
    const double mean = sum / n;
    if (n < 2) return {mean, 0.0};
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n)};
  }
};

// Precomputed draw bank for a simulation model: scaled coefficient vectors
// u_r = sqrt(lambda) .* Z_r and the energy terms b_r = (2 sigma^2)^-1 ||X_r'||^2.
struct DrawBank {
  int J;
  std::vector<double> u;  // R x J
  std::vector<double> b;  // R

  DrawBank(const ModelSpec& model, double sigma, int R, std::mt19937_64 gen, const Grid& g) {
    J = model.J;
    u.resize(static_cast<std::size_t>(R) * J);
    b.resize(R);
    // Gram of the component derivatives under the left-endpoint rule.
    const double dt = g.dt();
    std::vector<double> deriv(static_cast<std::size_t>(J) * g.T);
    for (int j = 1; j <= J; ++j)
      for (int k = 0; k < g.T; ++k)
        deriv[(j - 1) * g.T + k] = model.phi_deriv(j, g.t(k));
    std::vector<double> gram(static_cast<std::size_t>(J) * J);
    for (int a = 0; a < J; ++a)
      for (int c = a; c < J; ++c) {
        double s = 0.0;
        for (int k = 0; k + 1 < g.T; ++k) s += deriv[a * g.T + k] * deriv[c * g.T + k];
        gram[a * J + c] = gram[c * J + a] = s * dt;
      }
    for (int r = 0; r < R; ++r) {
      const auto z = draw_signal_coeffs(model, gen);
      double* ur = u.data() + static_cast<std::size_t>(r) * J;
      for (int j = 0; j < J; ++j) ur[j] = std::sqrt(model.lambda[j]) * z[j];
      double q = 0.0;
      for (int a = 0; a < J; ++a) {
        q += ur[a] * ur[a] * gram[a * J + a];
        for (int c = a + 1; c < J; ++c) q += 2.0 * ur[a] * ur[c] * gram[a * J + c];
      }
      b[r] = 0.5 * q / (sigma * sigma);
    }
  }

  // c_j(v) = sum_k phi_j'(t_k) (v_{k+1} - v_k), scaled by sigma^-2.
  std::vector<double> point_coeffs(const ModelSpec& model, const GridPath& v,
                                   double sigma) const {
    std::vector<double> c(J, 0.0);
    const Grid& g = v.grid;
    for (int j = 1; j <= J; ++j) {
      double s = 0.0;
      for (int k = 0; k + 1 < g.T; ++k)
        s += model.phi_deriv(j, g.t(k)) * (v.values[k + 1] - v.values[k]);
      c[j - 1] = s / (sigma * sigma);
    }
    return c;
  }

  McValue density_at(const ModelSpec& model, const GridPath& v, double sigma) const {
    const auto c = point_coeffs(model, v, sigma);
    McAccumulator acc;
    const std::size_t R = b.size();
    for (std::size_t r = 0; r < R; ++r) {
      const double* ur = u.data() + r * J;
      double dot = 0.0;
      for (int j = 0; j < J; ++j) dot += ur[j] * c[j];
      acc.add(std::exp(dot - b[r]));
    }
    return acc.result();
  }
};

McValue exact_density(const KnownSignalLaw& law, const GridPath& v, double sigma) {
  if (const auto* pm = std::get_if<PointMassLaw>(&law))
    return {std::exp(girsanov_exponent(pm->atom.deriv, v, sigma)), 0.0};
  const auto& mix = std::get<FiniteMixtureLaw>(law);
  double val = 0.0;
  for (std::size_t a = 0; a < mix.atoms.size(); ++a)
    val += mix.weights[a] * std::exp(girsanov_exponent(mix.atoms[a].deriv, v, sigma));
  return {val, 0.0};
}

}  // namespace

McValue true_density(const KnownSignalLaw& law, const GridPath& v, double sigma,
                     const RngFactory& rng) {
  validate_law(law, v.grid);
  if (!std::holds_alternative<SimModelLaw>(law)) return exact_density(law, v, sigma);
  const auto& sm = std::get<SimModelLaw>(law);
  const DrawBank bank(sm.model, sigma, sm.mc_draws, rng.stream(), v.grid);
  return bank.density_at(sm.model, v, sigma);
}

std::vector<McValue> true_density_batch(const KnownSignalLaw& law,
                                        const std::vector<GridPath>& points, double sigma,
                                        const RngFactory& rng) {
  if (points.empty()) return {};
  validate_law(law, points.front().grid);
  std::vector<McValue> out(points.size());
  if (!std::holds_alternative<SimModelLaw>(law)) {
    parallel_for(points.size(),
                 [&](std::size_t i) { out[i] = exact_density(law, points[i], sigma); });
    return out;
  }
  const auto& sm = std::get<SimModelLaw>(law);
  const DrawBank bank(sm.model, sigma, sm.mc_draws, rng.stream(), points.front().grid);
  parallel_for(points.size(), [&](std::size_t i) {
    out[i] = bank.density_at(sm.model, points[i], sigma);
  });
  return out;
}

namespace {

// Left-rule quadrature of phi_j against the atom's analytic derivative; for
// bases vanishing at t = 1 this coincides with the trapezoid rule.
std::vector<double> atom_projections(const PathWithDeriv& atom, const ProjectionBasis& basis,
                                     int m) {
  const Grid& g = atom.x.grid;
  std::vector<double> b(m, 0.0);
  for (int j = 1; j <= m; ++j) {
    double acc = 0.0;
    for (int k = 0; k + 1 < g.T; ++k) acc += basis.eval(j, g.t(k)) * atom.deriv[k];
    b[j - 1] = acc * g.dt();
  }
  return b;
}

}  // namespace

McValue sieve_density(const KnownSignalLaw& law, const ProjectionBasis& basis,
                      const std::vector<double>& s, double sigma, const RngFactory& rng) {
  const int m = static_cast<int>(s.size());
  if (m < 1) throw invalid_parameter_error("sieve_density: need m >= 1");
  if (m > basis.size())
    throw invalid_parameter_error("sieve_density: m exceeds basis size");

  const auto atom_term = [&](const std::vector<double>& b) {
    double dot = 0.0, energy = 0.0;
    for (int j = 0; j < m; ++j) {
      dot += b[j] * s[j];
      energy += b[j] * b[j];
    }
    return std::exp((dot - 0.5 * energy) / (sigma * sigma));
  };

  if (const auto* pm = std::get_if<PointMassLaw>(&law))
    return {atom_term(atom_projections(pm->atom, basis, m)), 0.0};
  if (const auto* mix = std::get_if<FiniteMixtureLaw>(&law)) {
    double val = 0.0;
    for (std::size_t a = 0; a < mix->atoms.size(); ++a)
      val += mix->weights[a] * atom_term(atom_projections(mix->atoms[a], basis, m));
    return {val, 0.0};
  }

  const auto& sm = std::get<SimModelLaw>(law);
  sm.model.validate();
  // beta'_{X,j} = sum_l sqrt(lambda_l) Z_l * (Ito sum of phi_j against the
  // component path phi_l); precompute the m x J component table once.
  const Grid g = sm.grid;
  std::vector<double> table(static_cast<std::size_t>(m) * sm.model.J, 0.0);
  for (int l = 1; l <= sm.model.J; ++l) {
    std::vector<double> comp_deriv(g.T);
    for (int k = 0; k < g.T; ++k) comp_deriv[k] = sm.model.phi_deriv(l, g.t(k));
    for (int j = 1; j <= m; ++j) {
      double acc = 0.0;
      for (int k = 0; k + 1 < g.T; ++k) acc += basis.eval(j, g.t(k)) * comp_deriv[k];
      table[(j - 1) * sm.model.J + (l - 1)] = acc * g.dt();
    }
  }
  McAccumulator acc;
  auto gen = rng.stream();
  std::vector<double> b(m);
  for (int r = 0; r < sm.mc_draws; ++r) {
    const auto z = draw_signal_coeffs(sm.model, gen);
    for (int j = 0; j < m; ++j) {
      double v = 0.0;
      for (int l = 0; l < sm.model.J; ++l)
        v += table[j * sm.model.J + l] * std::sqrt(sm.model.lambda[l]) * z[l];
      b[j] = v;
    }
    acc.add(atom_term(b));
  }
  return acc.result();
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw invalid_parameter_error("quantile: empty data");
  if (!(p >= 0.0 && p <= 1.0)) throw invalid_parameter_error("quantile: p must be in [0,1]");
  std::sort(values.begin(), values.end());
  const double h = (values.size() - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - lo;
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

Quartiles squared_error_summary(const std::vector<double>& estimates,
                                const std::vector<double>& truths) {
  if (estimates.size() != truths.size() || estimates.empty())
    throw invalid_parameter_error("squared_error_summary: length mismatch");
  std::vector<double> se(estimates.size());
  for (std::size_t i = 0; i < se.size(); ++i) {
    const double d = estimates[i] - truths[i];
    se[i] = d * d;
  }
  return {quantile(se, 0.5), quantile(se, 0.25), quantile(se, 0.75)};
}

double mean_squared_difference(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty())
    throw invalid_parameter_error("mean_squared_difference: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s / a.size();
}

}  // namespace wdens
