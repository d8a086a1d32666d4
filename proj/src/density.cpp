#include "wdens/density.hpp"

#include <cmath>
#include <string>

#include "wdens/parallel.hpp"

namespace wdens {

namespace detail {

HermiteTable scaled_table(const ProjectionBasis& basis, const Grid& grid, int m, int K,
                          double sigma, const std::vector<GridPath>& paths) {
  const Eigen::MatrixXd vals = basis.values_on_grid(grid, m);
  const Eigen::MatrixXd coeff = coefficient_matrix(paths, vals, grid);
  std::vector<double> scaled(paths.size() * m);
  for (std::size_t p = 0; p < paths.size(); ++p)
    for (int c = 0; c < m; ++c) scaled[p * m + c] = coeff(p, c) / sigma;
  return HermiteTable(scaled, paths.size(), m, K);
}

RestrictionBins make_bins(const IndexSet& set, const std::vector<double>& coeffs,
                          const HermiteTable& table, std::size_t point, bool with_squares) {
  RestrictionBins bins;
  bins.max_degree = set.max_degree();
  bins.m = set.m();
  bins.coeff_tensor.assign((bins.max_degree + 1) * (bins.m + 1), 0.0);
  if (with_squares) bins.tensor_sq.assign((bins.max_degree + 1) * (bins.m + 1), 0.0);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double t = table.tensor(point, set, i);
    const int d = set.degree(i);
    const int mc = set.last_active_coord(i);
    bins.ct(d, mc) += coeffs[i] * t;
    if (with_squares) bins.ts(d, mc) += t * t;
  }
  return bins;
}

double restricted_value(const RestrictionBins& bins, WeightRule rule, int m_r, int K_r) {
  double v = 0.0;
  const int dmax = std::min(K_r, bins.max_degree);
  const int mmax = std::min(m_r, bins.m);
  for (int d = 0; d <= dmax; ++d) {
    double row = 0.0;
    for (int mc = 0; mc <= mmax; ++mc) row += bins.ct(d, mc);
    v += weight_value(rule, K_r, d) * row;
  }
  return v;
}

double restricted_loo_value(const RestrictionBins& bins, WeightRule rule, int m_r, int K_r,
                            int n) {
  double num = 0.0;
  const int dmax = std::min(K_r, bins.max_degree);
  const int mmax = std::min(m_r, bins.m);
  for (int d = 0; d <= dmax; ++d) {
    double ct = 0.0, ts = 0.0;
    for (int mc = 0; mc <= mmax; ++mc) {
      ct += bins.ct(d, mc);
      ts += bins.ts(d, mc);
    }
    num += weight_value(rule, K_r, d) * (n * ct - ts);
  }
  return num / (n - 1);
}

void FallbackStepper::step() {
  switch (policy) {
    case FallbackPolicy::JointDecrement:
      K -= 1;
      m = std::max(m - 1, 1);
      break;
    case FallbackPolicy::AlternateDecrement:
      if (decrement_K_next) {
        K -= 1;
      } else {
        m = std::max(m - 1, 1);
      }
      decrement_K_next = !decrement_K_next;
      break;
  }
}

DnBins make_dn_bins(const IndexSet& set, const std::vector<double>& coeffs,
                    const HermiteTable& table, std::size_t point, bool with_squares) {
  DnBins bins;
  bins.K = set.m();  // for the box set, m == K (or 1 for K == 0)
  bins.coeff_tensor.assign(bins.K + 1, 0.0);
  if (with_squares) bins.tensor_sq.assign(bins.K + 1, 0.0);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double t = table.tensor(point, set, i);
    const int c = std::max(set.max_entry(i), set.last_active_coord(i));
    bins.coeff_tensor[c] += coeffs[i] * t;
    if (with_squares) bins.tensor_sq[c] += t * t;
  }
  return bins;
}

double dn_restricted_value(const DnBins& bins, int K_r) {
  double v = 0.0;
  for (int c = 0; c <= std::min(K_r, bins.K); ++c) v += bins.coeff_tensor[c];
  return v;
}

double dn_restricted_loo_value(const DnBins& bins, int K_r, int n) {
  double ct = 0.0, ts = 0.0;
  for (int c = 0; c <= std::min(K_r, bins.K); ++c) {
    ct += bins.coeff_tensor[c];
    ts += bins.tensor_sq[c];
  }
  return (n * ct - ts) / (n - 1);
}

namespace {

// Mean of tensor values over all table points, per index. Indices are
// processed in parallel; the inner sum runs in point order, so results do not
// depend on the thread count.
std::vector<double> average_tensors(const IndexSet& set, const HermiteTable& table) {
  std::vector<double> coeffs(set.size());
  const std::size_t n = table.n_points();
  parallel_for(set.size(), [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p) s += table.tensor(p, set, i);
    coeffs[i] = s / static_cast<double>(n);
  });
  return coeffs;
}

}  // namespace

}  // namespace detail

DensityEstimate fit_dm(const std::vector<GridPath>& sample, const ProjectionBasis& basis,
                       int m, int K, double sigma, WeightRule weight,
                       std::uint64_t index_cap) {
  if (sample.empty()) throw invalid_parameter_error("fit_dm: empty sample");
  if (m < 1) throw invalid_parameter_error("fit_dm: m must be >= 1");
  if (K < 0) throw invalid_parameter_error("fit_dm: K must be >= 0");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw invalid_parameter_error("fit_dm: sigma must be finite and > 0");
  if (m > basis.size())
    throw invalid_parameter_error("fit_dm: m exceeds basis size " +
                                  std::to_string(basis.size()));
  const std::uint64_t count = simplex_count(m, K);
  if (count > index_cap)
    throw capacity_error("fit_dm: simplex size " + std::to_string(count) +
                             " exceeds index cap " + std::to_string(index_cap),
                         count);

  DensityEstimate est;
  est.m = m;
  est.K = K;
  est.sigma = sigma;
  est.weight = weight;
  est.basis = basis;
  est.n = static_cast<int>(sample.size());
  est.grid = sample.front().grid;
  est.indices = std::make_shared<IndexSet>(IndexSet::simplex(m, K));
  const HermiteTable table = detail::scaled_table(basis, est.grid, m, K, sigma, sample);
  est.coeffs = detail::average_tensors(*est.indices, table);
  return est;
}

std::vector<double> eval_dm_batch(const DensityEstimate& est,
                                  const std::vector<GridPath>& paths) {
  for (const auto& p : paths)
    if (!(p.grid == est.grid))
      throw invalid_parameter_error("eval_dm: path grid does not match estimate grid");
  const HermiteTable table =
      detail::scaled_table(est.basis, est.grid, est.m, est.K, est.sigma, paths);
  const IndexSet& set = *est.indices;
  std::vector<double> out(paths.size());
  parallel_for(paths.size(), [&](std::size_t p) {
    double v = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i)
      v += weight_value(est.weight, est.K, set.degree(i)) * est.coeffs[i] *
           table.tensor(p, set, i);
    out[p] = v;
  });
  return out;
}

double eval_dm(const DensityEstimate& est, const GridPath& u) {
  return eval_dm_batch(est, {u}).front();
}

std::vector<FallbackResult> eval_dm_fallback_batch(const DensityEstimate& est,
                                                   const std::vector<GridPath>& paths,
                                                   FallbackPolicy policy) {
  for (const auto& p : paths)
    if (!(p.grid == est.grid))
      throw invalid_parameter_error("eval_dm_fallback: path grid mismatch");
  const HermiteTable table =
      detail::scaled_table(est.basis, est.grid, est.m, est.K, est.sigma, paths);
  std::vector<FallbackResult> out(paths.size());
  parallel_for(paths.size(), [&](std::size_t p) {
    const auto bins = detail::make_bins(*est.indices, est.coeffs, table, p, false);
    detail::FallbackStepper step{est.m, est.K, policy};
    while (true) {
      const double v = detail::restricted_value(bins, est.weight, step.m, step.K);
      if (v > 0.0) {
        out[p] = {v, step.m, step.K};
        break;
      }
      step.step();
    }
  });
  return out;
}

FallbackResult eval_dm_fallback(const DensityEstimate& est, const GridPath& u,
                                FallbackPolicy policy) {
  return eval_dm_fallback_batch(est, {u}, policy).front();
}

DnEstimate fit_dn(const std::vector<GridPath>& sample, const ProjectionBasis& basis, int K,
                  double sigma, std::uint64_t index_cap) {
  if (sample.empty()) throw invalid_parameter_error("fit_dn: empty sample");
  if (K < 0) throw invalid_parameter_error("fit_dn: K must be >= 0");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw invalid_parameter_error("fit_dn: sigma must be finite and > 0");
  if (K > basis.size())
    throw invalid_parameter_error("fit_dn: K exceeds basis size " +
                                  std::to_string(basis.size()));
  const std::uint64_t count = dn_index_count(K);
  if (count > index_cap)
    throw capacity_error("fit_dn: index set size " + std::to_string(count) +
                             " exceeds index cap " + std::to_string(index_cap),
                         count);

  DnEstimate est;
  est.K = K;
  est.sigma = sigma;
  est.basis = basis;
  est.n = static_cast<int>(sample.size());
  est.grid = sample.front().grid;
  est.indices = std::make_shared<IndexSet>(IndexSet::dn_box(K));
  const HermiteTable table = detail::scaled_table(
      basis, est.grid, est.indices->m(), est.indices->max_entry_bound(), sigma, sample);
  est.coeffs = detail::average_tensors(*est.indices, table);
  return est;
}

std::vector<double> eval_dn_batch(const DnEstimate& est, const std::vector<GridPath>& paths) {
  for (const auto& p : paths)
    if (!(p.grid == est.grid))
      throw invalid_parameter_error("eval_dn: path grid does not match estimate grid");
  const HermiteTable table = detail::scaled_table(
      est.basis, est.grid, est.indices->m(), est.indices->max_entry_bound(), est.sigma, paths);
  const IndexSet& set = *est.indices;
  std::vector<double> out(paths.size());
  parallel_for(paths.size(), [&](std::size_t p) {
    double v = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i)
      v += est.coeffs[i] * table.tensor(p, set, i);
    out[p] = v;
  });
  return out;
}

double eval_dn(const DnEstimate& est, const GridPath& u) {
  return eval_dn_batch(est, {u}).front();
}

std::vector<FallbackResult> eval_dn_fallback_batch(const DnEstimate& est,
                                                   const std::vector<GridPath>& paths) {
  for (const auto& p : paths)
    if (!(p.grid == est.grid))
      throw invalid_parameter_error("eval_dn_fallback: path grid mismatch");
  const HermiteTable table =
      detail::scaled_table(est.basis, est.grid, est.indices->m(),
                           est.indices->max_entry_bound(), est.sigma, paths);
  std::vector<FallbackResult> out(paths.size());
  parallel_for(paths.size(), [&](std::size_t p) {
    const auto bins = detail::make_dn_bins(*est.indices, est.coeffs, table, p, false);
    for (int K_r = est.K;; --K_r) {
      const double v = detail::dn_restricted_value(bins, K_r);
      if (v > 0.0) {
        out[p] = {v, std::max(K_r, 1), K_r};
        break;
      }
    }
  });
  return out;
}

FallbackResult eval_dn_fallback(const DnEstimate& est, const GridPath& u) {
  return eval_dn_fallback_batch(est, {u}).front();
}

}  // namespace wdens
