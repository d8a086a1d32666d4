#include "wdens/selection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "wdens/parallel.hpp"

namespace wdens {

CvGrid CvGrid::practical(int m_max, int K_max) {
  if (m_max < 1 || K_max < 1)
    throw invalid_parameter_error("CvGrid::practical: need m_max >= 1, K_max >= 1");
  CvGrid g;
  for (int m = 1; m <= m_max; ++m)
    for (int K = 1; K <= K_max; ++K) g.pairs.emplace_back(m, K);
  return g;
}

void CvGrid::validate() const {
  if (pairs.empty()) throw invalid_parameter_error("CvGrid: empty grid");
  std::set<std::pair<int, int>> seen;
  for (const auto& [m, K] : pairs) {
    if (m < 1 || K < 0)
      throw invalid_parameter_error("CvGrid: pairs must have m >= 1, K >= 0");
    if (!seen.insert({m, K}).second)
      throw invalid_parameter_error("CvGrid: duplicate pair");
  }
}

int CvGrid::max_m() const {
  int v = 1;
  for (const auto& p : pairs) v = std::max(v, p.first);
  return v;
}

int CvGrid::max_K() const {
  int v = 0;
  for (const auto& p : pairs) v = std::max(v, p.second);
  return v;
}

CvGrid theoretical_mesh(int n, double gamma0) {
  if (!(gamma0 > 0.0) || gamma0 > 1.0)
    throw invalid_parameter_error("theoretical_mesh: gamma0 must lie in (0, 1]");
  if (n < 3) throw invalid_parameter_error("theoretical_mesh: n must be >= 3");
  const double ln = std::log(static_cast<double>(n));
  const int m_lo = static_cast<int>(std::floor(ln));
  const int m_hi = static_cast<int>(std::floor(std::pow(ln, 1.0 / gamma0)));
  const int K_hi = static_cast<int>(std::floor(ln / std::log(ln)));
  if (m_lo < 1 || m_hi < m_lo || K_hi < 1) {
    std::ostringstream msg;
    msg << "theoretical_mesh: empty range for n=" << n << ", gamma0=" << gamma0
        << " (m range [" << m_lo << ", " << m_hi << "], K range [1, " << K_hi << "])";
    throw invalid_parameter_error(msg.str());
  }
  CvGrid g;
  for (int m = m_lo; m <= m_hi; ++m)
    for (int K = 1; K <= K_hi; ++K) g.pairs.emplace_back(m, K);
  return g;
}

TheoreticalParams theoretical_params(int n, double gamma, double c_m) {
  if (!(gamma > 0.0) || !(gamma < 1.0))
    throw invalid_parameter_error("theoretical_params: gamma must lie in (0, 1)");
  if (n < 3) throw invalid_parameter_error("theoretical_params: n must be >= 3");
  if (!(c_m > 0.0)) throw invalid_parameter_error("theoretical_params: c_m must be > 0");
  const double ln = std::log(static_cast<double>(n));
  TheoreticalParams p;
  p.K = static_cast<int>(std::floor(gamma * ln / std::log(ln)));
  p.m = static_cast<int>(std::floor(std::pow(c_m * ln, 1.0 / gamma)));
  return p;
}

std::vector<GridPath> draw_reference_paths(const Grid& grid, double sigma,
                                           std::size_t count, const RngFactory& rng) {
  std::vector<GridPath> paths;
  paths.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    auto g = rng.stream(j);
    paths.push_back(simulate_wiener(grid, sigma, g));
  }
  return paths;
}

namespace {

// Per-point fallback replacement along the decrement path, driven by bins.
double replaced_eval(const detail::RestrictionBins& bins, WeightRule rule, int m0, int K0,
                     FallbackPolicy policy, bool* was_neg) {
  double v = detail::restricted_value(bins, rule, m0, K0);
  *was_neg = !(v > 0.0);
  detail::FallbackStepper step{m0, K0, policy};
  while (!(v > 0.0)) {
    step.step();
    v = detail::restricted_value(bins, rule, step.m, step.K);
  }
  return v;
}

double replaced_loo(const detail::RestrictionBins& bins, WeightRule rule, int m0, int K0,
                    int n, FallbackPolicy policy, bool* was_neg) {
  double v = detail::restricted_loo_value(bins, rule, m0, K0, n);
  *was_neg = !(v > 0.0);
  detail::FallbackStepper step{m0, K0, policy};
  while (!(v > 0.0)) {
    step.step();
    v = detail::restricted_loo_value(bins, rule, step.m, step.K, n);
  }
  return v;
}

// One fit at the grid envelope; every pair is a restriction of it. The bins of
// each sample path / reference path are computed once and reused by all pairs.
struct CvEngine {
  const std::vector<GridPath>& sample;
  DensityEstimate fit;
  std::vector<detail::RestrictionBins> loo_bins;   // one per sample path
  std::vector<detail::RestrictionBins> eval_bins;  // one per reference path

  CvEngine(const std::vector<GridPath>& sample_, const ProjectionBasis& basis, int m_max,
           int K_max, double sigma, WeightRule weight,
           const std::vector<GridPath>& eval_paths, std::uint64_t index_cap)
      : sample(sample_),
        fit(fit_dm(sample_, basis, m_max, K_max, sigma, weight, index_cap)) {
    const auto& set = *fit.indices;
    const HermiteTable sample_table =
        detail::scaled_table(basis, fit.grid, m_max, K_max, sigma, sample_);
    loo_bins.resize(sample_.size());
    parallel_for(sample_.size(), [&](std::size_t i) {
      loo_bins[i] = detail::make_bins(set, fit.coeffs, sample_table, i, true);
    });
    const HermiteTable eval_table =
        detail::scaled_table(basis, fit.grid, m_max, K_max, sigma, eval_paths);
    eval_bins.resize(eval_paths.size());
    parallel_for(eval_paths.size(), [&](std::size_t j) {
      eval_bins[j] = detail::make_bins(set, fit.coeffs, eval_table, j, false);
    });
  }

  CvValue pair_value(int m, int K, WeightRule weight, FallbackPolicy policy) const {
    const int n = static_cast<int>(sample.size());
    std::vector<double> eval_sq(eval_bins.size());
    std::vector<char> eval_neg(eval_bins.size());
    parallel_for(eval_bins.size(), [&](std::size_t j) {
      bool neg = false;
      const double v = replaced_eval(eval_bins[j], weight, m, K, policy, &neg);
      eval_sq[j] = v * v;
      eval_neg[j] = neg;
    });
    std::vector<double> loo(loo_bins.size());
    std::vector<char> loo_neg(loo_bins.size());
    parallel_for(loo_bins.size(), [&](std::size_t i) {
      bool neg = false;
      loo[i] = replaced_loo(loo_bins[i], weight, m, K, n, policy, &neg);
      loo_neg[i] = neg;
    });

    double sq_sum = 0.0;
    std::size_t n_eval_neg = 0;
    for (std::size_t j = 0; j < eval_sq.size(); ++j) {
      sq_sum += eval_sq[j];
      n_eval_neg += eval_neg[j];
    }
    double loo_sum = 0.0;
    std::size_t n_loo_neg = 0;
    for (std::size_t i = 0; i < loo.size(); ++i) {
      loo_sum += loo[i];
      n_loo_neg += loo_neg[i];
    }
    CvValue out;
    out.cv = sq_sum / static_cast<double>(eval_sq.size()) - 2.0 * loo_sum / n;
    out.frac_neg_loo = static_cast<double>(n_loo_neg) / loo.size();
    out.frac_neg_eval = static_cast<double>(n_eval_neg) / eval_sq.size();
    return out;
  }
};

}  // namespace

CvValue cv_value(const std::vector<GridPath>& sample, const ProjectionBasis& basis, int m,
                 int K, double sigma, WeightRule weight,
                 const std::vector<GridPath>& eval_paths, FallbackPolicy policy,
                 std::uint64_t index_cap) {
  if (sample.size() < 2) throw invalid_parameter_error("cv_value: need n >= 2");
  if (eval_paths.empty()) throw invalid_parameter_error("cv_value: need reference paths");
  const CvEngine engine(sample, basis, m, K, sigma, weight, eval_paths, index_cap);
  return engine.pair_value(m, K, weight, policy);
}

std::optional<std::pair<int, int>> choose_pair(const std::vector<PairScore>& scores,
                                               std::vector<bool>* local_min_out) {
  std::map<std::pair<int, int>, std::size_t> by_pair;
  for (std::size_t i = 0; i < scores.size(); ++i)
    by_pair[{scores[i].m, scores[i].K}] = i;

  if (local_min_out) local_min_out->assign(scores.size(), false);
  std::optional<std::size_t> best;
  auto better = [&scores](std::size_t a, std::size_t b) {
    const int sa = scores[a].m + scores[a].K, sb = scores[b].m + scores[b].K;
    if (sa != sb) return sa < sb;
    if (scores[a].K != scores[b].K) return scores[a].K < scores[b].K;
    return scores[a].m < scores[b].m;
  };

  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].discarded) continue;
    const int m = scores[i].m, K = scores[i].K;
    bool is_min = true;
    const std::pair<int, int> neighbors[4] = {{m - 1, K}, {m + 1, K}, {m, K - 1}, {m, K + 1}};
    for (const auto& nb : neighbors) {
      auto it = by_pair.find(nb);
      if (it == by_pair.end() || scores[it->second].discarded) continue;
      if (!(scores[i].cv <= scores[it->second].cv)) {
        is_min = false;
        break;
      }
    }
    if (!is_min) continue;
    if (local_min_out) (*local_min_out)[i] = true;
    if (!best || better(i, *best)) best = i;
  }

  if (!best) {
    // No local minimum can only happen when everything is discarded, but keep
    // the global-minimum fallback for robustness.
    std::optional<std::size_t> global;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i].discarded) continue;
      if (!global || scores[i].cv < scores[*global].cv ||
          (scores[i].cv == scores[*global].cv && better(i, *global)))
        global = i;
    }
    if (!global) return std::nullopt;
    best = global;
  }
  return std::pair<int, int>{scores[*best].m, scores[*best].K};
}

CvReport select(const std::vector<GridPath>& sample, const ProjectionBasis& basis,
                const CvGrid& grid, double sigma, WeightRule weight,
                std::size_t n_eval_paths, const RngFactory& rng, FallbackPolicy policy,
                std::uint64_t index_cap) {
  grid.validate();
  if (sample.size() < 2) throw invalid_parameter_error("select: need n >= 2");
  if (n_eval_paths < 1) throw invalid_parameter_error("select: need reference paths");

  const Grid g = sample.front().grid;
  const auto eval_paths = draw_reference_paths(g, sigma, n_eval_paths, rng);
  const CvEngine engine(sample, basis, grid.max_m(), grid.max_K(), sigma, weight,
                        eval_paths, index_cap);

  CvReport report;
  report.n_eval_paths = n_eval_paths;
  report.seed = rng.key();
  std::vector<PairScore> scores;
  scores.reserve(grid.pairs.size());
  for (const auto& [m, K] : grid.pairs) {
    const CvValue v = engine.pair_value(m, K, weight, policy);
    CvPairResult r;
    r.m = m;
    r.K = K;
    r.cv = v.cv;
    r.frac_neg_loo = v.frac_neg_loo;
    r.frac_neg_eval = v.frac_neg_eval;
    r.discarded = v.frac_neg_loo > 0.5 || v.frac_neg_eval > 0.5;
    r.local_min = false;
    report.pairs.push_back(r);
    scores.push_back({m, K, v.cv, r.discarded});
  }

  std::vector<bool> local_min;
  const auto chosen = choose_pair(scores, &local_min);
  for (std::size_t i = 0; i < report.pairs.size(); ++i)
    report.pairs[i].local_min = local_min[i];
  if (chosen) {
    report.chosen_m = chosen->first;
    report.chosen_K = chosen->second;
  } else {
    report.all_discarded = true;
    report.chosen_m = 1;
    report.chosen_K = 0;
  }
  return report;
}

DnCvReport select_dn(const std::vector<GridPath>& sample, const ProjectionBasis& basis,
                     const std::vector<int>& K_grid, double sigma,
                     std::size_t n_eval_paths, const RngFactory& rng,
                     std::uint64_t index_cap) {
  if (K_grid.empty()) throw invalid_parameter_error("select_dn: empty K grid");
  if (sample.size() < 2) throw invalid_parameter_error("select_dn: need n >= 2");
  for (int K : K_grid)
    if (K < 0) throw invalid_parameter_error("select_dn: K must be >= 0");

  const Grid g = sample.front().grid;
  const auto eval_paths = draw_reference_paths(g, sigma, n_eval_paths, rng);
  const int K_max = *std::max_element(K_grid.begin(), K_grid.end());
  const int n = static_cast<int>(sample.size());

  const DnEstimate fit = fit_dn(sample, basis, K_max, sigma, index_cap);
  const auto& set = *fit.indices;
  const HermiteTable sample_table = detail::scaled_table(
      basis, fit.grid, set.m(), set.max_entry_bound(), sigma, sample);
  std::vector<detail::DnBins> loo_bins(sample.size());
  parallel_for(sample.size(), [&](std::size_t i) {
    loo_bins[i] = detail::make_dn_bins(set, fit.coeffs, sample_table, i, true);
  });
  const HermiteTable eval_table = detail::scaled_table(
      basis, fit.grid, set.m(), set.max_entry_bound(), sigma, eval_paths);
  std::vector<detail::DnBins> eval_bins(eval_paths.size());
  parallel_for(eval_paths.size(), [&](std::size_t j) {
    eval_bins[j] = detail::make_dn_bins(set, fit.coeffs, eval_table, j, false);
  });

  DnCvReport report;
  report.n_eval_paths = n_eval_paths;
  report.seed = rng.key();
  std::vector<PairScore> scores;
  for (int K : K_grid) {
    std::vector<double> eval_sq(eval_bins.size());
    std::vector<char> eval_neg(eval_bins.size());
    parallel_for(eval_bins.size(), [&](std::size_t j) {
      double v = detail::dn_restricted_value(eval_bins[j], K);
      eval_neg[j] = !(v > 0.0);
      for (int K_r = K - 1; !(v > 0.0); --K_r) v = detail::dn_restricted_value(eval_bins[j], K_r);
      eval_sq[j] = v * v;
    });
    std::vector<double> loo(loo_bins.size());
    std::vector<char> loo_neg(loo_bins.size());
    parallel_for(loo_bins.size(), [&](std::size_t i) {
      double v = detail::dn_restricted_loo_value(loo_bins[i], K, n);
      loo_neg[i] = !(v > 0.0);
      for (int K_r = K - 1; !(v > 0.0); --K_r) v = detail::dn_restricted_loo_value(loo_bins[i], K_r, n);
      loo[i] = v;
    });

    double sq_sum = 0.0, loo_sum = 0.0;
    std::size_t n_eval_neg = 0, n_loo_neg = 0;
    for (std::size_t j = 0; j < eval_sq.size(); ++j) {
      sq_sum += eval_sq[j];
      n_eval_neg += eval_neg[j];
    }
    for (std::size_t i = 0; i < loo.size(); ++i) {
      loo_sum += loo[i];
      n_loo_neg += loo_neg[i];
    }

    DnCvPairResult r;
    r.K = K;
    r.cv = sq_sum / static_cast<double>(eval_sq.size()) - 2.0 * loo_sum / n;
    r.frac_neg_loo = static_cast<double>(n_loo_neg) / loo.size();
    r.frac_neg_eval = static_cast<double>(n_eval_neg) / eval_sq.size();
    r.discarded = r.frac_neg_loo > 0.5 || r.frac_neg_eval > 0.5;
    r.local_min = false;
    report.pairs.push_back(r);
    scores.push_back({1, K, r.cv, r.discarded});
  }

  std::vector<bool> local_min;
  const auto chosen = choose_pair(scores, &local_min);
  for (std::size_t i = 0; i < report.pairs.size(); ++i)
    report.pairs[i].local_min = local_min[i];
  if (chosen) {
    report.chosen_K = chosen->second;
  } else {
    report.all_discarded = true;
    report.chosen_K = 0;
  }
  return report;
}

}  // namespace wdens
