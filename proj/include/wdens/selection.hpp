#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "wdens/density.hpp"
#include "wdens/rng.hpp"
#include "wdens/simulate.hpp"

namespace wdens {

/// Candidate (m, K) pairs for cross-validation.
struct CvGrid {
  std::vector<std::pair<int, int>> pairs;

  static CvGrid practical(int m_max, int K_max);  // {1..m_max} x {1..K_max}
  void validate() const;
  int max_m() const;
  int max_K() const;
};

/// m in {floor(log n) .. floor((log n)^(1/gamma0))}, K in {1 .. floor(log n / log log n)}.
CvGrid theoretical_mesh(int n, double gamma0);

struct TheoreticalParams {
  int m;
  int K;
};

/// K = floor(gamma * log(n) / log(log(n))), m = floor((c_m * log n)^(1/gamma)).
TheoreticalParams theoretical_params(int n, double gamma, double c_m);

struct CvValue {
  double cv;
  double frac_neg_loo;
  double frac_neg_eval;
};

/// CV(m, K) = mean_j f(V_j)^2 - (2/n) sum_i f^(-i)(Y_i), with the exact
/// leave-one-out coefficient downdate and per-point fallback replacement of
/// non-positive values. The negativity fractions are counted before replacement.
CvValue cv_value(const std::vector<GridPath>& sample, const ProjectionBasis& basis, int m,
                 int K, double sigma, WeightRule weight,
                 const std::vector<GridPath>& eval_paths,
                 FallbackPolicy policy = FallbackPolicy::JointDecrement,
                 std::uint64_t index_cap = kDefaultIndexCap);

struct CvPairResult {
  int m;
  int K;
  double cv;
  double frac_neg_loo;
  double frac_neg_eval;
  bool discarded;
  bool local_min;
};

struct CvReport {
  std::vector<CvPairResult> pairs;
  int chosen_m = 1;
  int chosen_K = 0;
  bool all_discarded = false;
  std::size_t n_eval_paths = 0;
  std::uint64_t seed = 0;
};

/// Evaluates the whole grid from one fit at (max m, max K), discards pairs
/// with more than 50% negative values, and picks among local minima the pair
/// with minimal m + K (ties: smaller K, then smaller m).
CvReport select(const std::vector<GridPath>& sample, const ProjectionBasis& basis,
                const CvGrid& grid, double sigma, WeightRule weight,
                std::size_t n_eval_paths, const RngFactory& rng,
                FallbackPolicy policy = FallbackPolicy::JointDecrement,
                std::uint64_t index_cap = kDefaultIndexCap);

/// Same criterion and rules for the single-parameter box estimator.
struct DnCvPairResult {
  int K;
  double cv;
  double frac_neg_loo;
  double frac_neg_eval;
  bool discarded;
  bool local_min;
};

struct DnCvReport {
  std::vector<DnCvPairResult> pairs;
  int chosen_K = 0;
  bool all_discarded = false;
  std::size_t n_eval_paths = 0;
  std::uint64_t seed = 0;
};

DnCvReport select_dn(const std::vector<GridPath>& sample, const ProjectionBasis& basis,
                     const std::vector<int>& K_grid, double sigma,
                     std::size_t n_eval_paths, const RngFactory& rng,
                     std::uint64_t index_cap = kDefaultIndexCap);

/// Pure chooser over precomputed scores (exposed for direct testing).
struct PairScore {
  int m;
  int K;
  double cv;
  bool discarded;
};
std::optional<std::pair<int, int>> choose_pair(const std::vector<PairScore>& scores,
                                               std::vector<bool>* local_min_out = nullptr);

/// Shared Monte-Carlo reference paths V ~ P_V for the CV integral.
std::vector<GridPath> draw_reference_paths(const Grid& grid, double sigma,
                                           std::size_t count, const RngFactory& rng);

}  // namespace wdens
