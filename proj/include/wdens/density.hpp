#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "wdens/basis.hpp"
#include "wdens/grid.hpp"
#include "wdens/hermite.hpp"
#include "wdens/projection.hpp"

namespace wdens {

inline constexpr std::uint64_t kDefaultIndexCap = 10'000'000;

enum class WeightRule { Hard, SoftLinear };

/// omega_K(degree): 1 for the hard rule, 1 - degree/(K+1) for the soft rule.
inline double weight_value(WeightRule rule, int K, int degree) {
  if (rule == WeightRule::Hard) return 1.0;
  return 1.0 - static_cast<double>(degree) / (K + 1);
}

/// How negative evaluations decrement (m, K) until the value turns positive.
enum class FallbackPolicy { JointDecrement, AlternateDecrement };

/// Fitted series estimator: unweighted coefficients over the graded-lex
/// simplex; weights are applied at evaluation, so one fit serves both weight
/// rules and every restriction to smaller (m', K').
struct DensityEstimate {
  int m = 1;
  int K = 0;
  double sigma = 1.0;
  WeightRule weight = WeightRule::Hard;
  ProjectionBasis basis = ProjectionBasis::sine(1);
  int n = 0;
  Grid grid{2};
  std::shared_ptr<const IndexSet> indices;
  std::vector<double> coeffs;
};

DensityEstimate fit_dm(const std::vector<GridPath>& sample, const ProjectionBasis& basis,
                       int m, int K, double sigma, WeightRule weight,
                       std::uint64_t index_cap = kDefaultIndexCap);

double eval_dm(const DensityEstimate& est, const GridPath& u);
std::vector<double> eval_dm_batch(const DensityEstimate& est,
                                  const std::vector<GridPath>& paths);

struct FallbackResult {
  double value;  // > 0
  int used_m;
  int used_K;
};

/// eval_dm if positive; otherwise walks the (m, K) decrement path, re-reading
/// the stored coefficients restricted to each smaller index set, until the
/// value is positive (K = 0 yields 1, so this always terminates).
FallbackResult eval_dm_fallback(const DensityEstimate& est, const GridPath& u,
                                FallbackPolicy policy = FallbackPolicy::JointDecrement);
std::vector<FallbackResult> eval_dm_fallback_batch(
    const DensityEstimate& est, const std::vector<GridPath>& paths,
    FallbackPolicy policy = FallbackPolicy::JointDecrement);

/// Single-parameter box estimator: index set {0..K}^K over the first K
/// coordinates, no weights.
struct DnEstimate {
  int K = 0;
  double sigma = 1.0;
  ProjectionBasis basis = ProjectionBasis::sine(1);
  int n = 0;
  Grid grid{2};
  std::shared_ptr<const IndexSet> indices;
  std::vector<double> coeffs;
};

DnEstimate fit_dn(const std::vector<GridPath>& sample, const ProjectionBasis& basis, int K,
                  double sigma, std::uint64_t index_cap = kDefaultIndexCap);

double eval_dn(const DnEstimate& est, const GridPath& u);
std::vector<double> eval_dn_batch(const DnEstimate& est, const std::vector<GridPath>& paths);

/// eval_dn if positive; otherwise the largest K' <= K with a positive value.
FallbackResult eval_dn_fallback(const DnEstimate& est, const GridPath& u);
std::vector<FallbackResult> eval_dn_fallback_batch(const DnEstimate& est,
                                                   const std::vector<GridPath>& paths);

namespace detail {

/// Per-evaluation-point sums of coeff * tensor (and optionally tensor^2),
/// binned by (degree, last active coordinate). Restricting an estimate to any
/// (m', K') <= (m, K) is a partial sum over these bins, which makes fallback
/// paths and cross-validation grids cheap.
struct RestrictionBins {
  int max_degree;
  int m;
  std::vector<double> coeff_tensor;  // (max_degree+1) x (m+1)
  std::vector<double> tensor_sq;     // same shape; empty unless requested

  double& ct(int d, int mc) { return coeff_tensor[d * (m + 1) + mc]; }
  double ct(int d, int mc) const { return coeff_tensor[d * (m + 1) + mc]; }
  double& ts(int d, int mc) { return tensor_sq[d * (m + 1) + mc]; }
  double ts(int d, int mc) const { return tensor_sq[d * (m + 1) + mc]; }
};

RestrictionBins make_bins(const IndexSet& set, const std::vector<double>& coeffs,
                          const HermiteTable& table, std::size_t point, bool with_squares);

/// Sum of omega_{K'}(d) * coeff_tensor over the restriction (m', K').
double restricted_value(const RestrictionBins& bins, WeightRule rule, int m_r, int K_r);

/// Leave-one-out value at a restriction from the bins of the held-out point:
/// (n * sum(w * coeff_tensor) - sum(w * tensor_sq)) / (n - 1).
double restricted_loo_value(const RestrictionBins& bins, WeightRule rule, int m_r, int K_r,
                            int n);

/// Next (m, K) on the fallback decrement path; K reaches 0 in finitely many steps.
struct FallbackStepper {
  int m, K;
  FallbackPolicy policy;
  bool decrement_K_next = true;  // used by the alternating policy
  void step();
};

/// DN bins: 1-D restriction by c = max(largest entry, last active coordinate).
struct DnBins {
  int K;
  std::vector<double> coeff_tensor;  // K+1 cells
  std::vector<double> tensor_sq;
};

DnBins make_dn_bins(const IndexSet& set, const std::vector<double>& coeffs,
                    const HermiteTable& table, std::size_t point, bool with_squares);
double dn_restricted_value(const DnBins& bins, int K_r);
double dn_restricted_loo_value(const DnBins& bins, int K_r, int n);

/// Scaled coefficient table for a batch of paths against est's basis.
HermiteTable scaled_table(const ProjectionBasis& basis, const Grid& grid, int m, int K,
                          double sigma, const std::vector<GridPath>& paths);

}  // namespace detail

}  // namespace wdens
