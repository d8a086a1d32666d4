#pragma once

#include <optional>
#include <vector>

#include "wdens/density.hpp"
#include "wdens/rng.hpp"
#include "wdens/selection.hpp"

namespace wdens {

struct TrainConfig {
  int basis_M = 20;
  CvGrid grid = CvGrid::practical(6, 10);
  WeightRule weight = WeightRule::SoftLinear;
  std::size_t cv_paths = 10000;
  FallbackPolicy fallback = FallbackPolicy::JointDecrement;
  std::uint64_t index_cap = kDefaultIndexCap;
  /// Empirical class frequencies unless overridden.
  std::optional<std::pair<double, double>> priors;
};

struct TrainedClassifier {
  DensityEstimate est0;
  DensityEstimate est1;
  double pi0 = 0.5;
  double pi1 = 0.5;
  double sigma = 1.0;
  CvReport cv0;
  CvReport cv1;
};

/// Fits one density per class: per-class basis estimation, CV selection with a
/// reference-path set shared by both classes, then the series fit.
TrainedClassifier train_classifier(const std::vector<GridPath>& paths,
                                   const std::vector<int>& labels, double sigma,
                                   const TrainConfig& config, const RngFactory& rng);

struct Classification {
  int label;     // 1 iff pi1 * f1 >= pi0 * f0
  double score;  // pi1 * f1 - pi0 * f0
};

Classification classify_path(const TrainedClassifier& clf, const GridPath& y,
                             FallbackPolicy policy = FallbackPolicy::JointDecrement);

std::vector<Classification> classify_batch(const TrainedClassifier& clf,
                                           const std::vector<GridPath>& ys,
                                           FallbackPolicy policy = FallbackPolicy::JointDecrement);

}  // namespace wdens
