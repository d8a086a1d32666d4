#include "wdens/classify.hpp"

#include <cmath>

#include "wdens/parallel.hpp"
#include "wdens/projection.hpp"

namespace wdens {

namespace {

constexpr std::uint64_t kCvStreamTag = 0x6376;  // reference-path domain

DensityEstimate fit_class(const std::vector<GridPath>& paths, double sigma,
                          const TrainConfig& cfg, const RngFactory& cv_rng,
                          CvReport* report) {
  const EstimatedBasis est = estimate_basis(paths, cfg.basis_M);
  const ProjectionBasis basis = ProjectionBasis::estimated(est);
  // Both classes draw the reference paths from the same substream, so equal
  // training data yields an identical selection and fit.
  *report = select(paths, basis, cfg.grid, sigma, cfg.weight, cfg.cv_paths, cv_rng,
                   cfg.fallback, cfg.index_cap);
  return fit_dm(paths, basis, report->chosen_m, report->chosen_K, sigma, cfg.weight,
                cfg.index_cap);
}

}  // namespace

TrainedClassifier train_classifier(const std::vector<GridPath>& paths,
                                   const std::vector<int>& labels, double sigma,
                                   const TrainConfig& config, const RngFactory& rng) {
  if (paths.size() != labels.size() || paths.empty())
    throw invalid_parameter_error("train_classifier: paths/labels mismatch");
  std::vector<GridPath> class0, class1;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (labels[i] == 0)
      class0.push_back(paths[i]);
    else if (labels[i] == 1)
      class1.push_back(paths[i]);
    else
      throw invalid_parameter_error("train_classifier: labels must be 0 or 1");
  }
  if (class0.empty() || class1.empty())
    throw invalid_parameter_error("train_classifier: both classes must be present");

  TrainedClassifier clf;
  clf.sigma = sigma;
  if (config.priors) {
    const auto [p0, p1] = *config.priors;
    if (!(p0 >= 0.0) || !(p1 >= 0.0) || std::abs(p0 + p1 - 1.0) > 1e-12)
      throw invalid_parameter_error("train_classifier: priors must be >= 0 and sum to 1");
    clf.pi0 = p0;
    clf.pi1 = p1;
  } else {
    clf.pi0 = static_cast<double>(class0.size()) / paths.size();
    clf.pi1 = static_cast<double>(class1.size()) / paths.size();
  }

  const RngFactory cv_rng = rng.child(kCvStreamTag);
  clf.est0 = fit_class(class0, sigma, config, cv_rng, &clf.cv0);
  clf.est1 = fit_class(class1, sigma, config, cv_rng, &clf.cv1);
  return clf;
}

Classification classify_path(const TrainedClassifier& clf, const GridPath& y,
                             FallbackPolicy policy) {
  const double f0 = eval_dm_fallback(clf.est0, y, policy).value;
  const double f1 = eval_dm_fallback(clf.est1, y, policy).value;
  const double score = clf.pi1 * f1 - clf.pi0 * f0;
  return {score >= 0.0 ? 1 : 0, score};
}

std::vector<Classification> classify_batch(const TrainedClassifier& clf,
                                           const std::vector<GridPath>& ys,
                                           FallbackPolicy policy) {
  std::vector<Classification> out(ys.size());
  parallel_for(ys.size(), [&](std::size_t i) { out[i] = classify_path(clf, ys[i], policy); });
  return out;
}

}  // namespace wdens
