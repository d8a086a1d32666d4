#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "wdens/classify.hpp"
#include "wdens/oracle.hpp"

using namespace wdens;

namespace {

// Two point-mass populations: class 0 drifts at rate -c, class 1 at +c.
struct TwoPopulation {
  std::vector<GridPath> paths;
  std::vector<int> labels;
};

GridPath drifted_wiener(const Grid& g, double drift, double sigma, std::mt19937_64& gen) {
  auto w = simulate_wiener(g, sigma, gen);
  for (int k = 0; k < g.T; ++k) w.values[k] += drift * g.t(k);
  return w;
}

TwoPopulation make_two_population(const Grid& g, int per_class, double c, double sigma,
                                  std::uint64_t seed) {
  TwoPopulation out;
  RngFactory rng(seed);
  for (int i = 0; i < per_class; ++i) {
    auto g0 = rng.child(0).stream(i);
    out.paths.push_back(drifted_wiener(g, -c, sigma, g0));
    out.labels.push_back(0);
    auto g1 = rng.child(1).stream(i);
    out.paths.push_back(drifted_wiener(g, +c, sigma, g1));
    out.labels.push_back(1);
  }
  return out;
}

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.basis_M = 10;
  cfg.grid = CvGrid::practical(3, 6);
  cfg.cv_paths = 2000;
  return cfg;
}

}  // namespace

TEST_CASE("balanced labels give priors 1/2") {
  const Grid g(101);
  const auto data = make_two_population(g, 60, 2.0, 1.0, 1);
  const auto clf = train_classifier(data.paths, data.labels, 1.0, small_config(), RngFactory(2));
  CHECK(clf.pi0 == 0.5);
  CHECK(clf.pi1 == 0.5);
}

TEST_CASE("empirical priors follow the class frequencies") {
  const Grid g(101);
  auto data = make_two_population(g, 40, 2.0, 1.0, 3);
  // drop 10 class-0 paths
  TwoPopulation unbalanced;
  int dropped = 0;
  for (std::size_t i = 0; i < data.paths.size(); ++i) {
    if (data.labels[i] == 0 && dropped < 10) {
      ++dropped;
      continue;
    }
    unbalanced.paths.push_back(data.paths[i]);
    unbalanced.labels.push_back(data.labels[i]);
  }
  const auto clf =
      train_classifier(unbalanced.paths, unbalanced.labels, 1.0, small_config(), RngFactory(4));
  CHECK(clf.pi0 == doctest::Approx(30.0 / 70.0).epsilon(1e-12));
  CHECK(clf.pi1 == doctest::Approx(40.0 / 70.0).epsilon(1e-12));
}

TEST_CASE("single-class input is rejected") {
  const Grid g(51);
  RngFactory rng(5);
  std::vector<GridPath> paths;
  std::vector<int> labels;
  for (int i = 0; i < 10; ++i) {
    auto gen = rng.stream(i);
    paths.push_back(simulate_wiener(g, 1.0, gen));
    labels.push_back(1);
  }
  CHECK_THROWS_AS(train_classifier(paths, labels, 1.0, small_config(), RngFactory(6)),
                  invalid_parameter_error);
}

TEST_CASE("prior override must sum to one") {
  const Grid g(101);
  const auto data = make_two_population(g, 20, 2.0, 1.0, 7);
  TrainConfig cfg = small_config();
  cfg.priors = {{0.3, 0.8}};
  CHECK_THROWS_AS(train_classifier(data.paths, data.labels, 1.0, cfg, RngFactory(8)),
                  invalid_parameter_error);
}

TEST_CASE("permuting the labels swaps the two fitted densities") {
  const Grid g(101);
  const auto data = make_two_population(g, 50, 2.0, 1.0, 9);
  std::vector<int> flipped(data.labels.size());
  for (std::size_t i = 0; i < flipped.size(); ++i) flipped[i] = 1 - data.labels[i];
  const auto a = train_classifier(data.paths, data.labels, 1.0, small_config(), RngFactory(10));
  const auto b = train_classifier(data.paths, flipped, 1.0, small_config(), RngFactory(10));
  CHECK(a.pi0 == b.pi1);
  CHECK(a.est0.m == b.est1.m);
  CHECK(a.est0.K == b.est1.K);
  CHECK(a.est0.coeffs == b.est1.coeffs);
  CHECK(a.est1.coeffs == b.est0.coeffs);
}

TEST_CASE("identical data in both classes gives identical class densities") {
  const Grid g(101);
  RngFactory rng(11);
  std::vector<GridPath> paths;
  std::vector<int> labels;
  for (int i = 0; i < 40; ++i) {
    auto gen = rng.stream(i);
    const auto p = drifted_wiener(g, 1.0, 1.0, gen);
    paths.push_back(p);
    labels.push_back(0);
    paths.push_back(p);
    labels.push_back(1);
  }
  const auto clf = train_classifier(paths, labels, 1.0, small_config(), RngFactory(12));
  CHECK(clf.est0.m == clf.est1.m);
  CHECK(clf.est0.K == clf.est1.K);
  CHECK(clf.est0.coeffs == clf.est1.coeffs);
}

TEST_CASE("ties and prior dominance label as class 1") {
  const Grid g(101);
  RngFactory rng(13);
  std::vector<GridPath> paths;
  std::vector<int> labels;
  for (int i = 0; i < 30; ++i) {
    auto gen = rng.stream(i);
    const auto p = drifted_wiener(g, 0.5, 1.0, gen);
    paths.push_back(p);
    labels.push_back(0);
    paths.push_back(p);
    labels.push_back(1);
  }
  auto clf = train_classifier(paths, labels, 1.0, small_config(), RngFactory(14));
  // identical densities, equal priors: the >= rule labels 1
  auto gen = rng.stream(999);
  const auto probe = drifted_wiener(g, 0.0, 1.0, gen);
  CHECK(classify_path(clf, probe).label == 1);
  // prior dominance with identical densities
  clf.pi0 = 0.3;
  clf.pi1 = 0.7;
  CHECK(classify_path(clf, probe).label == 1);
}

TEST_CASE("labels are invariant to a common positive scaling of both densities") {
  const Grid g(101);
  const auto data = make_two_population(g, 80, 2.0, 1.0, 15);
  auto clf = train_classifier(data.paths, data.labels, 1.0, small_config(), RngFactory(16));
  RngFactory rng(17);
  std::vector<GridPath> probes;
  for (int i = 0; i < 40; ++i) {
    auto gen = rng.stream(i);
    probes.push_back(drifted_wiener(g, (i % 2 ? 2.0 : -2.0), 1.0, gen));
  }
  auto scaled = clf;
  for (double& c : scaled.est0.coeffs) c *= 3.7;
  for (double& c : scaled.est1.coeffs) c *= 3.7;
  for (const auto& p : probes) {
    // scaling is only meaningful where no fallback floor is hit
    const auto f0 = eval_dm_fallback(clf.est0, p);
    const auto f1 = eval_dm_fallback(clf.est1, p);
    if (f0.used_K == 0 || f1.used_K == 0) continue;
    CHECK(classify_path(scaled, p).label == classify_path(clf, p).label);
  }
}

TEST_CASE("well-separated point masses: accuracy beats 0.75 and tracks the oracle") {
  const Grid g(101);
  const double c = 2.0, sigma = 1.0;
  const auto data = make_two_population(g, 200, c, sigma, 18);
  TrainConfig cfg = small_config();
  const auto clf = train_classifier(data.paths, data.labels, sigma, cfg, RngFactory(19));

  const auto test_set = make_two_population(g, 50, c, sigma, 20);
  const auto preds = classify_batch(clf, test_set.paths);
  int correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i)
    correct += preds[i].label == test_set.labels[i];
  const double acc = static_cast<double>(correct) / preds.size();

  // oracle Bayes rule from the exact point-mass densities
  std::vector<double> d0(g.T, -c), d1(g.T, +c);
  std::vector<double> x0(g.T), x1(g.T);
  for (int k = 0; k < g.T; ++k) {
    x0[k] = -c * g.t(k);
    x1[k] = +c * g.t(k);
  }
  const KnownSignalLaw law0 = PointMassLaw{{GridPath(g, x0), d0}};
  const KnownSignalLaw law1 = PointMassLaw{{GridPath(g, x1), d1}};
  int oracle_correct = 0;
  for (std::size_t i = 0; i < test_set.paths.size(); ++i) {
    const double f0 = true_density(law0, test_set.paths[i], sigma, RngFactory(0)).value;
    const double f1 = true_density(law1, test_set.paths[i], sigma, RngFactory(0)).value;
    const int label = 0.5 * f1 >= 0.5 * f0 ? 1 : 0;
    oracle_correct += label == test_set.labels[i];
  }
  const double oracle_acc = static_cast<double>(oracle_correct) / test_set.paths.size();

  CHECK(acc > 0.75);
  CHECK(std::abs(acc - oracle_acc) <= 0.1);
}
