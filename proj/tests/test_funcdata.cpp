#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "wdens/grid.hpp"
#include "wdens/privacy.hpp"
#include "wdens/simulate.hpp"

using namespace wdens;

TEST_CASE("grid is equispaced on [0,1]") {
  Grid g(101);
  CHECK(g.t(0) == 0.0);
  CHECK(g.t(100) == 1.0);
  CHECK(g.dt() == doctest::Approx(0.01).epsilon(1e-15));
  CHECK_THROWS_AS(Grid(1), invalid_parameter_error);
}

TEST_CASE("wiener path with sigma=0 is identically zero") {
  RngFactory rng(1);
  auto gen = rng.stream();
  const auto path = simulate_wiener(Grid(101), 0.0, gen);
  for (double v : path.values) CHECK(v == 0.0);
}

TEST_CASE("wiener paths start at zero for every draw") {
  RngFactory rng(2);
  for (int i = 0; i < 200; ++i) {
    auto gen = rng.stream(i);
    CHECK(simulate_wiener(Grid(51), 0.7, gen).values[0] == 0.0);
  }
}

TEST_CASE("wiener rejects non-finite sigma") {
  RngFactory rng(3);
  auto gen = rng.stream();
  CHECK_THROWS_AS(simulate_wiener(Grid(11), std::nan(""), gen), invalid_parameter_error);
  CHECK_THROWS_AS(simulate_wiener(Grid(11), -1.0, gen), invalid_parameter_error);
}

TEST_CASE("wiener increment variance matches dt at sigma=1") {
  const Grid g(101);
  RngFactory rng(4);
  std::vector<double> increments;
  increments.reserve(100000);
  for (int i = 0; increments.size() < 100000; ++i) {
    auto gen = rng.stream(i);
    const auto p = simulate_wiener(g, 1.0, gen);
    for (int k = 1; k < g.T; ++k) increments.push_back(p.values[k] - p.values[k - 1]);
  }
  const double var = testsupport::sample_variance(increments);
  // var of the sample variance of N(0, s^2) is ~ 2 s^4 / (n-1)
  const double se = std::sqrt(2.0 / (increments.size() - 1)) * g.dt();
  CHECK(std::abs(var - g.dt()) < 3.0 * se);
}

TEST_CASE("wiener increments are uncorrelated at lag 1") {
  const Grid g(101);
  RngFactory rng(5);
  std::vector<double> prods;
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (int i = 0; count < 100000; ++i) {
    auto gen = rng.stream(i);
    const auto p = simulate_wiener(g, 1.0, gen);
    std::vector<double> inc(g.T - 1);
    for (int k = 0; k + 1 < g.T; ++k) inc[k] = p.values[k + 1] - p.values[k];
    for (int k = 0; k + 1 < static_cast<int>(inc.size()); ++k)
      prods.push_back(inc[k] * inc[k + 1]);
    for (double d : inc) sum_sq += d * d;
    count += inc.size();
  }
  const double autocorr = testsupport::mean(prods) / (sum_sq / count);
  const double se = 1.0 / std::sqrt(static_cast<double>(prods.size()));
  CHECK(std::abs(autocorr) < 3.0 * se);
}

TEST_CASE("signal coefficients have variance 1/600") {
  const ModelSpec model = ModelSpec::builtin(Setting::I);
  RngFactory rng(6);
  auto gen = rng.stream();
  std::vector<double> zs;
  zs.reserve(100000);
  while (zs.size() < 100000) {
    for (double z : draw_signal_coeffs(model, gen)) zs.push_back(z);
  }
  const double var = testsupport::sample_variance(zs);
  const double target = 1.0 / 600.0;
  // kurtosis of the mean of two uniforms is 12/5, so var(z^2) = (12/5 - 1) target^2
  const double se = std::sqrt((12.0 / 5.0 - 1.0) / zs.size()) * target;
  CHECK(std::abs(var - target) < 3.0 * se);
}

TEST_CASE("all-zero lambda yields X = 0 and Y = sigma W") {
  ModelSpec model = ModelSpec::builtin(Setting::I);
  std::fill(model.lambda.begin(), model.lambda.end(), 0.0);
  const Grid g(101);
  const Sample s = simulate_sample(model, 5, g, RngFactory(7));
  for (const auto& x : s.x)
    for (double v : x.values) CHECK(v == 0.0);
  // Y must then be a nontrivial Wiener path starting at zero.
  for (const auto& y : s.y) {
    CHECK(y.values[0] == 0.0);
    CHECK(std::abs(y.values[50]) > 0.0);
  }
}

TEST_CASE("setting (i): Monte-Carlo E||X'||^2 matches the closed form") {
  const ModelSpec model = ModelSpec::builtin(Setting::I);
  const Grid g(101);
  // Closed form: sum_j lambda_j Var(Z) ||phi_j'||^2 with ||phi_j'||^2 = pi^2 j^2.
  double closed = 0.0;
  for (int j = 1; j <= model.J; ++j)
    closed += model.lambda[j - 1] * (1.0 / 600.0) * M_PI * M_PI * j * j;

  RngFactory rng(8);
  std::vector<double> norms;
  norms.reserve(10000);
  for (int i = 0; i < 10000; ++i) {
    auto gen = rng.stream(i);
    const auto z = draw_signal_coeffs(model, gen);
    // analytic derivative on the grid, then trapezoid quadrature of its square
    std::vector<double> deriv_sq(g.T);
    for (int k = 0; k < g.T; ++k) {
      double d = 0.0;
      for (int j = 1; j <= model.J; ++j)
        d += std::sqrt(model.lambda[j - 1]) * z[j - 1] * model.phi_deriv(j, g.t(k));
      deriv_sq[k] = d * d;
    }
    norms.push_back(trapezoid(g, deriv_sq));
  }
  const double se = testsupport::se_of_mean(norms);
  CHECK(std::abs(testsupport::mean(norms) - closed) < 3.0 * se);
}

TEST_CASE("simulation is bit-reproducible under a fixed seed") {
  const ModelSpec model = ModelSpec::builtin(Setting::II);
  const Grid g(101);
  const Sample a = simulate_sample(model, 7, g, RngFactory(99));
  const Sample b = simulate_sample(model, 7, g, RngFactory(99));
  for (int i = 0; i < 7; ++i) {
    CHECK(a.y[i].values == b.y[i].values);
    CHECK(a.x[i].values == b.x[i].values);
  }
  const Sample c = simulate_sample(model, 7, g, RngFactory(100));
  CHECK(a.y[0].values != c.y[0].values);
}

TEST_CASE("built-in settings match their parameterizations") {
  const auto i = ModelSpec::builtin(Setting::I);
  CHECK(i.J == 20);
  CHECK(i.sigma == 0.1);
  CHECK(i.phi_family == PhiFamily::Sine);
  CHECK(i.lambda[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(i.lambda[19] == doctest::Approx(std::exp(-20.0)).epsilon(1e-15));
  const auto ii = ModelSpec::builtin(Setting::II);
  CHECK(ii.J == 40);
  CHECK(ii.sigma == 0.1);
  const auto iii = ModelSpec::builtin(Setting::III);
  CHECK(iii.J == 40);
  CHECK(iii.sigma == 0.075);
  const auto iv = ModelSpec::builtin(Setting::IV);
  CHECK(iv.J == 20);
  CHECK(iv.sigma == 0.075);
  CHECK(iv.phi_family == PhiFamily::CosineKappa);
  const auto v = ModelSpec::builtin(Setting::V);
  CHECK(v.phi_family == PhiFamily::SineKappa);
  // kappa(0) = 0 keeps X(0) = 0 in settings (iv) and (v).
  CHECK(iv.phi(3, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(v.phi(3, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("kappa-family derivatives match finite differences") {
  for (Setting s : {Setting::IV, Setting::V}) {
    const auto model = ModelSpec::builtin(s);
    const double h = 1e-6;
    for (int j : {1, 3, 7}) {
      for (double t : {0.1, 0.45, 0.9}) {
        const double fd = (model.phi(j, t + h) - model.phi(j, t - h)) / (2 * h);
        CHECK(model.phi_deriv(j, t) == doctest::Approx(fd).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("premask: constant path maps to zero; zero-start path is unchanged") {
  const Grid g(11);
  const std::vector<double> constant(g.T, 3.5);
  const auto masked = premask_subtract_start(g, constant);
  for (double v : masked.values) CHECK(v == 0.0);

  std::vector<double> zero_start(g.T);
  for (int k = 0; k < g.T; ++k) zero_start[k] = std::sin(2.0 * k);
  zero_start[0] = 0.0;
  const auto same = premask_subtract_start(g, zero_start);
  CHECK(same.values == zero_start);
}

TEST_CASE("premask weight: X = 1, w(t) = t gives the identity path t") {
  const Grid g(11);
  const std::vector<double> ones(g.T, 1.0);
  const auto masked = premask_weight(g, ones, [](double t) { return t; });
  for (int k = 0; k < g.T; ++k)
    CHECK(masked.values[k] == doctest::Approx(g.t(k)).epsilon(1e-15));
}

TEST_CASE("premask weight validates w(0) = 0 and w(1) = 1") {
  const Grid g(11);
  const std::vector<double> ones(g.T, 1.0);
  CHECK_THROWS_AS(premask_weight(g, ones, [](double) { return 0.5; }),
                  invalid_parameter_error);
  CHECK_THROWS_AS(premask_weight(g, ones, [](double t) { return 0.5 * t; }),
                  invalid_parameter_error);
}

TEST_CASE("privacy: beta = 2 gives 0; doubling alpha halves the bound") {
  CHECK(min_privacy_sigma({1.0, 2.0, 1.0}) == 0.0);
  const double base = min_privacy_sigma({1.0, 0.05, 1.0});
  CHECK(min_privacy_sigma({2.0, 0.05, 1.0}) == doctest::Approx(base / 2).epsilon(1e-15));
}

TEST_CASE("privacy: reference value and long-double oracle") {
  const double got = min_privacy_sigma({1.0, 0.05, 1.0});
  CHECK(got == doctest::Approx(5.4324).epsilon(2e-4));
  const long double oracle = 2.0L * sqrtl(2.0L * logl(2.0L / 0.05L));
  CHECK(std::abs(got - static_cast<double>(oracle)) < 1e-12);
}

TEST_CASE("privacy bound is monotone in its arguments") {
  for (double alpha : {0.5, 1.0, 2.0})
    for (double beta : {0.01, 0.1, 1.0})
      for (double c : {0.5, 1.0, 4.0}) {
        const double v = min_privacy_sigma({alpha, beta, c});
        CHECK(min_privacy_sigma({alpha * 1.5, beta, c}) < v);
        CHECK(min_privacy_sigma({alpha, beta * 1.5, c}) < v);
        CHECK(min_privacy_sigma({alpha, beta, c * 1.5}) > v);
      }
}

TEST_CASE("privacy budget validation") {
  CHECK_THROWS_AS(min_privacy_sigma({1.0, 2.5, 1.0}), invalid_parameter_error);
  CHECK_THROWS_AS(min_privacy_sigma({0.0, 0.5, 1.0}), invalid_parameter_error);
  CHECK_THROWS_AS(min_privacy_sigma({1.0, 0.5, -1.0}), invalid_parameter_error);
}

TEST_CASE("grid paths must start at zero") {
  CHECK_THROWS_AS(GridPath(Grid(3), {0.1, 0.2, 0.3}), invalid_parameter_error);
  CHECK_THROWS_AS(GridPath(Grid(3), {0.0, 0.2}), invalid_parameter_error);
}
