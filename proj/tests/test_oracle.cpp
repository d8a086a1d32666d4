#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "wdens/oracle.hpp"
#include "wdens/projection.hpp"
#include "wdens/simulate.hpp"

using namespace wdens;

namespace {

// x0(t) = c t with derivative c.
PathWithDeriv linear_atom(const Grid& g, double c) {
  std::vector<double> v(g.T), d(g.T, c);
  for (int k = 0; k < g.T; ++k) v[k] = c * g.t(k);
  return {GridPath(g, std::move(v)), std::move(d)};
}

// x0' = sum_j coeffs[j-1] * sqrt(2) sin(pi j t); x0 integrated in closed form.
PathWithDeriv sine_combo_atom(const Grid& g, const std::vector<double>& coeffs) {
  std::vector<double> v(g.T, 0.0), d(g.T, 0.0);
  for (int k = 0; k < g.T; ++k) {
    const double t = g.t(k);
    for (std::size_t j = 1; j <= coeffs.size(); ++j) {
      d[k] += coeffs[j - 1] * std::sqrt(2.0) * std::sin(M_PI * j * t);
      v[k] += coeffs[j - 1] * std::sqrt(2.0) * (1.0 - std::cos(M_PI * j * t)) / (M_PI * j);
    }
  }
  v[0] = 0.0;
  return {GridPath(g, std::move(v)), std::move(d)};
}

GridPath ramp(const Grid& g) {
  std::vector<double> v(g.T);
  for (int k = 0; k < g.T; ++k) v[k] = g.t(k);
  return GridPath(g, std::move(v));
}

std::vector<GridPath> wiener_sample(const Grid& g, double sigma, int n, std::uint64_t seed) {
  RngFactory rng(seed);
  std::vector<GridPath> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    auto gen = rng.stream(i);
    out.push_back(simulate_wiener(g, sigma, gen));
  }
  return out;
}

}  // namespace

TEST_CASE("point mass at X = 0 gives density 1 everywhere") {
  const Grid g(101);
  const KnownSignalLaw law = PointMassLaw{linear_atom(g, 0.0)};
  for (const auto& v : wiener_sample(g, 1.0, 5, 1))
    CHECK(true_density(law, v, 1.0, RngFactory(2)).value == 1.0);
}

TEST_CASE("constant derivative against the ramp: closed-form exponent") {
  const Grid g(101);
  const double c = 1.0, sigma = 1.0;
  const KnownSignalLaw law = PointMassLaw{linear_atom(g, c)};
  const double got = true_density(law, ramp(g), sigma, RngFactory(3)).value;
  CHECK(std::abs(got - std::exp(0.5)) < 1e-3);
  // general closed form exp(c/s^2 - c^2/(2 s^2))
  const double c2 = -0.8, s2 = 0.5;
  const KnownSignalLaw law2 = PointMassLaw{linear_atom(g, c2)};
  const double expected = std::exp(c2 / (s2 * s2) - c2 * c2 / (2 * s2 * s2));
  CHECK(true_density(law2, ramp(g), s2, RngFactory(4)).value ==
        doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("true density is strictly positive") {
  const Grid g(101);
  const KnownSignalLaw law = FiniteMixtureLaw{
      {0.3, 0.7}, {sine_combo_atom(g, {0.5, -0.3}), linear_atom(g, 1.5)}};
  for (const auto& v : wiener_sample(g, 0.5, 50, 5))
    CHECK(true_density(law, v, 0.5, RngFactory(6)).value > 0.0);
}

TEST_CASE("mixture weights must be positive and sum to one") {
  const Grid g(51);
  const GridPath v = GridPath::zeros(g);
  CHECK_THROWS_AS(
      true_density(FiniteMixtureLaw{{0.5, 0.6}, {linear_atom(g, 0.0), linear_atom(g, 1.0)}},
                   v, 1.0, RngFactory(7)),
      invalid_parameter_error);
  CHECK_THROWS_AS(
      true_density(FiniteMixtureLaw{{1.5, -0.5}, {linear_atom(g, 0.0), linear_atom(g, 1.0)}},
                   v, 1.0, RngFactory(7)),
      invalid_parameter_error);
}

TEST_CASE("density integrates to one against the reference measure") {
  const Grid g(101);
  const double sigma = 1.0;
  const KnownSignalLaw law = PointMassLaw{sine_combo_atom(g, {0.6, -0.4, 0.3})};
  const auto vs = wiener_sample(g, sigma, 10000, 8);
  std::vector<double> vals;
  vals.reserve(vs.size());
  for (const auto& v : vs) vals.push_back(true_density(law, v, sigma, RngFactory(9)).value);
  const double mean = testsupport::mean(vals);
  const double se = testsupport::se_of_mean(vals);
  CHECK(std::abs(mean - 1.0) < 3.0 * se);
}

TEST_CASE("simulation-model oracle: two independent runs agree") {
  const Grid g(101);
  const ModelSpec model = ModelSpec::builtin(Setting::I);
  const KnownSignalLaw law = SimModelLaw{model, g, 100000};
  const auto vs = wiener_sample(g, model.sigma, 10, 10);
  const auto run1 = true_density_batch(law, vs, model.sigma, RngFactory(11));
  const auto run2 = true_density_batch(law, vs, model.sigma, RngFactory(12));
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const double combined =
        std::sqrt(run1[i].std_error * run1[i].std_error + run2[i].std_error * run2[i].std_error);
    CHECK(std::abs(run1[i].value - run2[i].value) <= 3.0 * combined);
    CHECK(run1[i].std_error > 0.0);
  }
}

TEST_CASE("single-point and batch simulation oracles agree in distribution") {
  const Grid g(101);
  const ModelSpec model = ModelSpec::builtin(Setting::I);
  const KnownSignalLaw law = SimModelLaw{model, g, 40000};
  const auto vs = wiener_sample(g, model.sigma, 3, 13);
  const auto batch = true_density_batch(law, vs, model.sigma, RngFactory(14));
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto single = true_density(law, vs[i], model.sigma, RngFactory(15).child(i));
    const double combined = std::sqrt(single.std_error * single.std_error +
                                      batch[i].std_error * batch[i].std_error);
    CHECK(std::abs(single.value - batch[i].value) <= 4.0 * combined);
  }
}

TEST_CASE("sieve of the zero signal is 1 for any projection vector") {
  const Grid g(101);
  const KnownSignalLaw law = PointMassLaw{linear_atom(g, 0.0)};
  const auto basis = ProjectionBasis::sine(6);
  CHECK(sieve_density(law, basis, {0.4, -2.0, 0.1}, 1.0, RngFactory(16)).value == 1.0);
}

TEST_CASE("Lemma-style degeneracy: full-energy sieve equals the true density") {
  const Grid g(101);
  const double sigma = 1.0;
  // x0' lies in the span of the first three sine functions
  const KnownSignalLaw law = PointMassLaw{sine_combo_atom(g, {0.7, -0.5, 0.25})};
  const auto basis = ProjectionBasis::sine(8);
  for (const auto& v : wiener_sample(g, sigma, 20, 17)) {
    std::vector<double> s(3);
    for (int j = 1; j <= 3; ++j) s[j - 1] = ito_coefficient(v, basis, j);
    const double sieve = sieve_density(law, basis, s, sigma, RngFactory(18)).value;
    const double truth = true_density(law, v, sigma, RngFactory(19)).value;
    CHECK(std::abs(sieve - truth) < 1e-3);
  }
}

TEST_CASE("tower property: sieve means are 1 for any truncation") {
  const Grid g(101);
  const double sigma = 1.0;
  const KnownSignalLaw law = PointMassLaw{sine_combo_atom(g, {0.6, -0.4, 0.3, 0.2})};
  const auto basis = ProjectionBasis::sine(8);
  const auto vs = wiener_sample(g, sigma, 10000, 20);
  for (int m : {1, 3}) {
    std::vector<double> vals;
    vals.reserve(vs.size());
    for (const auto& v : vs) {
      std::vector<double> s(m);
      for (int j = 1; j <= m; ++j) s[j - 1] = ito_coefficient(v, basis, j);
      vals.push_back(sieve_density(law, basis, s, sigma, RngFactory(21)).value);
    }
    const double mean = testsupport::mean(vals);
    const double se = testsupport::se_of_mean(vals);
    CHECK(std::abs(mean - 1.0) < 3.0 * se);
  }
}

TEST_CASE("sieve risk is non-increasing in m (paired Monte Carlo)") {
  const Grid g(101);
  const double sigma = 1.0;
  std::vector<double> coeffs(8);
  for (int j = 1; j <= 8; ++j) coeffs[j - 1] = 0.65 / std::sqrt(static_cast<double>(j));
  const KnownSignalLaw law = PointMassLaw{sine_combo_atom(g, coeffs)};
  const auto basis = ProjectionBasis::sine(8);
  const auto vs = wiener_sample(g, sigma, 10000, 22);

  const std::vector<int> ms{1, 2, 4, 8};
  std::vector<std::vector<double>> se_by_m(ms.size());
  for (std::size_t a = 0; a < ms.size(); ++a) se_by_m[a].reserve(vs.size());
  for (const auto& v : vs) {
    const double truth = true_density(law, v, sigma, RngFactory(23)).value;
    std::vector<double> s(8);
    for (int j = 1; j <= 8; ++j) s[j - 1] = ito_coefficient(v, basis, j);
    for (std::size_t a = 0; a < ms.size(); ++a) {
      const std::vector<double> s_m(s.begin(), s.begin() + ms[a]);
      const double sieve = sieve_density(law, basis, s_m, sigma, RngFactory(24)).value;
      se_by_m[a].push_back((sieve - truth) * (sieve - truth));
    }
  }
  for (std::size_t a = 0; a + 1 < ms.size(); ++a) {
    std::vector<double> diff(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i) diff[i] = se_by_m[a + 1][i] - se_by_m[a][i];
    const double mean = testsupport::mean(diff);
    const double se = testsupport::se_of_mean(diff);
    CHECK(mean <= 3.0 * se);
  }
}

TEST_CASE("squared error quartiles: exactness and the worked example") {
  const Quartiles zero = squared_error_summary({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0});
  CHECK(zero.median == 0.0);
  CHECK(zero.q1 == 0.0);
  CHECK(zero.q3 == 0.0);
  // SE list {1,2,3,4}: estimates sqrt each, truths zero
  const Quartiles q =
      squared_error_summary({1.0, std::sqrt(2.0), std::sqrt(3.0), 2.0}, {0, 0, 0, 0});
  CHECK(q.median == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(q.q1 == doctest::Approx(1.75).epsilon(1e-12));
  CHECK(q.q3 == doctest::Approx(3.25).epsilon(1e-12));
}

TEST_CASE("scaling the errors by c scales the quartiles by c^2") {
  std::vector<double> est{0.5, 1.7, -0.3, 2.2, 0.9}, truth(5, 0.0);
  const Quartiles base = squared_error_summary(est, truth);
  std::vector<double> scaled;
  for (double e : est) scaled.push_back(3.0 * e);
  const Quartiles big = squared_error_summary(scaled, truth);
  CHECK(big.median == doctest::Approx(9.0 * base.median).epsilon(1e-12));
  CHECK(big.q1 == doctest::Approx(9.0 * base.q1).epsilon(1e-12));
  CHECK(big.q3 == doctest::Approx(9.0 * base.q3).epsilon(1e-12));
}

TEST_CASE("summary rejects length mismatches") {
  CHECK_THROWS_AS(squared_error_summary({1.0}, {1.0, 2.0}), invalid_parameter_error);
  CHECK_THROWS_AS(mean_squared_difference({1.0}, {}), invalid_parameter_error);
}

TEST_CASE("mean squared difference") {
  CHECK(mean_squared_difference({1.0, 2.0}, {1.0, 2.0}) == 0.0);
  CHECK(mean_squared_difference({1.0, 3.0}, {0.0, 1.0}) == doctest::Approx(2.5));
}
