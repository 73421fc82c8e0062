#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "coldstandby/copula.hpp"
#include "coldstandby/errors.hpp"

using namespace coldstandby;

namespace {

double ks_uniform(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double d = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    d = std::max({d, (i + 1) / n - v[i], v[i] - i / n});
  }
  return d;
}

std::vector<double> column(const SampleMatrix& m, std::size_t c) {
  std::vector<double> out(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) out[r] = m(r, c);
  return out;
}

}  // namespace

TEST_CASE("copula cdf reference values") {
  const std::vector<double> half = {0.5, 0.5};
  const std::vector<double> ones = {1.0, 1.0, 1.0};
  CHECK(copula_cdf(CopulaModel(Generator::independence(), CopulaMode::copula, 2), half) == doctest::Approx(0.25));
  CHECK(copula_cdf(CopulaModel(Generator::clayton(1), CopulaMode::copula, 2), half) == doctest::Approx(1.0 / 3));
  CHECK(copula_cdf(CopulaModel(Generator::gumbel_barnett(), CopulaMode::copula, 3), ones) == 1.0);
  CHECK(copula_cdf(CopulaModel(Generator::clayton(2.5), CopulaMode::survival, 3), ones) == 1.0);
  // Clayton(theta): (u^-theta + v^-theta - 1)^(-1/theta)
  const std::vector<double> uv = {0.3, 0.7};
  CHECK(copula_cdf(CopulaModel(Generator::clayton(2), CopulaMode::copula, 2), uv) ==
        doctest::Approx(std::pow(std::pow(0.3, -2) + std::pow(0.7, -2) - 1, -0.5)));
  const std::vector<double> bad = {0.5, 1.2};
  CHECK_THROWS_AS(copula_cdf(CopulaModel(Generator::clayton(1), CopulaMode::copula, 2), bad), DomainError);
  CHECK_THROWS_AS(copula_cdf(CopulaModel(Generator::clayton(1), CopulaMode::copula, 3), half), ContractError);
  CHECK_THROWS_AS(CopulaModel(Generator::clayton(1), CopulaMode::copula, 1), std::invalid_argument);
}

TEST_CASE("generator inverse and derivatives") {
  for (const auto& g : {Generator::clayton(1), Generator::clayton(0.3), Generator::gumbel_barnett(),
                        Generator::independence()}) {
    for (double t : {0.0, 1e-6, 0.1, 1.0, 7.5, 40.0}) {
      CHECK(std::abs(g.inverse(g.phi(t)) - t) <= 1e-10 * std::max(1.0, t));
      const double h = 1e-5 * std::max(1.0, t);
      if (t > h) {
        const double fd = (g.phi(t + h) - g.phi(t - h)) / (2 * h);
        CHECK(g.derivative(1, t) == doctest::Approx(fd).epsilon(1e-6));
        const double fd2 = (g.derivative(1, t + h) - g.derivative(1, t - h)) / (2 * h);
        CHECK(g.derivative(2, t) == doctest::Approx(fd2).epsilon(1e-6));
      }
    }
    CHECK(g.phi(0) == 1.0);
  }
}

TEST_CASE("log-convex generators") {
  const auto grid = default_generator_grid();
  CHECK(is_log_convex_generator(Generator::clayton(1), grid).holds);
  CHECK(is_log_convex_generator(Generator::independence(), grid).holds);
  CHECK(is_log_convex_generator(Generator::gumbel_barnett(), grid).holds);
}

TEST_CASE("independence sampler gives uncorrelated uniforms") {
  RandomStream rng(1);
  const auto m = sample_uniforms(CopulaModel(Generator::independence(), CopulaMode::copula, 2), 100000, rng);
  const auto a = column(m, 0), b = column(m, 1);
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) ma += a[i], mb += b[i];
  ma /= a.size(), mb /= b.size();
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  CHECK(std::abs(sab / std::sqrt(saa * sbb)) <= 4 / std::sqrt(100000.0));
}

TEST_CASE("bivariate Clayton draws match the closed-form conditional inverse") {
  for (double theta : {1.0, 3.0, 0.4}) {
    const CopulaModel model(Generator::clayton(theta), CopulaMode::copula, 2);
    CopulaSampler sampler(model);
    RandomStream rng(77), replay(77);
    double u[2];
    for (int i = 0; i < 2000; ++i) {
      sampler.draw_uniforms(rng, u, i);
      const double u1 = replay.uniform(), v = replay.uniform();
      const double u2 = std::pow((std::pow(v, -theta / (1 + theta)) - 1) * std::pow(u1, -theta) + 1, -1 / theta);
      CHECK(u[0] == u1);
      CHECK(std::abs(u[1] - u2) <= 1e-9 * std::max(u2, 1e-3));
    }
    CHECK(sampler.max_residual() <= kConditionalTolerance);
  }
}

TEST_CASE("Clayton(1) joint cdf at the medians") {
  const std::vector<Distribution> marg = {Distribution::exponential(0.8), Distribution::exponential(0.3)};
  const double m1 = marg[0].quantile(0.5), m2 = marg[1].quantile(0.5);
  for (auto mode : {CopulaMode::copula, CopulaMode::survival}) {
    RandomStream rng(5);
    const auto s = sample_joint(CopulaModel(Generator::clayton(1), mode, 2), marg, 1'000'000, rng);
    std::size_t hits = 0;
    for (std::size_t r = 0; r < s.rows; ++r) {
      // Copula mode: C is the joint CDF. Survival mode: C is the joint survival function.
      hits += mode == CopulaMode::copula ? (s(r, 0) <= m1 && s(r, 1) <= m2) : (s(r, 0) > m1 && s(r, 1) > m2);
    }
    CHECK(std::abs(static_cast<double>(hits) / s.rows - 1.0 / 3) <= 0.005);
  }
}

TEST_CASE("empirical copula converges on a 5x5 grid") {
  const std::size_t n = 200000;
  for (const auto& g : {Generator::clayton(1), Generator::gumbel_barnett()}) {
    const CopulaModel model(g, CopulaMode::copula, 2);
    RandomStream rng(12);
    const auto s = sample_uniforms(model, n, rng);
    for (double a : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      for (double b : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        std::size_t hits = 0;
        for (std::size_t r = 0; r < n; ++r) hits += s(r, 0) <= a && s(r, 1) <= b;
        const std::vector<double> ab = {a, b};
        CHECK(std::abs(static_cast<double>(hits) / n - copula_cdf(model, ab)) <= 3 / std::sqrt(double(n)));
      }
    }
  }
}

TEST_CASE("trivariate Gumbel-Barnett uniforms") {
  const CopulaModel model(Generator::gumbel_barnett(), CopulaMode::copula, 3);
  RandomStream rng(3);
  const std::size_t n = 1'000'000;
  const auto s = sample_uniforms(model, n, rng);
  for (std::size_t c = 0; c < 3; ++c) CHECK(ks_uniform(column(s, c)) <= 0.002);

  // Trivariate box probability against the empirical frequency.
  const std::vector<double> lo = {0.2, 0.1, 0.3}, hi = {0.8, 0.6, 0.9};
  std::size_t hits = 0;
  for (std::size_t r = 0; r < n; ++r) {
    bool in = true;
    for (std::size_t c = 0; c < 3; ++c) in = in && s(r, c) > lo[c] && s(r, c) <= hi[c];
    hits += in;
  }
  CHECK(std::abs(static_cast<double>(hits) / n - copula_box_probability(model, lo, hi)) <= 3 / std::sqrt(double(n)));
}

TEST_CASE("conditional residuals stay below tolerance") {
  const CopulaModel model(Generator::gumbel_barnett(), CopulaMode::survival, 3);
  CopulaSampler sampler(model);
  RandomStream rng(99);
  double u[3];
  for (int i = 0; i < 100000; ++i) sampler.draw_uniforms(rng, u, i);
  CHECK(sampler.max_excess() <= kConditionalTolerance);
}

TEST_CASE("survival mode maps uniforms through the survival quantile") {
  const std::vector<Distribution> marg = {Distribution::exponential(1), Distribution::beta(3, 2)};
  const CopulaSampler s(CopulaModel(Generator::clayton(1), CopulaMode::survival, 2));
  const std::vector<double> u = {0.25, 0.9};
  std::vector<double> x(2);
  s.to_lifetimes(u, marg, x);
  CHECK(x[0] == doctest::Approx(-std::log(0.25)));
  CHECK(marg[1].survival(x[1]) == doctest::Approx(0.9));
  const auto csv = SampleMatrix{1, 2, {1.5, 2.0}}.to_csv();
  CHECK(csv == "x1,x2\n1.5,2\n");
}
