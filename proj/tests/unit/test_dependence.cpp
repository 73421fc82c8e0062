#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <doctest.h>

#include "coldstandby/dependence.hpp"
#include "support.hpp"

using namespace coldstandby;

namespace {

JointLifetimeModel model(Generator g, CopulaMode mode, std::vector<Distribution> marginals) {
  const std::size_t n = marginals.size();
  return JointLifetimeModel(CopulaModel(g, mode, n), std::move(marginals));
}

std::vector<Distribution> example_32_marginals() {
  return {Distribution::scaled_exp_cdf(1), Distribution::beta(3, 2), Distribution::scaled_exp_cdf(2)};
}

// Smallest left/right ray sum, straight from the pmf.
double min_ray(const DiscreteBivariate& d, WsaiClass cls) {
  const std::size_t k = d.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      double s = 0;
      if (cls == WsaiClass::left) {
        for (std::size_t x = 0; x <= a; ++x) s += d.p(x, b) - d.p(b, x);
      } else {
        for (std::size_t x = b; x < k; ++x) s += d.p(a, x) - d.p(x, a);
      }
      best = std::min(best, s);
    }
  }
  return best;
}

DiscreteBivariate point_mass(std::size_t i, std::size_t j) {
  std::vector<double> p(9, 0.0);
  p[i * 3 + j] = 1.0;
  return DiscreteBivariate({1, 2, 3}, p);
}

}  // namespace

TEST_CASE("joint model validates its dimension") {
  CHECK_THROWS_AS(JointLifetimeModel(CopulaModel(Generator::clayton(1), CopulaMode::copula, 3),
                                     {Distribution::exponential(1), Distribution::exponential(2)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(DiscreteBivariate({1, 2}, {0.5, 0.5, 0.1, -0.1}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteBivariate({1, 2}, {0.5, 0.5, 0.1, 0.1}), std::invalid_argument);
}

TEST_CASE("LWSAI sufficient condition") {
  const auto ex31 = model(Generator::clayton(1), CopulaMode::copula,
                          {Distribution::exponential(0.8), Distribution::exponential(0.3)});
  CHECK(check_lwsai_sufficient(ex31).holds);

  const auto indep = model(Generator::independence(), CopulaMode::copula,
                           {Distribution::weibull(1.3), Distribution::weibull(1.3)});
  CHECK(check_lwsai_sufficient(indep).holds);

  const auto ex32 = check_lwsai_sufficient(model(Generator::gumbel_barnett(), CopulaMode::copula,
                                                 example_32_marginals()));
  CHECK_FALSE(ex32.holds);
  CHECK(ex32.generator_log_convex);
  CHECK_FALSE(ex32.chain_ok);
  CHECK(ex32.failing.first == 0);
  CHECK(ex32.failing.second == 1);
  CHECK(ex32.chain.at(0).direction == Direction::crossing);

  // Survival-copula models are out of scope for the LWSAI route.
  const auto wrong_mode = check_lwsai_sufficient(model(Generator::clayton(1), CopulaMode::survival,
                                                       {Distribution::exponential(0.8), Distribution::exponential(0.3)}));
  CHECK_FALSE(wrong_mode.holds);
  CHECK_FALSE(wrong_mode.mode_matches);
}

TEST_CASE("RWSAI sufficient condition") {
  CHECK(check_rwsai_sufficient(model(Generator::clayton(1), CopulaMode::survival,
                                     {Distribution::exponential(0.8), Distribution::exponential(0.3)}))
            .holds);
  CHECK(check_rwsai_sufficient(model(Generator::clayton(1), CopulaMode::survival,
                                     {Distribution::exponential(0.5), Distribution::exponential(0.4),
                                      Distribution::exponential(0.3)}))
            .holds);
  const auto reversed = check_rwsai_sufficient(model(Generator::clayton(1), CopulaMode::survival,
                                                     {Distribution::exponential(0.3), Distribution::exponential(0.8)}));
  CHECK_FALSE(reversed.holds);
  CHECK(reversed.failing.first == 0);
  CHECK(reversed.failing.second == 1);
  CHECK(reversed.chain.at(0).direction == Direction::first_dominates);

  const auto ex32 = check_rwsai_sufficient(model(Generator::gumbel_barnett(), CopulaMode::survival,
                                                 example_32_marginals()));
  CHECK_FALSE(ex32.holds);
  CHECK_FALSE(ex32.chain_ok);
}

TEST_CASE("swapping marginals out of order breaks a holding verdict") {
  std::vector<Distribution> m = {Distribution::exponential(0.9), Distribution::exponential(0.6),
                                 Distribution::exponential(0.2)};
  CHECK(check_lwsai_sufficient(model(Generator::clayton(2), CopulaMode::copula, m)).holds);
  std::swap(m[1], m[2]);
  const auto v = check_lwsai_sufficient(model(Generator::clayton(2), CopulaMode::copula, m));
  CHECK_FALSE(v.holds);
  CHECK(v.failing.first == 1);
  CHECK(v.failing.second == 2);
}

TEST_CASE("exact discrete checkers") {
  const DiscreteBivariate sym({1, 2, 3}, {0.1, 0.05, 0.1, 0.05, 0.2, 0.15, 0.1, 0.15, 0.1});
  for (const auto& v : {check_lwsai_discrete_exact(sym), check_rwsai_discrete_exact(sym)}) {
    CHECK(v.holds);
    CHECK(v.min_slack == doctest::Approx(0.0).scale(1));
  }
  CHECK(check_lwsai_discrete_exact(point_mass(0, 1)).holds);
  CHECK_FALSE(check_lwsai_discrete_exact(point_mass(1, 0)).holds);

  const DiscreteBivariate upper({1, 2, 3}, {0.1, 0.2, 0.15, 0.0, 0.1, 0.25, 0.0, 0.0, 0.2});
  const DiscreteBivariate lower({1, 2, 3}, {0.1, 0.0, 0.0, 0.2, 0.1, 0.0, 0.15, 0.25, 0.2});
  CHECK(check_rwsai_discrete_exact(upper).holds);
  const auto failing = check_rwsai_discrete_exact(lower);
  CHECK_FALSE(failing.holds);
  CHECK(failing.witness_a < failing.witness_b);

  RandomStream rng(31);
  for (int i = 0; i < 50; ++i) {
    const auto d = testing_support::random_pmf(5, rng);
    CHECK(check_lwsai_discrete_exact(d).min_slack == doctest::Approx(min_ray(d, WsaiClass::left)).epsilon(1e-12));
    CHECK(check_rwsai_discrete_exact(d).min_slack == doctest::Approx(min_ray(d, WsaiClass::right)).epsilon(1e-12));
  }
}

TEST_CASE("random test functions satisfy their class constraints") {
  RandomStream rng(4);
  for (auto cls : {WsaiClass::left, WsaiClass::right}) {
    for (int i = 0; i < 500; ++i) {
      const auto f = random_test_functions(6, cls, rng);
      CHECK(f.constraint_violation() <= 1e-12);
    }
  }
}

TEST_CASE("falsifier examples") {
  RandomStream rng(17);
  const DiscreteBivariate sym({1, 2, 3}, {0.1, 0.05, 0.1, 0.05, 0.2, 0.15, 0.1, 0.15, 0.1});
  CHECK(check_wsai_falsify(sym, WsaiClass::left, 1000, rng).holds);
  CHECK(check_wsai_falsify(sym, WsaiClass::right, 1000, rng).holds);

  const DiscreteBivariate lower({1, 2, 3}, {0.1, 0.0, 0.0, 0.2, 0.1, 0.0, 0.15, 0.25, 0.2});
  const auto v = check_wsai_falsify(lower, WsaiClass::left, 1000, rng);
  CHECK_FALSE(v.holds);
  CHECK(v.worst_margin < 0);
}

TEST_CASE("exact checkers and falsifier agree on random pmfs") {
  RandomStream gen(2), rng(3);
  int holds = 0, fails = 0;
  for (int i = 0; i < 60; ++i) {
    const auto d = testing_support::random_pmf(6, gen);
    for (auto cls : {WsaiClass::left, WsaiClass::right}) {
      const bool exact =
          cls == WsaiClass::left ? check_lwsai_discrete_exact(d).holds : check_rwsai_discrete_exact(d).holds;
      const bool falsify = check_wsai_falsify(d, cls, 2000, rng).holds;
      CHECK(exact == falsify);
      (exact ? holds : fails)++;
    }
  }
  CHECK(holds > 10);
  CHECK(fails > 10);
}

TEST_CASE("TP2 of convolution powers") {
  const auto e = Distribution::exponential(1);
  const auto v = check_tp2_convolution(e, 3, default_convolution_grid(e, 3));
  CHECK(v.holds);
  CHECK(v.points == 512);
  CHECK(v.worst_relative <= kTp2Tolerance);
  CHECK_THROWS_AS(check_tp2_convolution(e, 1, default_convolution_grid(e, 1)), std::invalid_argument);
}
