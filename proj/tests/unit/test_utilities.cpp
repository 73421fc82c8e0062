#include <cmath>

#include <doctest.h>

#include "coldstandby/errors.hpp"
#include "coldstandby/random.hpp"
#include "coldstandby/utilities.hpp"

using namespace coldstandby;

TEST_CASE("utility values") {
  CHECK(Utility::power(0.8)(1.0) == 1.0);
  CHECK(Utility::power(1.2)(0.0) == 0.0);
  CHECK(Utility::exp_saturating(0.5, 2)(0.0) == 0.0);
  CHECK(Utility::exp_saturating(10, 0.1)(3.0) == doctest::Approx(10 * (1 - std::exp(-0.3))));
  CHECK(Utility::log()(std::exp(1.0)) == doctest::Approx(1.0));
  CHECK(Utility::identity()(2.5) == 2.5);
  CHECK_THROWS_AS(Utility::log()(0.0), DomainError);
  CHECK_THROWS_AS(Utility::log()(-1.0), DomainError);
  CHECK_THROWS_AS(Utility::power(0.5)(-1.0), DomainError);
  const auto t = Utility::tabulated(0, 1, {0, 1, 4});
  CHECK(t(1.5) == doctest::Approx(2.5));
  CHECK_THROWS_AS(t(3.0), DomainError);
}

TEST_CASE("shape classification") {
  const auto g = UniformGrid::spanning(0.01, 20, 500);
  CHECK(classify(Utility::power(0.8), g) == UtilityShape{true, true, false});
  CHECK(classify(Utility::power(1.2), g) == UtilityShape{true, false, true});
  CHECK(classify(Utility::log(), g) == UtilityShape{true, true, false});
  CHECK(classify(Utility::exp_saturating(0.5, 2), g) == UtilityShape{true, true, false});
  CHECK(classify(Utility::identity(), g) == UtilityShape{true, true, true});
  CHECK(classify(Utility::tabulated(0, 1, {0, 1, 4, 9}), UniformGrid::spanning(0, 3, 31)) ==
        UtilityShape{true, false, true});
}

TEST_CASE("numeric classification agrees with second-derivative signs") {
  RandomStream rng(21);
  const auto g = UniformGrid::spanning(0.05, 10, 400);
  for (int i = 0; i < 10; ++i) {
    const double gamma = 0.1 + 2.5 * rng.uniform();
    const double a = 0.1 + 10 * rng.uniform(), b = 0.05 + 2 * rng.uniform();
    // u'' = gamma (gamma - 1) x^(gamma - 2); -a b^2 e^(-bx); -1/x^2
    const UtilityShape power{true, gamma <= 1, gamma >= 1};
    INFO("gamma=", gamma, " a=", a, " b=", b);
    CHECK(classify(Utility::power(gamma), g) == power);
    if (std::abs(gamma - 1) > 0.05) CHECK(classify_numeric(Utility::power(gamma), g) == power);
    CHECK(classify_numeric(Utility::exp_saturating(a, b), g) == UtilityShape{true, true, false});
    CHECK(classify_numeric(Utility::log(), g) == UtilityShape{true, true, false});
    CHECK(classify_numeric(Utility::identity(), g) == UtilityShape{true, true, true});
  }
}
