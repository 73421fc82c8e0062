#include <cmath>
#include <vector>

#include <doctest.h>

#include "coldstandby/stochastic_orders.hpp"

using namespace coldstandby;

namespace {

constexpr Order kAll[] = {Order::lr, Order::hr, Order::rh, Order::st, Order::icx, Order::icv};

OrderCheckOptions numeric() {
  OrderCheckOptions o;
  o.allow_closed_form = false;
  return o;
}

}  // namespace

TEST_CASE("lr examples") {
  CHECK(check_lr(Distribution::exponential(0.4), Distribution::exponential(0.6)).direction ==
        Direction::first_dominates);
  CHECK(check_lr(Distribution::exponential(0.4), Distribution::exponential(0.6), numeric()).direction ==
        Direction::first_dominates);
  CHECK(check_lr(Distribution::beta(3, 2), Distribution::beta(1, 2)).direction == Direction::first_dominates);
  CHECK(check_lr(Distribution::beta(3, 2), Distribution::beta(2, 2)).direction == Direction::first_dominates);
  CHECK(check_lr(Distribution::beta(2, 2), Distribution::beta(1, 2)).direction == Direction::first_dominates);
  const auto w = Distribution::weibull(1.3);
  CHECK(check_lr(w, w).direction == Direction::equivalent);
  CHECK(check_lr(w, w, numeric()).direction == Direction::equivalent);
}

TEST_CASE("hr, rh, st examples") {
  const auto x1 = Distribution::exponential(0.8), x2 = Distribution::exponential(0.3);
  CHECK(check_st(x1, x2).direction == Direction::second_dominates);
  CHECK(check_st(x1, x2, numeric()).direction == Direction::second_dominates);

  const auto st = check_st(Distribution::scaled_exp_cdf(1), Distribution::beta(3, 2));
  CHECK(st.direction == Direction::crossing);
  // The two witnesses lie on opposite sides of the crossing.
  const auto a = Distribution::scaled_exp_cdf(1), b = Distribution::beta(3, 2);
  const double g1 = b.survival(st.witness_first) - a.survival(st.witness_first);
  const double g2 = b.survival(st.witness_second) - a.survival(st.witness_second);
  CHECK(g1 * g2 < 0);

  const auto d = Distribution::beta(2, 5);
  for (auto o : kAll) CHECK(check_order(o, d, d).direction == Direction::equivalent);
}

TEST_CASE("icx and icv examples") {
  const auto x1 = Distribution::exponential(0.8), x2 = Distribution::exponential(0.3);
  CHECK(check_icx(x1, x2, numeric()).direction == Direction::second_dominates);
  CHECK(check_icv(x1, x2, numeric()).direction == Direction::second_dominates);
  const auto diag = check_icv(Distribution::scaled_exp_cdf(1), Distribution::beta(3, 2));
  CHECK(diag.direction != Direction::inconclusive);
}

TEST_CASE("closed-form and grid paths agree on exponential pairs") {
  for (auto [r1, r2] : {std::pair{0.4, 0.6}, std::pair{2.0, 0.5}, std::pair{1.0, 1.0}}) {
    const auto a = Distribution::exponential(r1), b = Distribution::exponential(r2);
    for (auto o : kAll) {
      const auto cf = check_order(o, a, b);
      const auto num = check_order(o, a, b, numeric());
      INFO(to_string(o), " rates ", r1, " ", r2);
      CHECK(cf.direction == num.direction);
    }
  }
}

TEST_CASE("swapping arguments flips the direction") {
  const std::vector<std::pair<Distribution, Distribution>> pairs = {
      {Distribution::exponential(0.8), Distribution::exponential(0.3)},
      {Distribution::beta(3, 2), Distribution::beta(1, 2)},
      {Distribution::scaled_exp_cdf(1), Distribution::beta(3, 2)},
      {Distribution::weibull(1.3), Distribution::weibull(2.0)},
  };
  for (const auto& [a, b] : pairs) {
    for (auto o : kAll) {
      INFO(to_string(o), " ", a.describe(), " vs ", b.describe());
      CHECK(check_order(o, b, a, numeric()).direction == flip(check_order(o, a, b, numeric()).direction));
    }
  }
}

TEST_CASE("discrete laws use exact comparisons") {
  const auto a = Distribution::discrete({0, 1, 2}, {0.5, 0.3, 0.2});
  const auto b = Distribution::discrete({0, 1, 2}, {0.2, 0.3, 0.5});
  for (auto o : kAll) CHECK(check_order(o, a, b).direction == Direction::second_dominates);
  const auto c = Distribution::discrete({0, 1, 2}, {0.3, 0.6, 0.1});
  CHECK(check_st(a, c).direction == Direction::crossing);
}

TEST_CASE("lr chain on random scaled-exponential and beta pairs") {
  RandomStream rng(2024);
  int strict = 0;
  for (int i = 0; i < 20; ++i) {
    const bool beta = i % 2;
    const auto a = beta ? Distribution::beta(0.8 + 4 * rng.uniform(), 0.8 + 4 * rng.uniform())
                        : Distribution::scaled_exp_cdf(0.2 + 4 * rng.uniform());
    const auto b = beta ? Distribution::beta(0.8 + 4 * rng.uniform(), 0.8 + 4 * rng.uniform())
                        : Distribution::scaled_exp_cdf(0.2 + 4 * rng.uniform());
    const auto lr = check_lr(a, b, numeric());
    if (!lr.strict()) continue;
    ++strict;
    for (auto o : {Order::hr, Order::rh, Order::st, Order::icx, Order::icv}) {
      INFO(a.describe(), " vs ", b.describe(), " ", to_string(o));
      CHECK(check_order(o, a, b, numeric()).direction == lr.direction);
    }
  }
  CHECK(strict >= 10);
}

TEST_CASE("empirical st") {
  RandomStream rng(8);
  std::vector<double> s1(1000);
  for (auto& x : s1) x = rng.uniform();
  std::vector<double> s2 = s1;
  for (auto& x : s2) x += 1;
  CHECK(check_st_empirical(s1, s2).direction == Direction::second_dominates);
  CHECK(check_st_empirical(s1, s1).direction == Direction::equivalent);

  const auto a = Distribution::exponential(0.8).sample(1'000'000, rng);
  const auto b = Distribution::exponential(0.3).sample(1'000'000, rng);
  const auto v = check_st_empirical(a, b, 0.005);
  CHECK(v.direction == Direction::second_dominates);
  CHECK(v.worst_violation <= 0.005);
}

TEST_CASE("lr needs nested supports, not only a monotone ratio on the overlap") {
  const auto b = Distribution::beta(4.56, 0.64), e = Distribution::exponential(2.96);
  const auto v = check_lr(b, e, numeric());
  CHECK(v.direction == Direction::crossing);
  CHECK(v.witness_second > 1.0);
  CHECK(check_hr(b, e, numeric()).direction == Direction::crossing);
  // Beta(0.5,1) <=lr Exp(0.4): d/dx log ratio = 0.5/x - 0.4 > 0 on (0,1), and the exponential outlives the beta.
  CHECK(check_lr(Distribution::beta(0.5, 1), Distribution::exponential(0.4), numeric()).direction ==
        Direction::second_dominates);
}
