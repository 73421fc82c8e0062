#include <algorithm>
#include <numeric>
#include <vector>

#include <doctest.h>

#include "coldstandby/random.hpp"
#include "coldstandby/systems.hpp"

using namespace coldstandby;

TEST_CASE("node lifetimes") {
  const std::vector<double> x = {1, 2};
  CHECK(node_lifetimes(x, std::vector<double>{3, 4}, AllocationPolicy::matching({0, 1})) == std::vector<double>{4, 6});
  CHECK(node_lifetimes(x, std::vector<double>{3, 4}, AllocationPolicy::matching({1, 0})) == std::vector<double>{5, 5});
  CHECK(node_lifetimes(x, std::vector<double>{1, 1, 1, 1, 1}, AllocationPolicy::counts({3, 2})) ==
        std::vector<double>{4, 4});
  CHECK(node_lifetimes(std::vector<double>{0, 0}, std::vector<double>{1, 2, 3}, AllocationPolicy::counts({0, 3})) ==
        std::vector<double>{0, 6});
  // Blocks are contiguous: the first r_1 draws go to node 1.
  CHECK(node_lifetimes(std::vector<double>{0, 0}, std::vector<double>{1, 10, 100}, AllocationPolicy::counts({1, 2})) ==
        std::vector<double>{1, 110});
  CHECK_THROWS_AS(node_lifetimes(x, std::vector<double>{1, 1, 1}, AllocationPolicy::counts({3, 2})),
                  std::invalid_argument);
  CHECK_THROWS_AS(AllocationPolicy::matching({0, 0}), std::invalid_argument);
}

TEST_CASE("system lifetime") {
  CHECK(system_lifetime(Topology::series(), std::vector<double>{4, 6}) == 4);
  CHECK(system_lifetime(Topology::parallel(), std::vector<double>{4, 6}) == 6);
  CHECK(system_lifetime(Topology::k_out_of_n(2), std::vector<double>{1, 5, 3}) == 3);
  CHECK(system_lifetime(Topology::k_out_of_n(1), std::vector<double>{1, 5, 3}) == 5);
  CHECK(system_lifetime(Topology::k_out_of_n(3), std::vector<double>{1, 5, 3}) == 1);
  CHECK_THROWS_AS(Topology::k_out_of_n(4).validate(3), std::invalid_argument);
  CHECK_THROWS_AS(Topology::k_out_of_n(0), std::invalid_argument);
}

TEST_CASE("transpositions") {
  CHECK(transpose(AllocationPolicy::counts({3, 2}), 0, 1) == AllocationPolicy::counts({2, 3}));
  CHECK(transpose(AllocationPolicy::matching({0, 1, 2}), 0, 1) == AllocationPolicy::matching({1, 0, 2}));
  CHECK(transpose(AllocationPolicy::matching({0, 1, 2}), 0, 1).label() == "(2,1,3)");
  const auto p = AllocationPolicy::counts({4, 0, 1});
  CHECK(transpose(transpose(p, 0, 2), 0, 2) == p);
  CHECK_THROWS_AS(transpose(p, 1, 3), std::out_of_range);
}

TEST_CASE("policy enumeration") {
  CHECK(enumerate_policies(2, 5).size() == 6);
  const auto three = enumerate_policies(3, 1);
  REQUIRE(three.size() == 3);
  CHECK(three[0] == AllocationPolicy::counts({1, 0, 0}));
  CHECK(three[1] == AllocationPolicy::counts({0, 1, 0}));
  CHECK(three[2] == AllocationPolicy::counts({0, 0, 1}));
  const auto one = enumerate_policies(1, 4);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == AllocationPolicy::counts({4}));
  // C(m + n - 1, n - 1) weak compositions, all distinct and summing to m.
  const auto many = enumerate_policies(4, 6);
  CHECK(many.size() == 84);
  for (const auto& p : many) CHECK(p.total() == 6);
  for (std::size_t i = 1; i < many.size(); ++i) CHECK(many[i - 1].values() > many[i].values());
}

TEST_CASE("swapped-sum identity holds exactly") {
  RandomStream rng(10);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 2 + trial % 3;
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = 5 * rng.uniform();
    for (auto& v : y) v = 5 * rng.uniform();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    const auto p = AllocationPolicy::matching(perm);
    const std::size_t i = 0, j = 1 + trial % (n - 1);
    const auto q = transpose(p, i, j);
    auto xs = x;
    std::swap(xs[i], xs[j]);
    for (const auto& t : {Topology::series(), Topology::parallel()}) {
      const double g1 = system_lifetime(t, node_lifetimes(x, y, p));
      const double g1s = system_lifetime(t, node_lifetimes(xs, y, p));
      const double g2 = system_lifetime(t, node_lifetimes(x, y, q));
      const double g2s = system_lifetime(t, node_lifetimes(xs, y, q));
      CHECK(g2 + g2s == g1 + g1s);
      CHECK(g1s == g2);
    }
  }
}

TEST_CASE("structure-function properties") {
  RandomStream rng(6);
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<double> v(4);
    for (auto& e : v) e = rng.uniform();
    CHECK(system_lifetime(Topology::k_out_of_n(4), v) == system_lifetime(Topology::series(), v));
    CHECK(system_lifetime(Topology::k_out_of_n(1), v) == system_lifetime(Topology::parallel(), v));
    const Topology t = Topology::k_out_of_n(1 + trial % 4);
    const double base = system_lifetime(t, v);
    auto up = v;
    up[trial % 4] += rng.uniform();
    CHECK(system_lifetime(t, up) >= base);
    auto perm = v;
    std::rotate(perm.begin(), perm.begin() + 1 + trial % 3, perm.end());
    CHECK(system_lifetime(t, perm) == base);
  }
}
