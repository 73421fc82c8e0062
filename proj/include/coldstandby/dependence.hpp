#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "coldstandby/copula.hpp"
#include "coldstandby/marginals.hpp"
#include "coldstandby/random.hpp"
#include "coldstandby/stochastic_orders.hpp"

namespace coldstandby {

/// Component lifetimes X_1..X_n joined by an Archimedean copula or survival copula.
class JointLifetimeModel {
 public:
  /// Throws std::invalid_argument when the marginal count differs from the copula dimension.
  JointLifetimeModel(CopulaModel copula, std::vector<Distribution> marginals);

  const CopulaModel& copula() const { return copula_; }
  const std::vector<Distribution>& marginals() const { return marginals_; }
  std::size_t dimension() const { return marginals_.size(); }

 private:
  CopulaModel copula_;
  std::vector<Distribution> marginals_;
};

/// Finite bivariate law on support x support; pmf is row-major, p(i, j) = P(X1 = s_i, X2 = s_j).
class DiscreteBivariate {
 public:
  /// Validates ascending support, nonnegative entries, total 1 within 1e-12.
  DiscreteBivariate(std::vector<double> support, std::vector<double> pmf);

  std::size_t size() const { return support_.size(); }
  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& pmf() const { return pmf_; }
  double p(std::size_t i, std::size_t j) const { return pmf_[i * support_.size() + j]; }

  /// Marginal of X1 (axis 0) or X2 (axis 1).
  Distribution marginal(int axis) const;

 private:
  std::vector<double> support_;
  std::vector<double> pmf_;
};

enum class WsaiClass { left, right };

struct ChainLink {
  std::size_t first = 0;  // 0-based component indices of an adjacent pair
  std::size_t second = 0;
  Direction direction = Direction::inconclusive;
};

struct SufficientVerdict {
  bool holds = false;
  bool mode_matches = false;
  bool generator_log_convex = false;
  double generator_violation = 0.0;
  std::vector<ChainLink> chain;
  /// First adjacent pair whose order relation fails; meaningful only when !chain_ok.
  ChainLink failing;
  bool chain_ok = false;
  std::string reason;
};

/// Archimedean copula with log-convex generator and X_1 <=rh ... <=rh X_n.
SufficientVerdict check_lwsai_sufficient(const JointLifetimeModel& model);
/// Archimedean survival copula with log-convex generator and X_1 <=hr ... <=hr X_n.
SufficientVerdict check_rwsai_sufficient(const JointLifetimeModel& model);

struct DiscreteWsaiVerdict {
  bool holds = false;
  /// Smallest ray sum; negative when the property fails.
  double min_slack = 0.0;
  std::size_t witness_a = 0;  // support indices a < b of the smallest ray
  std::size_t witness_b = 0;
};

inline constexpr double kRayTolerance = 1e-12;

/// Holds iff sum_{x1 <= s_a} [p(x1, s_b) - p(s_b, x1)] >= 0 for every a < b.
DiscreteWsaiVerdict check_lwsai_discrete_exact(const DiscreteBivariate& d);
/// Holds iff sum_{x2 >= s_b} [p(s_a, x2) - p(x2, s_a)] >= 0 for every a < b.
DiscreteWsaiVerdict check_rwsai_discrete_exact(const DiscreteBivariate& d);

/// Tabulated g1, g2 on support x support (row-major) meeting the class constraints:
///   left:  g2 - g1 decreasing in x1 over x1 <= x2
///   right: g2 - g1 increasing in x2 over x2 >= x1
///   both:  g2(x1,x2) + g2(x2,x1) >= g1(x1,x2) + g1(x2,x1) for x1 <= x2
struct TestFunctionPair {
  WsaiClass cls = WsaiClass::left;
  std::size_t size = 0;
  std::vector<double> g1;
  std::vector<double> g2;

  double h(std::size_t i, std::size_t j) const { return g2[i * size + j] - g1[i * size + j]; }
  /// Largest violation of the class constraints (0 when valid).
  double constraint_violation() const;
};

TestFunctionPair random_test_functions(std::size_t size, WsaiClass cls, RandomStream& rng);

struct FalsifyVerdict {
  /// True when no trial produced a margin below -kRayTolerance * scale.
  bool holds = true;
  /// Smallest E[g2] - E[g1] divided by max |g2 - g1| over the trials.
  double worst_margin = 0.0;
  std::size_t worst_trial = 0;
  std::size_t trials = 0;
};

FalsifyVerdict check_wsai_falsify(const DiscreteBivariate& d, WsaiClass cls, std::size_t trials, RandomStream& rng);

struct Tp2Verdict {
  bool holds = false;
  /// Largest (f_ri(zi) f_rj(zj) - f_ri(zj) f_rj(zi)) / (sum of both products).
  double worst_relative = 0.0;
  int witness_ri = 0;
  int witness_rj = 0;
  double witness_zi = 0.0;
  double witness_zj = 0.0;
  std::size_t points = 0;
};

inline constexpr double kTp2Tolerance = 1e-8;

/// Checks f^{(ri)}(zi) f^{(rj)}(zj) <= f^{(ri)}(zj) f^{(rj)}(zi) for 1 <= rj < ri <= r_max and
/// zi <= zj on `grid` decimated to at most `decimated` points.
Tp2Verdict check_tp2_convolution(const Distribution& d, int r_max, const UniformGrid& grid,
                                 std::size_t decimated = 512);

}  // namespace coldstandby
