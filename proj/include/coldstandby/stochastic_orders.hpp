#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "coldstandby/marginals.hpp"

namespace coldstandby {

enum class Order { lr, hr, rh, st, icx, icv };

enum class Direction {
  /// d1 dominates d2 (d2 <=_order d1).
  first_dominates,
  /// d2 dominates d1 (d1 <=_order d2).
  second_dominates,
  /// Both relations hold within tolerance.
  equivalent,
  /// Violations beyond tolerance in both directions.
  crossing,
  inconclusive,
};

const char* to_string(Order order);
const char* to_string(Direction direction);
Order parse_order(const std::string& name);

struct OrderVerdict {
  Order order = Order::st;
  Direction direction = Direction::inconclusive;
  /// Largest violation of the relation named by `direction`; for a crossing,
  /// the smaller of the two opposing violations.
  double worst_violation = 0.0;
  /// For a crossing: the points where each side is violated.
  /// Otherwise the location of the largest deviation from equality.
  double witness_first = 0.0;
  double witness_second = 0.0;
  /// Set when the closed-form route decided the verdict.
  bool closed_form = false;
  std::string note;

  bool strict() const { return direction == Direction::first_dominates || direction == Direction::second_dominates; }
};

struct OrderCheckOptions {
  /// Use exact rules for exponential pairs and identical Weibulls when available.
  bool allow_closed_form = true;
  std::size_t grid_points = 2000;
  /// Ratio grids stop at the (1 - tail) quantile.
  double tail = 1e-8;
};

/// Swaps first/second; other directions are unchanged.
Direction flip(Direction d);

OrderVerdict check_lr(const Distribution& d1, const Distribution& d2, const OrderCheckOptions& opts = {});
OrderVerdict check_hr(const Distribution& d1, const Distribution& d2, const OrderCheckOptions& opts = {});
OrderVerdict check_rh(const Distribution& d1, const Distribution& d2, const OrderCheckOptions& opts = {});
OrderVerdict check_st(const Distribution& d1, const Distribution& d2, const OrderCheckOptions& opts = {});
OrderVerdict check_icx(const Distribution& d1, const Distribution& d2, const OrderCheckOptions& opts = {});
OrderVerdict check_icv(const Distribution& d1, const Distribution& d2, const OrderCheckOptions& opts = {});
OrderVerdict check_order(Order order, const Distribution& d1, const Distribution& d2,
                         const OrderCheckOptions& opts = {});

/// Compares empirical survival functions over the pooled sample. Violations
/// up to `tolerance` are ignored when classifying the direction.
OrderVerdict check_st_empirical(std::span<const double> s1, std::span<const double> s2, double tolerance = 0.0);

}  // namespace coldstandby
