#include "coldstandby/stochastic_orders.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "coldstandby/errors.hpp"

namespace coldstandby {

namespace {

constexpr double kRatioTolerance = 1e-9;
constexpr double kPointwiseTolerance = 1e-9;
constexpr double kDiscreteTolerance = 1e-12;
constexpr double kIntegralRelTolerance = 1e-6;

// Violations of "d1 <= d2" (against_second) and "d2 <= d1" (against_first).
struct Evidence {
  double against_second = 0.0;
  double against_first = 0.0;
  double where_against_second = 0.0;
  double where_against_first = 0.0;
  std::size_t points = 0;

  void record(double signed_gap, double x) {
    // signed_gap >= 0 supports d1 <= d2; <= 0 supports d2 <= d1.
    ++points;
    if (-signed_gap > against_second) {
      against_second = -signed_gap;
      where_against_second = x;
    }
    if (signed_gap > against_first) {
      against_first = signed_gap;
      where_against_first = x;
    }
  }
};

OrderVerdict classify(Order order, const Evidence& e, double tol) {
  OrderVerdict v;
  v.order = order;
  if (e.points == 0) {
    v.direction = Direction::inconclusive;
    v.note = "no comparable points";
    return v;
  }
  v.witness_first = e.where_against_second;
  v.witness_second = e.where_against_first;
  const bool d1_le_d2 = e.against_second <= tol;
  const bool d2_le_d1 = e.against_first <= tol;
  if (d1_le_d2 && d2_le_d1) {
    v.direction = Direction::equivalent;
    v.worst_violation = std::max(e.against_first, e.against_second);
  } else if (d1_le_d2) {
    v.direction = Direction::second_dominates;
    v.worst_violation = e.against_second;
  } else if (d2_le_d1) {
    v.direction = Direction::first_dominates;
    v.worst_violation = e.against_first;
  } else {
    v.direction = Direction::crossing;
    v.worst_violation = std::min(e.against_first, e.against_second);
  }
  return v;
}

const Exponential* as_exponential(const Distribution& d) { return std::get_if<Exponential>(&d.kind()); }

// Exact rules: exponential pairs are ordered by rate in every order considered
// here; Weibulls with the same shape (unit scale) are identical.
bool closed_form(Order order, const Distribution& d1, const Distribution& d2, OrderVerdict& out) {
  const auto* e1 = as_exponential(d1);
  const auto* e2 = as_exponential(d2);
  out = OrderVerdict{};
  out.order = order;
  out.closed_form = true;
  if (e1 && e2) {
    if (e1->rate == e2->rate) {
      out.direction = Direction::equivalent;
    } else {
      out.direction = e1->rate > e2->rate ? Direction::second_dominates : Direction::first_dominates;
    }
    out.note = "exponential rates";
    return true;
  }
  const auto* w1 = std::get_if<Weibull>(&d1.kind());
  const auto* w2 = std::get_if<Weibull>(&d2.kind());
  if (w1 && w2 && w1->shape == w2->shape) {
    out.direction = Direction::equivalent;
    out.note = "identical weibull";
    return true;
  }
  return false;
}

double upper_quantile(const Distribution& d, double tail) {
  const double hi = d.support_upper();
  if (std::isfinite(hi)) return std::min(hi, d.quantile(1.0 - tail));
  return d.quantile(1.0 - tail);
}

// Union of supports of two discrete laws.
std::vector<double> union_support(const DiscreteFinite& a, const DiscreteFinite& b) {
  std::vector<double> z = a.support;
  z.insert(z.end(), b.support.begin(), b.support.end());
  std::sort(z.begin(), z.end());
  z.erase(std::unique(z.begin(), z.end()), z.end());
  return z;
}

// Monotonicity of log(g2 / g1) on a grid; increasing means d1 <= d2.
template <class G>
OrderVerdict ratio_check(Order order, double lo, double hi, std::size_t points, G&& log_g) {
  Evidence e;
  if (!(lo < hi)) {
    OrderVerdict v;
    v.order = order;
    v.note = "supports do not overlap on the ratio grid";
    return v;
  }
  const auto grid = UniformGrid::spanning(lo, hi, points);
  double prev = 0.0;
  double prev_x = 0.0;
  bool have_prev = false;
  for (std::size_t i = 0; i < grid.count; ++i) {
    const double x = grid[i];
    const double l = log_g(x);
    if (!std::isfinite(l)) continue;
    if (have_prev) e.record(l - prev, 0.5 * (x + prev_x));
    prev = l;
    prev_x = x;
    have_prev = true;
  }
  return classify(order, e, kRatioTolerance);
}

// Cross-product form for finite supports: g1(x) g2(y) - g1(y) g2(x) >= 0 for
// all x < y means g2 / g1 is increasing.
OrderVerdict cross_product_check(Order order, const std::vector<double>& xs, const std::vector<double>& g1,
                                 const std::vector<double>& g2) {
  Evidence e;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      e.record(g1[i] * g2[j] - g1[j] * g2[i], xs[j]);
    }
  }
  if (e.points == 0) e.points = 1;  // single support point: equal laws
  return classify(order, e, kDiscreteTolerance);
}

enum class Integrated { lower_partial, stop_loss };

// Gauss-Legendre 5-point rule on [a, b].
template <class F>
double gauss5(F&& f, double a, double b) {
  static constexpr std::array<double, 5> nodes = {0.0, -0.5384693101056831, 0.5384693101056831,
                                                  -0.9061798459386640, 0.9061798459386640};
  static constexpr std::array<double, 5> weights = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                                    0.2369268850561891, 0.2369268850561891};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < 5; ++i) acc += weights[i] * f(mid + half * nodes[i]);
  return acc * half;
}

double pointwise_start(const Distribution& d1, const Distribution& d2) {
  return std::min({0.0, d1.support_lower(), d2.support_lower()});
}

OrderVerdict integrated_check(Order order, const Distribution& d1, const Distribution& d2,
                              const OrderCheckOptions& opts) {
  const Integrated kind = order == Order::icv ? Integrated::lower_partial : Integrated::stop_loss;
  const double start = pointwise_start(d1, d2);
  const double m1 = d1.mean();
  const double m2 = d2.mean();
  const double tol = kIntegralRelTolerance * std::max(std::abs(m1), std::abs(m2));

  if (d1.is_discrete() && d2.is_discrete()) {
    // Both transforms are piecewise linear between support points.
    auto z = union_support(std::get<DiscreteFinite>(d1.kind()), std::get<DiscreteFinite>(d2.kind()));
    Evidence e;
    double a1 = 0.0;
    double a2 = 0.0;
    double prev = start;
    for (double t : z) {
      a1 += d1.survival(prev) * (t - prev);
      a2 += d2.survival(prev) * (t - prev);
      prev = t;
      const double gap = kind == Integrated::lower_partial ? a2 - a1 : (m2 - start - a2) - (m1 - start - a1);
      e.record(gap, t);
    }
    if (kind == Integrated::stop_loss) e.record(m2 - m1, start);
    return classify(order, e, kDiscreteTolerance);
  }

  const double hi = std::max(upper_quantile(d1, opts.tail), upper_quantile(d2, opts.tail));
  const auto grid = UniformGrid::spanning(start, hi, opts.grid_points);
  Evidence e;
  double a1 = 0.0;
  double a2 = 0.0;
  auto gap_at = [&]() {
    return kind == Integrated::lower_partial ? a2 - a1 : (m2 - start - a2) - (m1 - start - a1);
  };
  e.record(gap_at(), grid[0]);
  for (std::size_t i = 1; i < grid.count; ++i) {
    a1 += gauss5([&](double x) { return d1.survival(x); }, grid[i - 1], grid[i]);
    a2 += gauss5([&](double x) { return d2.survival(x); }, grid[i - 1], grid[i]);
    e.record(gap_at(), grid[i]);
  }
  auto v = classify(order, e, tol);
  const double tail1 = d1.survival(hi);
  const double tail2 = d2.survival(hi);
  if (std::max(tail1, tail2) > 1e-6) {
    v.direction = Direction::inconclusive;
    v.note = "tail mass beyond grid: " + std::to_string(std::max(tail1, tail2));
  }
  return v;
}

}  // namespace

const char* to_string(Order order) {
  switch (order) {
    case Order::lr: return "lr";
    case Order::hr: return "hr";
    case Order::rh: return "rh";
    case Order::st: return "st";
    case Order::icx: return "icx";
    case Order::icv: return "icv";
  }
  return "?";
}

const char* to_string(Direction direction) {
  switch (direction) {
    case Direction::first_dominates: return "first_dominates";
    case Direction::second_dominates: return "second_dominates";
    case Direction::equivalent: return "equivalent";
    case Direction::crossing: return "crossing";
    case Direction::inconclusive: return "inconclusive";
  }
  return "?";
}

Order parse_order(const std::string& name) {
  for (Order o : {Order::lr, Order::hr, Order::rh, Order::st, Order::icx, Order::icv}) {
    if (name == to_string(o)) return o;
  }
  throw std::invalid_argument("unknown order '" + name + "'");
}

Direction flip(Direction d) {
  if (d == Direction::first_dominates) return Direction::second_dominates;
  if (d == Direction::second_dominates) return Direction::first_dominates;
  return d;
}

OrderVerdict check_lr(const Distribution& d1, const Distribution& d2, const OrderCheckOptions& opts) {
  OrderVerdict v;
  if (opts.allow_closed_form && closed_form(Order::lr, d1, d2, v)) return v;
  if (d1.is_discrete() && d2.is_discrete()) {
    auto z = union_support(std::get<DiscreteFinite>(d1.kind()), std::get<DiscreteFinite>(d2.kind()));
    std::vector<double> f1(z.size()), f2(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      f1[i] = d1.pdf(z[i]);
      f2[i] = d2.pdf(z[i]);
    }
    return cross_product_check(Order::lr, z, f1, f2);
  }
  if (d1.is_discrete() || d2.is_discrete()) {
    v.order = Order::lr;
    v.note = "likelihood ratio between a discrete and a continuous law is undefined";
    return v;
  }
  const double lo = std::max(d1.quantile(opts.tail), d2.quantile(opts.tail));
  const double hi = std::min(upper_quantile(d1, opts.tail), upper_quantile(d2, opts.tail));
  v = ratio_check(Order::lr, lo, hi, opts.grid_points, [&](double x) { return d2.log_pdf(x) - d1.log_pdf(x); });

  // The grid only covers the common support. X <=lr Y also needs Y's support
  // to start and end no earlier than X's.
  const double l1 = d1.support_lower(), l2 = d2.support_lower();
  const double u1 = d1.support_upper(), u2 = d2.support_upper();
  auto outside = [](double a, double b) { return std::isfinite(b) ? 0.5 * (a + b) : a + 1.0; };
  bool bad = false;
  double where = 0.0;
  if ((v.direction == Direction::second_dominates || v.direction == Direction::equivalent) && (l1 > l2 || u1 > u2)) {
    bad = true;
    where = l1 > l2 ? 0.5 * (l1 + l2) : outside(u2, u1);
  }
  if ((v.direction == Direction::first_dominates || v.direction == Direction::equivalent) && (l2 > l1 || u2 > u1)) {
    bad = true;
    where = l2 > l1 ? 0.5 * (l1 + l2) : outside(u1, u2);
  }
  if (bad) {
    v.direction = Direction::crossing;
    v.witness_second = where;
    v.note = "density ratio is monotone on the common support, but the supports are not nested accordingly";
  }
  return v;
}

OrderVerdict check_hr(const Distribution& d1, const Distribution& d2, const OrderCheckOptions& opts) {
  OrderVerdict v;
  if (opts.allow_closed_form && closed_form(Order::hr, d1, d2, v)) return v;
  if (d1.is_discrete() && d2.is_discrete()) {
    auto z = union_support(std::get<DiscreteFinite>(d1.kind()), std::get<DiscreteFinite>(d2.kind()));
    std::vector<double> xs{z.front() - 1.0};
    xs.insert(xs.end(), z.begin(), z.end());
    std::vector<double> s1(xs.size()), s2(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      s1[i] = d1.survival(xs[i]);
      s2[i] = d2.survival(xs[i]);
    }
    return cross_product_check(Order::hr, xs, s1, s2);
  }
  const double lo = std::max(d1.support_lower(), d2.support_lower());
  const double hi = std::min(upper_quantile(d1, opts.tail), upper_quantile(d2, opts.tail));
  return ratio_check(Order::hr, lo, hi, opts.grid_points,
                     [&](double x) { return d2.log_survival(x) - d1.log_survival(x); });
}

OrderVerdict check_rh(const Distribution& d1, const Distribution& d2, const OrderCheckOptions& opts) {
  OrderVerdict v;
  if (opts.allow_closed_form && closed_form(Order::rh, d1, d2, v)) return v;
  if (d1.is_discrete() && d2.is_discrete()) {
    auto z = union_support(std::get<DiscreteFinite>(d1.kind()), std::get<DiscreteFinite>(d2.kind()));
    std::vector<double> f1(z.size()), f2(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      f1[i] = d1.cdf(z[i]);
      f2[i] = d2.cdf(z[i]);
    }
    return cross_product_check(Order::rh, z, f1, f2);
  }
  const double lo = std::max(d1.quantile(opts.tail), d2.quantile(opts.tail));
  const double hi = std::max(upper_quantile(d1, opts.tail), upper_quantile(d2, opts.tail));
  return ratio_check(Order::rh, lo, hi, opts.grid_points,
                     [&](double x) { return d2.log_cdf(x) - d1.log_cdf(x); });
}

OrderVerdict check_st(const Distribution& d1, const Distribution& d2, const OrderCheckOptions& opts) {
  OrderVerdict v;
  if (opts.allow_closed_form && closed_form(Order::st, d1, d2, v)) return v;
  Evidence e;
  if (d1.is_discrete() && d2.is_discrete()) {
    for (double z : union_support(std::get<DiscreteFinite>(d1.kind()), std::get<DiscreteFinite>(d2.kind()))) {
      e.record(d2.survival(z) - d1.survival(z), z);
    }
    return classify(Order::st, e, kDiscreteTolerance);
  }
  const double lo = pointwise_start(d1, d2);
  const double hi = std::max(upper_quantile(d1, opts.tail), upper_quantile(d2, opts.tail));
  const auto grid = UniformGrid::spanning(lo, hi, opts.grid_points);
  for (std::size_t i = 0; i < grid.count; ++i) e.record(d2.survival(grid[i]) - d1.survival(grid[i]), grid[i]);
  return classify(Order::st, e, kPointwiseTolerance);
}

OrderVerdict check_icx(const Distribution& d1, const Distribution& d2, const OrderCheckOptions& opts) {
  OrderVerdict v;
  if (opts.allow_closed_form && closed_form(Order::icx, d1, d2, v)) return v;
  return integrated_check(Order::icx, d1, d2, opts);
}

OrderVerdict check_icv(const Distribution& d1, const Distribution& d2, const OrderCheckOptions& opts) {
  OrderVerdict v;
  if (opts.allow_closed_form && closed_form(Order::icv, d1, d2, v)) return v;
  return integrated_check(Order::icv, d1, d2, opts);
}

OrderVerdict check_order(Order order, const Distribution& d1, const Distribution& d2, const OrderCheckOptions& opts) {
  switch (order) {
    case Order::lr: return check_lr(d1, d2, opts);
    case Order::hr: return check_hr(d1, d2, opts);
    case Order::rh: return check_rh(d1, d2, opts);
    case Order::st: return check_st(d1, d2, opts);
    case Order::icx: return check_icx(d1, d2, opts);
    case Order::icv: return check_icv(d1, d2, opts);
  }
  throw std::invalid_argument("unknown order");
}

OrderVerdict check_st_empirical(std::span<const double> s1, std::span<const double> s2, double tolerance) {
  if (s1.empty() || s2.empty()) throw ContractError("empirical comparison needs nonempty samples");
  std::vector<double> a(s1.begin(), s1.end());
  std::vector<double> b(s2.begin(), s2.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  Evidence e;
  std::size_t i = 0;
  std::size_t j = 0;
  // Walk the pooled order statistics; at each distinct t compare P(X > t).
  while (i < a.size() || j < b.size()) {
    double t;
    if (j >= b.size() || (i < a.size() && a[i] <= b[j])) {
      t = a[i];
    } else {
      t = b[j];
    }
    while (i < a.size() && a[i] <= t) ++i;
    while (j < b.size() && b[j] <= t) ++j;
    const double surv_a = static_cast<double>(a.size() - i) / na;
    const double surv_b = static_cast<double>(b.size() - j) / nb;
    e.record(surv_b - surv_a, t);
  }
  return classify(Order::st, e, tolerance);
}

}  // namespace coldstandby
