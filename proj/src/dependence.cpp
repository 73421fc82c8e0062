#include "coldstandby/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "coldstandby/errors.hpp"

namespace coldstandby {

JointLifetimeModel::JointLifetimeModel(CopulaModel copula, std::vector<Distribution> marginals)
    : copula_(std::move(copula)), marginals_(std::move(marginals)) {
  if (marginals_.size() != copula_.dimension()) {
    throw std::invalid_argument("joint model has " + std::to_string(marginals_.size()) +
                                " marginals for a copula of dimension " + std::to_string(copula_.dimension()));
  }
}

DiscreteBivariate::DiscreteBivariate(std::vector<double> support, std::vector<double> pmf)
    : support_(std::move(support)), pmf_(std::move(pmf)) {
  const std::size_t k = support_.size();
  if (k == 0) throw std::invalid_argument("bivariate support is empty");
  if (pmf_.size() != k * k) throw std::invalid_argument("bivariate pmf must have support^2 entries");
  for (std::size_t i = 1; i < k; ++i) {
    if (!(support_[i] > support_[i - 1])) throw std::invalid_argument("bivariate support must be strictly ascending");
  }
  double total = 0.0;
  for (double p : pmf_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("bivariate pmf entries must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("bivariate pmf must sum to 1");
}

Distribution DiscreteBivariate::marginal(int axis) const {
  const std::size_t k = size();
  std::vector<double> m(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) m[axis == 0 ? i : j] += p(i, j);
  }
  // Drop empty atoms so the marginal is a valid finite law.
  std::vector<double> s;
  std::vector<double> q;
  for (std::size_t i = 0; i < k; ++i) {
    if (m[i] > 0.0) {
      s.push_back(support_[i]);
      q.push_back(m[i]);
    }
  }
  double total = 0.0;
  for (double v : q) total += v;
  for (double& v : q) v /= total;
  return Distribution::discrete(std::move(s), std::move(q));
}

namespace {

SufficientVerdict sufficient(const JointLifetimeModel& model, CopulaMode wanted, Order order) {
  SufficientVerdict v;
  v.mode_matches = model.copula().mode() == wanted;
  const auto shape = is_log_convex_generator(model.copula().generator(), default_generator_grid());
  v.generator_log_convex = shape.holds;
  v.generator_violation = shape.worst_violation;
  v.chain_ok = true;
  const auto& m = model.marginals();
  for (std::size_t i = 0; i + 1 < m.size(); ++i) {
    ChainLink link{i, i + 1, check_order(order, m[i], m[i + 1]).direction};
    v.chain.push_back(link);
    const bool ok = link.direction == Direction::second_dominates || link.direction == Direction::equivalent;
    if (!ok && v.chain_ok) {
      v.chain_ok = false;
      v.failing = link;
    }
  }
  v.holds = v.mode_matches && v.generator_log_convex && v.chain_ok;
  if (!v.mode_matches) {
    v.reason = std::string("model uses a ") + to_string(model.copula().mode()) + " copula";
  } else if (!v.generator_log_convex) {
    v.reason = "generator is not log-convex";
  } else if (!v.chain_ok) {
    v.reason = std::string("X") + std::to_string(v.failing.first + 1) + " vs X" + std::to_string(v.failing.second + 1) +
               " in " + to_string(order) + " order: " + to_string(v.failing.direction);
  }
  return v;
}

}  // namespace

SufficientVerdict check_lwsai_sufficient(const JointLifetimeModel& model) {
  return sufficient(model, CopulaMode::copula, Order::rh);
}

SufficientVerdict check_rwsai_sufficient(const JointLifetimeModel& model) {
  return sufficient(model, CopulaMode::survival, Order::hr);
}

DiscreteWsaiVerdict check_lwsai_discrete_exact(const DiscreteBivariate& d) {
  DiscreteWsaiVerdict v;
  v.min_slack = std::numeric_limits<double>::infinity();
  const std::size_t k = d.size();
  for (std::size_t b = 1; b < k; ++b) {
    double acc = 0.0;
    for (std::size_t a = 0; a < b; ++a) {
      acc += d.p(a, b) - d.p(b, a);
      if (acc < v.min_slack) {
        v.min_slack = acc;
        v.witness_a = a;
        v.witness_b = b;
      }
    }
  }
  if (k < 2) v.min_slack = 0.0;
  v.holds = v.min_slack >= -kRayTolerance;
  return v;
}

DiscreteWsaiVerdict check_rwsai_discrete_exact(const DiscreteBivariate& d) {
  DiscreteWsaiVerdict v;
  v.min_slack = std::numeric_limits<double>::infinity();
  const std::size_t k = d.size();
  for (std::size_t a = 0; a + 1 < k; ++a) {
    double acc = 0.0;
    for (std::size_t b = k - 1; b > a; --b) {
      acc += d.p(a, b) - d.p(b, a);
      if (acc < v.min_slack) {
        v.min_slack = acc;
        v.witness_a = a;
        v.witness_b = b;
      }
    }
  }
  if (k < 2) v.min_slack = 0.0;
  v.holds = v.min_slack >= -kRayTolerance;
  return v;
}

double TestFunctionPair::constraint_violation() const {
  double worst = 0.0;
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = a; b < size; ++b) {
      worst = std::max(worst, -(h(a, b) + h(b, a)));
    }
  }
  if (cls == WsaiClass::left) {
    for (std::size_t b = 0; b < size; ++b) {
      for (std::size_t a = 0; a < b; ++a) worst = std::max(worst, h(a + 1, b) - h(a, b));
    }
  } else {
    for (std::size_t a = 0; a < size; ++a) {
      for (std::size_t b = a + 1; b < size; ++b) worst = std::max(worst, h(a, b - 1) - h(a, b));
    }
  }
  return worst;
}

TestFunctionPair random_test_functions(std::size_t size, WsaiClass cls, RandomStream& rng) {
  TestFunctionPair t;
  t.cls = cls;
  t.size = size;
  t.g1.resize(size * size);
  for (double& g : t.g1) g = 2.0 * rng.uniform() - 1.0;

  // Sparse nonnegative increments; cubing the rate favors functions built from
  // a handful of indicator rays.
  const double u = rng.uniform();
  const double rate = u * u * u;
  auto increment = [&] { return rng.uniform() < rate ? std::exp(6.0 * (rng.uniform() - 0.5)) : 0.0; };

  std::vector<double> h(size * size, 0.0);
  auto H = [&](std::size_t i, std::size_t j) -> double& { return h[i * size + j]; };
  if (cls == WsaiClass::left) {
    for (std::size_t b = 0; b < size; ++b) {
      H(b, b) = increment();
      for (std::size_t a = b; a-- > 0;) H(a, b) = H(a + 1, b) + increment();
    }
  } else {
    for (std::size_t a = 0; a < size; ++a) {
      H(a, a) = increment();
      for (std::size_t b = a + 1; b < size; ++b) H(a, b) = H(a, b - 1) + increment();
    }
  }
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = a + 1; b < size; ++b) H(b, a) = -H(a, b) + increment();
  }
  t.g2.resize(size * size);
  for (std::size_t i = 0; i < size * size; ++i) t.g2[i] = t.g1[i] + h[i];
  return t;
}

FalsifyVerdict check_wsai_falsify(const DiscreteBivariate& d, WsaiClass cls, std::size_t trials, RandomStream& rng) {
  if (trials == 0) throw ContractError("falsifier needs at least one trial");
  FalsifyVerdict v;
  v.trials = trials;
  v.worst_margin = std::numeric_limits<double>::infinity();
  const std::size_t k = d.size();
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const auto t = random_test_functions(k, cls, rng);
    double e1 = 0.0;
    double e2 = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < k * k; ++i) {
      e1 += t.g1[i] * d.pmf()[i];
      e2 += t.g2[i] * d.pmf()[i];
      scale = std::max(scale, std::abs(t.g2[i] - t.g1[i]));
    }
    const double margin = scale > 0.0 ? (e2 - e1) / scale : 0.0;
    if (margin < v.worst_margin) {
      v.worst_margin = margin;
      v.worst_trial = trial;
    }
  }
  v.holds = v.worst_margin >= -kRayTolerance;
  return v;
}

Tp2Verdict check_tp2_convolution(const Distribution& d, int r_max, const UniformGrid& grid, std::size_t decimated) {
  if (r_max < 2) throw ContractError("TP2 check needs r_max >= 2");
  if (decimated < 2) throw ContractError("TP2 check needs at least two grid points");
  const auto powers = convolution_powers(d, r_max, grid);
  const std::size_t stride = std::max<std::size_t>(1, (grid.count + decimated - 1) / decimated);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < grid.count; i += stride) idx.push_back(i);

  Tp2Verdict v;
  v.points = idx.size();
  v.worst_relative = -std::numeric_limits<double>::infinity();
  for (int ri = 2; ri <= r_max; ++ri) {
    const auto& fi = powers[ri - 1].values;
    for (int rj = 1; rj < ri; ++rj) {
      const auto& fj = powers[rj - 1].values;
      for (std::size_t p = 0; p < idx.size(); ++p) {
        for (std::size_t q = p + 1; q < idx.size(); ++q) {
          const std::size_t zi = idx[p];
          const std::size_t zj = idx[q];
          const double lhs = fi[zi] * fj[zj];
          const double rhs = fi[zj] * fj[zi];
          const double denom = lhs + rhs;
          if (!(denom > std::numeric_limits<double>::min())) continue;
          const double rel = (lhs - rhs) / denom;
          if (rel > v.worst_relative) {
            v.worst_relative = rel;
            v.witness_ri = ri;
            v.witness_rj = rj;
            v.witness_zi = grid[zi];
            v.witness_zj = grid[zj];
          }
        }
      }
    }
  }
  if (!std::isfinite(v.worst_relative)) v.worst_relative = 0.0;
  v.holds = v.worst_relative <= kTp2Tolerance;
  return v;
}

}  // namespace coldstandby
