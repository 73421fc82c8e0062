#include "coldstandby/marginals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "coldstandby/errors.hpp"

namespace coldstandby {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Bisection on a nondecreasing function over [lo, hi] to absolute width 1e-10.
template <class F>
double invert_by_bisection(F&& cdf, double p, double lo, double hi) {
  for (int iter = 0; iter < 200 && hi - lo > 1e-10; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double beta_pdf(const BetaDist& d, double x) {
  if (x < 0.0 || x > 1.0) return 0.0;
  if (x == 0.0) return d.a < 1.0 ? kInf : (d.a == 1.0 ? d.b : 0.0);
  if (x == 1.0) return d.b < 1.0 ? kInf : (d.b == 1.0 ? d.a : 0.0);
  return boost::math::ibeta_derivative(d.a, d.b, x);
}

double weibull_pdf(double shape, double x) {
  if (x < 0.0) return 0.0;
  if (x == 0.0) return shape < 1.0 ? kInf : (shape == 1.0 ? 1.0 : 0.0);
  return shape * std::pow(x, shape - 1.0) * std::exp(-std::pow(x, shape));
}

double tabulated_cdf(const TabulatedCdf& t, double x) {
  if (x < t.x0) return 0.0;
  const double pos = (x - t.x0) / t.step;
  const auto last = t.cdf.size() - 1;
  if (pos >= static_cast<double>(last)) return 1.0;
  const auto k = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(k);
  return t.cdf[k] + frac * (t.cdf[k + 1] - t.cdf[k]);
}

}  // namespace

Distribution Distribution::exponential(double rate) {
  require(rate > 0.0 && std::isfinite(rate), "exponential rate must be positive");
  return Distribution(Exponential{rate});
}

Distribution Distribution::weibull(double shape) {
  require(shape > 0.0 && std::isfinite(shape), "weibull shape must be positive");
  return Distribution(Weibull{shape});
}

Distribution Distribution::beta(double a, double b) {
  require(a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b), "beta parameters must be positive");
  return Distribution(BetaDist{a, b});
}

Distribution Distribution::scaled_exp_cdf(double c) {
  require(c > 0.0 && std::isfinite(c), "scaled_exp_cdf parameter must be positive");
  return Distribution(ScaledExpCdf{c});
}

Distribution Distribution::discrete(std::vector<double> support, std::vector<double> pmf) {
  require(!support.empty(), "discrete support must be nonempty");
  require(support.size() == pmf.size(), "discrete support and pmf differ in length");
  for (std::size_t i = 1; i < support.size(); ++i) {
    require(support[i - 1] < support[i], "discrete support must be strictly ascending");
  }
  double total = 0.0;
  for (double p : pmf) {
    require(p >= 0.0 && std::isfinite(p), "discrete pmf entries must be nonnegative");
    total += p;
  }
  require(std::abs(total - 1.0) <= 1e-12, "discrete pmf must sum to 1");
  return Distribution(DiscreteFinite{std::move(support), std::move(pmf)});
}

Distribution Distribution::tabulated(double x0, double step, std::vector<double> cdf) {
  require(std::isfinite(x0) && step > 0.0, "tabulated grid needs a positive step");
  require(cdf.size() >= 2, "tabulated cdf needs at least two points");
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    require(cdf[i] >= 0.0 && cdf[i] <= 1.0 + 1e-9, "tabulated cdf values must lie in [0, 1]");
    if (i > 0) require(cdf[i] >= cdf[i - 1], "tabulated cdf must be nondecreasing");
  }
  require(std::abs(cdf.back() - 1.0) <= 1e-9, "tabulated cdf must end at 1");
  cdf.back() = 1.0;
  return Distribution(TabulatedCdf{x0, step, std::move(cdf)});
}

std::string Distribution::describe() const {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&](const Exponential& d) { out << "Exponential(" << d.rate << ")"; },
                 [&](const Weibull& d) { out << "Weibull(" << d.shape << ")"; },
                 [&](const BetaDist& d) { out << "Beta(" << d.a << "," << d.b << ")"; },
                 [&](const ScaledExpCdf& d) { out << "ScaledExpCdf(" << d.c << ")"; },
                 [&](const DiscreteFinite& d) { out << "DiscreteFinite[" << d.support.size() << "]"; },
                 [&](const TabulatedCdf& d) { out << "Tabulated[" << d.cdf.size() << "]"; },
             },
             kind_);
  return out.str();
}

double Distribution::pdf(double x) const {
  return std::visit(
      Overloaded{
          [&](const Exponential& d) { return x < 0.0 ? 0.0 : d.rate * std::exp(-d.rate * x); },
          [&](const Weibull& d) { return weibull_pdf(d.shape, x); },
          [&](const BetaDist& d) { return beta_pdf(d, x); },
          [&](const ScaledExpCdf& d) {
            return (x < 0.0 || x > 1.0) ? 0.0 : d.c * std::exp(d.c * x) / std::expm1(d.c);
          },
          [&](const DiscreteFinite& d) {
            const auto it = std::lower_bound(d.support.begin(), d.support.end(), x);
            if (it == d.support.end() || *it != x) return 0.0;
            return d.pmf[static_cast<std::size_t>(it - d.support.begin())];
          },
          [&](const TabulatedCdf& t) {
            const double last = t.x0 + t.step * static_cast<double>(t.cdf.size() - 1);
            if (x < t.x0 || x > last) throw DomainError("tabulated pdf requested outside its grid");
            auto k = static_cast<std::size_t>((x - t.x0) / t.step);
            k = std::min(k, t.cdf.size() - 2);
            return (t.cdf[k + 1] - t.cdf[k]) / t.step;
          },
      },
      kind_);
}

double Distribution::log_pdf(double x) const {
  return std::visit(Overloaded{
                        [&](const Exponential& d) { return x < 0.0 ? -kInf : std::log(d.rate) - d.rate * x; },
                        [&](const Weibull& d) {
                          if (x <= 0.0) return std::log(weibull_pdf(d.shape, x));
                          return std::log(d.shape) + (d.shape - 1.0) * std::log(x) - std::pow(x, d.shape);
                        },
                        [&](const BetaDist& d) {
                          if (x <= 0.0 || x >= 1.0) return std::log(beta_pdf(d, x));
                          return (d.a - 1.0) * std::log(x) + (d.b - 1.0) * std::log1p(-x) -
                                 std::log(boost::math::beta(d.a, d.b));
                        },
                        [&](const ScaledExpCdf& d) {
                          if (x < 0.0 || x > 1.0) return -kInf;
                          return std::log(d.c) + d.c * x - std::log(std::expm1(d.c));
                        },
                        [&](const auto&) { return std::log(pdf(x)); },
                    },
                    kind_);
}

double Distribution::cdf(double x) const {
  return std::visit(Overloaded{
                        [&](const Exponential& d) { return x <= 0.0 ? 0.0 : -std::expm1(-d.rate * x); },
                        [&](const Weibull& d) { return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x, d.shape)); },
                        [&](const BetaDist& d) {
                          if (x <= 0.0) return 0.0;
                          if (x >= 1.0) return 1.0;
                          return boost::math::ibeta(d.a, d.b, x);
                        },
                        [&](const ScaledExpCdf& d) {
                          if (x <= 0.0) return 0.0;
                          if (x >= 1.0) return 1.0;
                          return std::expm1(d.c * x) / std::expm1(d.c);
                        },
                        [&](const DiscreteFinite& d) {
                          double acc = 0.0;
                          for (std::size_t i = 0; i < d.support.size() && d.support[i] <= x; ++i) acc += d.pmf[i];
                          return std::min(acc, 1.0);
                        },
                        [&](const TabulatedCdf& t) { return tabulated_cdf(t, x); },
                    },
                    kind_);
}

double Distribution::survival(double x) const {
  return std::visit(Overloaded{
                        [&](const Exponential& d) { return x <= 0.0 ? 1.0 : std::exp(-d.rate * x); },
                        [&](const Weibull& d) { return x <= 0.0 ? 1.0 : std::exp(-std::pow(x, d.shape)); },
                        [&](const BetaDist& d) {
                          if (x <= 0.0) return 1.0;
                          if (x >= 1.0) return 0.0;
                          return boost::math::ibetac(d.a, d.b, x);
                        },
                        [&](const DiscreteFinite& d) {
                          double acc = 0.0;
                          for (std::size_t i = d.support.size(); i-- > 0 && d.support[i] > x;) acc += d.pmf[i];
                          return std::min(acc, 1.0);
                        },
                        [&](const auto&) { return 1.0 - cdf(x); },
                    },
                    kind_);
}

double Distribution::log_cdf(double x) const { return std::log(cdf(x)); }

double Distribution::log_survival(double x) const {
  return std::visit(Overloaded{
                        [&](const Exponential& d) { return x <= 0.0 ? 0.0 : -d.rate * x; },
                        [&](const Weibull& d) { return x <= 0.0 ? 0.0 : -std::pow(x, d.shape); },
                        [&](const auto&) { return std::log(survival(x)); },
                    },
                    kind_);
}

double Distribution::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile argument outside [0, 1]");
  if (p == 0.0) return support_lower();
  if (p == 1.0) {
    const double hi = support_upper();
    if (std::isinf(hi)) throw DomainError("quantile(1) is infinite for unbounded support");
    return hi;
  }
  return quantile_open(p);
}

double Distribution::survival_quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("survival quantile argument outside [0, 1]");
  if (p == 0.0) return quantile(1.0);
  if (p == 1.0) return support_lower();
  return survival_quantile_open(p);
}

double Distribution::quantile_open(double p) const {
  return std::visit(Overloaded{
                        [&](const Exponential& d) { return -std::log1p(-p) / d.rate; },
                        [&](const Weibull& d) { return std::pow(-std::log1p(-p), 1.0 / d.shape); },
                        [&](const BetaDist& d) { return boost::math::ibeta_inv(d.a, d.b, p); },
                        [&](const ScaledExpCdf& d) { return std::log1p(p * std::expm1(d.c)) / d.c; },
                        [&](const DiscreteFinite& d) {
                          double acc = 0.0;
                          for (std::size_t i = 0; i < d.support.size(); ++i) {
                            acc += d.pmf[i];
                            if (acc >= p) return d.support[i];
                          }
                          return d.support.back();
                        },
                        [&](const TabulatedCdf& t) {
                          const double last = t.x0 + t.step * static_cast<double>(t.cdf.size() - 1);
                          return invert_by_bisection([&](double x) { return tabulated_cdf(t, x); }, p, t.x0, last);
                        },
                    },
                    kind_);
}

double Distribution::survival_quantile_open(double p) const {
  return std::visit(Overloaded{
                        [&](const Exponential& d) { return -std::log(p) / d.rate; },
                        [&](const Weibull& d) { return std::pow(-std::log(p), 1.0 / d.shape); },
                        [&](const BetaDist& d) { return boost::math::ibetac_inv(d.a, d.b, p); },
                        [&](const auto&) { return quantile_open(1.0 - p); },
                    },
                    kind_);
}

double Distribution::mean() const {
  return std::visit(Overloaded{
                        [](const Exponential& d) { return 1.0 / d.rate; },
                        [](const Weibull& d) { return std::tgamma(1.0 + 1.0 / d.shape); },
                        [](const BetaDist& d) { return d.a / (d.a + d.b); },
                        [](const ScaledExpCdf& d) { return 1.0 - 1.0 / d.c + 1.0 / std::expm1(d.c); },
                        [](const DiscreteFinite& d) {
                          return std::inner_product(d.support.begin(), d.support.end(), d.pmf.begin(), 0.0);
                        },
                        [](const TabulatedCdf& t) {
                          double m = t.x0 * t.cdf.front();
                          for (std::size_t k = 0; k + 1 < t.cdf.size(); ++k) {
                            const double mid = t.x0 + t.step * (static_cast<double>(k) + 0.5);
                            m += (t.cdf[k + 1] - t.cdf[k]) * mid;
                          }
                          return m;
                        },
                    },
                    kind_);
}

double Distribution::support_lower() const {
  return std::visit(Overloaded{
                        [](const DiscreteFinite& d) { return d.support.front(); },
                        [](const TabulatedCdf& t) { return t.x0; },
                        [](const auto&) { return 0.0; },
                    },
                    kind_);
}

double Distribution::support_upper() const {
  return std::visit(Overloaded{
                        [](const Exponential&) { return kInf; },
                        [](const Weibull&) { return kInf; },
                        [](const DiscreteFinite& d) { return d.support.back(); },
                        [](const TabulatedCdf& t) { return t.x0 + t.step * static_cast<double>(t.cdf.size() - 1); },
                        [](const auto&) { return 1.0; },
                    },
                    kind_);
}

std::vector<double> Distribution::sample(std::size_t count, RandomStream& rng) const {
  std::vector<double> out(count);
  for (auto& v : out) v = draw(rng);
  return out;
}

bool operator==(const Distribution& a, const Distribution& b) {
  if (a.kind_.index() != b.kind_.index()) return false;
  return std::visit(Overloaded{
                        [&](const Exponential& d) { return d.rate == std::get<Exponential>(b.kind_).rate; },
                        [&](const Weibull& d) { return d.shape == std::get<Weibull>(b.kind_).shape; },
                        [&](const BetaDist& d) {
                          const auto& o = std::get<BetaDist>(b.kind_);
                          return d.a == o.a && d.b == o.b;
                        },
                        [&](const ScaledExpCdf& d) { return d.c == std::get<ScaledExpCdf>(b.kind_).c; },
                        [&](const DiscreteFinite& d) {
                          const auto& o = std::get<DiscreteFinite>(b.kind_);
                          return d.support == o.support && d.pmf == o.pmf;
                        },
                        [&](const TabulatedCdf& t) {
                          const auto& o = std::get<TabulatedCdf>(b.kind_);
                          return t.x0 == o.x0 && t.step == o.step && t.cdf == o.cdf;
                        },
                    },
                    a.kind_);
}

// ---------------------------------------------------------------------------

double TabulatedDensity::integral() const {
  if (values.size() < 2) return 0.0;
  double acc = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) acc += values[i];
  return acc * grid.step;
}

std::string TabulatedDensity::to_csv() const {
  std::string out = "x,f\n";
  char line[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", grid[i], values[i]);
    out += line;
  }
  return out;
}

ShapeVerdict is_log_concave_density(const Distribution& d, const UniformGrid& grid) {
  if (d.is_discrete()) throw ContractError("log-concavity check needs a density");
  if (grid.count < 3) throw GridError("log-concavity check needs at least three grid points");
  std::vector<double> logf(grid.count);
  ShapeVerdict verdict;
  for (std::size_t i = 0; i < grid.count; ++i) {
    logf[i] = d.log_pdf(grid[i]);
    if (!std::isfinite(logf[i])) {
      verdict.inconclusive = true;
      verdict.witness = grid[i];
      return verdict;
    }
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < grid.count; ++i) {
    const double second = logf[i - 1] - 2.0 * logf[i] + logf[i + 1];
    if (second > worst) {
      worst = second;
      verdict.witness = grid[i];
    }
  }
  verdict.worst_violation = std::max(worst, 0.0);
  verdict.holds = worst <= kLogConcavityTolerance;
  return verdict;
}

UniformGrid default_convolution_grid(const Distribution& d, int r, std::size_t points) {
  if (r < 1) throw ContractError("convolution order must be >= 1");
  const double hi = static_cast<double>(r) * d.quantile(1.0 - 1e-6);
  return UniformGrid::spanning(0.0, hi, points);
}

namespace {

std::vector<double> sampled_density(const Distribution& d, const UniformGrid& grid) {
  std::vector<double> f(grid.count);
  const double lo = d.support_lower();
  const double hi = d.support_upper();
  for (std::size_t i = 0; i < grid.count; ++i) {
    const double x = grid[i];
    if (x < lo || x > hi) {
      f[i] = 0.0;
      continue;
    }
    double v = d.pdf(x);
    if (!std::isfinite(v)) {
      // Integrable singularity at a support endpoint: use the cell average.
      const double half = 0.5 * grid.step;
      v = (d.cdf(x + half) - d.cdf(x - half)) / grid.step;
    }
    f[i] = v;
  }
  return f;
}

std::vector<double> trapezoid_convolution(const std::vector<double>& a, const std::vector<double>& b, double h) {
  const std::size_t n = a.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= k; ++j) acc += a[j] * b[k - j];
    acc -= 0.5 * (a[0] * b[k] + a[k] * b[0]);
    out[k] = h * acc;
  }
  return out;
}

double trapezoid(const std::vector<double>& v, double h) {
  if (v.size() < 2) return 0.0;
  double acc = 0.5 * (v.front() + v.back());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) acc += v[i];
  return acc * h;
}

constexpr double kMaxTailMass = 1e-3;

}  // namespace

std::vector<TabulatedDensity> convolution_powers(const Distribution& d, int r_max, const UniformGrid& grid) {
  if (d.is_discrete()) throw ContractError("convolution needs a continuous distribution");
  if (r_max < 1) throw ContractError("convolution order must be >= 1");
  if (grid.count < 2) throw GridError("convolution grid needs at least two points");
  if (grid.x0 != 0.0) throw GridError("convolution grid must start at 0");

  const auto base = sampled_density(d, grid);
  std::vector<TabulatedDensity> out;
  out.reserve(static_cast<std::size_t>(r_max));
  for (int r = 1; r <= r_max; ++r) {
    // A sum of r copies exceeds L only if some copy exceeds L / r.
    const double tail = static_cast<double>(r) * d.survival(grid.back() / static_cast<double>(r));
    if (tail > kMaxTailMass) {
      throw GridError("convolution grid too short: up to " + std::to_string(tail) + " of the " + std::to_string(r) +
                      "-fold mass lies beyond " + std::to_string(grid.back()));
    }
    TabulatedDensity td{grid, r == 1 ? base : trapezoid_convolution(out.back().values, base, grid.step)};
    if (r > 1) {
      const double mass = trapezoid(td.values, grid.step);
      for (auto& v : td.values) v /= mass;
    }
    out.push_back(std::move(td));
  }
  return out;
}

TabulatedDensity convolve_iid(const Distribution& d, int r, const UniformGrid& grid) {
  auto powers = convolution_powers(d, r, grid);
  return std::move(powers.back());
}

TabulatedDensity convolve(const TabulatedDensity& a, const TabulatedDensity& b) {
  if (a.grid.x0 != b.grid.x0 || a.grid.step != b.grid.step || a.values.size() != b.values.size()) {
    throw GridError("convolution operands must share a grid");
  }
  if (a.grid.x0 != 0.0) throw GridError("convolution grid must start at 0");
  TabulatedDensity out{a.grid, trapezoid_convolution(a.values, b.values, a.grid.step)};
  const double mass = out.integral();
  if (mass > 0.0) {
    for (auto& v : out.values) v /= mass;
  }
  return out;
}

}  // namespace coldstandby
