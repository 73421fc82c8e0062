#include "coldstandby/copula.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "coldstandby/errors.hpp"

namespace coldstandby {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxOrder = 16;

// phi^{(k)}(t) = exp(-w) * sum_j a[k][j] * w^{-j} with w = sqrt(t), built from
// d/dt = (1 / 2w) d/dw.
using GumbelTable = std::array<std::array<double, 2 * kMaxOrder + 1>, kMaxOrder + 1>;

const GumbelTable& gumbel_coefficients() {
  static const GumbelTable table = [] {
    GumbelTable a{};
    a[0][0] = 1.0;
    for (int k = 0; k < kMaxOrder; ++k) {
      for (int j = 0; j <= 2 * k; ++j) {
        const double c = a[k][j];
        if (c == 0.0) continue;
        a[k + 1][j + 1] += -0.5 * c;
        a[k + 1][j + 2] += -0.5 * static_cast<double>(j) * c;
      }
    }
    return a;
  }();
  return table;
}

void check_order(int k) {
  if (k < 0 || k > kMaxOrder) throw std::out_of_range("generator derivative order out of range");
}

}  // namespace

Generator Generator::clayton(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw std::invalid_argument("clayton theta must be positive");
  return Generator(GeneratorFamily::clayton, theta);
}

Generator Generator::gumbel_barnett() { return Generator(GeneratorFamily::gumbel_barnett, 0.0); }

Generator Generator::independence() { return Generator(GeneratorFamily::independence, 0.0); }

std::string Generator::describe() const {
  switch (family_) {
    case GeneratorFamily::clayton: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "clayton(theta=%g)", theta_);
      return buf;
    }
    case GeneratorFamily::gumbel_barnett:
      return "gumbel_barnett";
    case GeneratorFamily::independence:
      return "independence";
  }
  return "unknown";
}

double Generator::phi(double t) const {
  if (t == kInf) return 0.0;
  switch (family_) {
    case GeneratorFamily::clayton:
      return std::exp(-std::log1p(t) / theta_);
    case GeneratorFamily::gumbel_barnett:
      return std::exp(-std::sqrt(t));
    case GeneratorFamily::independence:
      return std::exp(-t);
  }
  return 0.0;
}

double Generator::inverse(double u) const {
  if (u <= 0.0) return kInf;
  if (u >= 1.0) return 0.0;
  switch (family_) {
    case GeneratorFamily::clayton:
      return std::expm1(-theta_ * std::log(u));
    case GeneratorFamily::gumbel_barnett: {
      const double l = std::log(u);
      return l * l;
    }
    case GeneratorFamily::independence:
      return -std::log(u);
  }
  return 0.0;
}

double Generator::log_abs_derivative(int k, double t) const {
  check_order(k);
  switch (family_) {
    case GeneratorFamily::clayton: {
      const double inv = 1.0 / theta_;
      double log_coef = 0.0;
      for (int j = 0; j < k; ++j) log_coef += std::log(inv + j);
      return log_coef - (inv + k) * std::log1p(t);
    }
    case GeneratorFamily::gumbel_barnett: {
      const double w = std::sqrt(t);
      if (k == 0) return -w;
      const auto& a = gumbel_coefficients()[static_cast<std::size_t>(k)];
      // Horner in 1/w over |a_j|; all nonzero coefficients of one order share a sign.
      const double inv_w = 1.0 / w;
      double acc = 0.0;
      for (int j = 2 * k; j >= 0; --j) acc = acc * inv_w + std::abs(a[static_cast<std::size_t>(j)]);
      return -w + std::log(acc);
    }
    case GeneratorFamily::independence:
      return -t;
  }
  return 0.0;
}

double Generator::derivative(int k, double t) const {
  const double magnitude = std::exp(log_abs_derivative(k, t));
  return (k % 2 == 0) ? magnitude : -magnitude;
}

const char* to_string(CopulaMode mode) { return mode == CopulaMode::copula ? "copula" : "survival"; }

CopulaModel::CopulaModel(Generator generator, CopulaMode mode, std::size_t dimension)
    : generator_(generator), mode_(mode), dimension_(dimension) {
  if (dimension < 2) throw std::invalid_argument("copula dimension must be >= 2");
  if (dimension + 1 > static_cast<std::size_t>(kMaxOrder)) {
    throw std::invalid_argument("copula dimension too large for the derivative tables");
  }
  if (std::abs(generator_.phi(0.0) - 1.0) > 1e-15) throw std::invalid_argument("generator must satisfy phi(0) = 1");
  // Sign pattern of the derivatives on a log-spaced grid.
  for (int e = -80; e <= 80; ++e) {
    const double t = std::pow(10.0, e / 10.0);
    for (int k = 0; k <= static_cast<int>(dimension); ++k) {
      const double signed_value = (k % 2 == 0 ? 1.0 : -1.0) * generator_.derivative(k, t);
      if (!(signed_value >= 0.0)) {
        throw std::invalid_argument("generator is not " + std::to_string(dimension) + "-monotone at t=" +
                                    std::to_string(t));
      }
    }
  }
}

double copula_cdf(const CopulaModel& model, std::span<const double> u) {
  if (u.size() != model.dimension()) throw ContractError("copula argument length differs from dimension");
  double s = 0.0;
  for (double ui : u) {
    if (!(ui >= 0.0 && ui <= 1.0)) throw DomainError("copula argument outside [0, 1]");
    s += model.generator().inverse(ui);
  }
  return model.generator().phi(s);
}

double copula_box_probability(const CopulaModel& model, std::span<const double> lower,
                              std::span<const double> upper) {
  const std::size_t n = model.dimension();
  if (lower.size() != n || upper.size() != n) throw ContractError("box corners must match the copula dimension");
  std::vector<double> corner(n);
  double total = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    int lower_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) {
        corner[i] = lower[i];
        ++lower_count;
      } else {
        corner[i] = upper[i];
      }
    }
    const double c = copula_cdf(model, corner);
    total += (lower_count % 2 == 0) ? c : -c;
  }
  return std::max(total, 0.0);
}

ShapeVerdict is_log_convex_generator(const Generator& g, const UniformGrid& grid) {
  if (grid.count < 3) throw GridError("log-convexity check needs at least three grid points");
  ShapeVerdict verdict;
  std::vector<double> logphi(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) logphi[i] = g.log_abs_derivative(0, grid[i]);
  double worst = kInf;
  for (std::size_t i = 1; i + 1 < grid.count; ++i) {
    const double second = logphi[i - 1] - 2.0 * logphi[i] + logphi[i + 1];
    if (second < worst) {
      worst = second;
      verdict.witness = grid[i];
    }
  }
  verdict.worst_violation = std::max(-worst, 0.0);
  verdict.holds = worst >= -kLogConcavityTolerance;
  return verdict;
}

UniformGrid default_generator_grid() { return UniformGrid::spanning(0.0, 50.0, 2001); }

std::string SampleMatrix::to_csv() const {
  std::string out;
  for (std::size_t c = 0; c < cols; ++c) {
    out += (c ? ",x" : "x") + std::to_string(c + 1);
  }
  out += '\n';
  char buf[32];
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      std::snprintf(buf, sizeof buf, c ? ",%.17g" : "%.17g", (*this)(r, c));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

double CopulaSampler::solve_conditional(int order, double s_prev, double target, std::size_t draw_index) const {
  const Generator& g = model_.generator();
  const double base = g.log_abs_derivative(order, s_prev);
  const double log_target = std::log(target);
  // f(t) = log|phi^{(k)}(s+t)| - log|phi^{(k)}(s)| - log v, strictly decreasing, f(0) > 0.
  auto f = [&](double t) { return g.log_abs_derivative(order, s_prev + t) - base - log_target; };
  auto slope = [&](double t) {
    return -std::exp(g.log_abs_derivative(order + 1, s_prev + t) - g.log_abs_derivative(order, s_prev + t));
  };

  double lo = 0.0;
  double hi = std::max(1.0, s_prev);
  int expansions = 0;
  while (f(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++expansions > 2000 || !std::isfinite(hi)) {
      throw SamplingError("conditional inversion could not bracket the root", draw_index);
    }
  }

  double t = 0.5 * (lo + hi);
  for (int iter = 0; iter < 2000; ++iter) {
    const double ft = f(t);
    if (std::abs(ft) <= 1e-14) return t;
    if (ft > 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return 0.5 * (lo + hi);
    const double d = slope(t);
    double next = t - ft / d;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    t = next;
  }
  throw SamplingError("conditional inversion did not converge", draw_index);
}

void CopulaSampler::draw_uniforms(RandomStream& rng, std::span<double> out, std::size_t draw_index) const {
  const std::size_t n = model_.dimension();
  if (out.size() != n) throw ContractError("output span must match the copula dimension");
  const Generator& g = model_.generator();
  if (g.family() == GeneratorFamily::independence) {
    for (auto& u : out) u = rng.uniform();
    return;
  }
  out[0] = rng.uniform();
  double s = g.inverse(out[0]);
  for (std::size_t k = 1; k < n; ++k) {
    const double v = rng.uniform();
    const int order = static_cast<int>(k);
    const double t = solve_conditional(order, s, v, draw_index);
    const double u = g.phi(t);

    // Residual of the conditional CDF at the returned uniform.
    const double t_back = g.inverse(u);
    const double achieved =
        std::exp(g.log_abs_derivative(order, s + t_back) - g.log_abs_derivative(order, s));
    const double residual = std::abs(achieved - v);
    // Change in the conditional CDF caused by two ulps of u: the floor for any double answer.
    const double ulp_floor =
        t_back > 0.0 ? 2.0 * (std::nextafter(u, 2.0) - u) *
                           std::exp(g.log_abs_derivative(order + 1, s + t_back) - g.log_abs_derivative(order, s) -
                                    g.log_abs_derivative(1, t_back))
                     : 0.0;
    max_residual_ = std::max(max_residual_, residual);
    max_excess_ = std::max(max_excess_, residual - ulp_floor);
    if (!(residual <= kConditionalTolerance + ulp_floor)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "conditional inversion residual %.3g exceeds tolerance (v=%.17g, s=%.17g, t=%.17g)",
                    residual, v, s, t);
      throw SamplingError(buf, draw_index);
    }
    out[k] = u;
    s += t_back;
  }
}

void CopulaSampler::to_lifetimes(std::span<const double> uniforms, std::span<const Distribution> marginals,
                                 std::span<double> out) const {
  constexpr double kLow = std::numeric_limits<double>::min();
  const double high = std::nextafter(1.0, 0.0);
  const bool survival = model_.mode() == CopulaMode::survival;
  for (std::size_t i = 0; i < uniforms.size(); ++i) {
    const double u = std::clamp(uniforms[i], kLow, high);
    out[i] = survival ? marginals[i].survival_quantile_open(u) : marginals[i].quantile_open(u);
  }
}

SampleMatrix sample_uniforms(const CopulaModel& model, std::size_t count, RandomStream& rng) {
  SampleMatrix m{count, model.dimension(), std::vector<double>(count * model.dimension())};
  CopulaSampler sampler(model);
  for (std::size_t r = 0; r < count; ++r) {
    sampler.draw_uniforms(rng, {m.data.data() + r * m.cols, m.cols}, r);
  }
  return m;
}

SampleMatrix sample_joint(const CopulaModel& model, std::span<const Distribution> marginals, std::size_t count,
                          RandomStream& rng) {
  if (marginals.size() != model.dimension()) throw ContractError("one marginal per copula coordinate is required");
  SampleMatrix m{count, model.dimension(), std::vector<double>(count * model.dimension())};
  CopulaSampler sampler(model);
  std::vector<double> u(model.dimension());
  for (std::size_t r = 0; r < count; ++r) {
    sampler.draw_uniforms(rng, u, r);
    sampler.to_lifetimes(u, marginals, {m.data.data() + r * m.cols, m.cols});
  }
  return m;
}

}  // namespace coldstandby
