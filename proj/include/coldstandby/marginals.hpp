#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "coldstandby/grid.hpp"
#include "coldstandby/random.hpp"

namespace coldstandby {

struct Exponential {
  double rate;
};

/// Weibull with unit scale: F(x) = 1 - exp(-x^shape). Other scales are handled
/// by rescaling time before building the model.
struct Weibull {
  double shape;
};

struct BetaDist {
  double a;
  double b;
};

/// F(x) = (e^{cx} - 1) / (e^c - 1) on [0, 1].
struct ScaledExpCdf {
  double c;
};

struct DiscreteFinite {
  std::vector<double> support;  // strictly ascending
  std::vector<double> pmf;
};

/// Piecewise-linear CDF through (x0 + k*step, cdf[k]).
struct TabulatedCdf {
  double x0;
  double step;
  std::vector<double> cdf;
};

/// Univariate lifetime law. Immutable once constructed; every operation is
/// const and thread-safe. Construction validates parameters and throws
/// std::invalid_argument on bad input.
class Distribution {
 public:
  using Kind = std::variant<Exponential, Weibull, BetaDist, ScaledExpCdf, DiscreteFinite, TabulatedCdf>;

  static Distribution exponential(double rate);
  static Distribution weibull(double shape);
  static Distribution beta(double a, double b);
  static Distribution scaled_exp_cdf(double c);
  static Distribution discrete(std::vector<double> support, std::vector<double> pmf);
  static Distribution tabulated(double x0, double step, std::vector<double> cdf);

  const Kind& kind() const { return kind_; }
  std::string describe() const;

  bool is_discrete() const { return std::holds_alternative<DiscreteFinite>(kind_); }

  /// Density; for DiscreteFinite the probability mass at x (0 off the support).
  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;
  double survival(double x) const;
  double log_cdf(double x) const;
  double log_survival(double x) const;

  /// Smallest x with F(x) >= p. Throws DomainError when p is outside [0, 1]
  /// or the answer is infinite.
  double quantile(double p) const;
  /// Inverse of the survival function, F̄^{-1}(p) = quantile(1 - p), computed
  /// without forming 1 - p where a closed form exists.
  double survival_quantile(double p) const;

  double mean() const;
  double support_lower() const;
  /// +infinity for unbounded support.
  double support_upper() const;

  double draw(RandomStream& rng) const { return quantile_open(rng.uniform()); }
  std::vector<double> sample(std::size_t count, RandomStream& rng) const;

  /// Quantile for p in the open interval (0, 1); skips range checks.
  double quantile_open(double p) const;
  double survival_quantile_open(double p) const;

  friend bool operator==(const Distribution& a, const Distribution& b);

 private:
  explicit Distribution(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// Density ordinates on a uniform grid.
struct TabulatedDensity {
  UniformGrid grid;
  std::vector<double> values;

  double integral() const;  // trapezoidal
  /// Two-column CSV, header "x,f".
  std::string to_csv() const;
};

struct ShapeVerdict {
  bool holds = false;
  /// Set when the density (or generator) vanishes inside the grid.
  bool inconclusive = false;
  double worst_violation = 0.0;
  double witness = 0.0;
};

inline constexpr double kLogConcavityTolerance = 1e-8;

/// Second differences of log pdf must stay <= 1e-8 at every interior point.
ShapeVerdict is_log_concave_density(const Distribution& d, const UniformGrid& grid);

/// Default grid for r-fold convolutions: 4096 points over [0, r * q(1 - 1e-6)].
UniformGrid default_convolution_grid(const Distribution& d, int r, std::size_t points = 4096);

/// Density of the sum of r i.i.d. copies of d on `grid` (which must start at 0),
/// by iterated trapezoidal convolution with renormalization.
/// Throws GridError when more than 1e-3 of the sum's mass lies past the grid.
TabulatedDensity convolve_iid(const Distribution& d, int r, const UniformGrid& grid);

/// f^{(1)}, ..., f^{(r_max)} on a shared grid.
std::vector<TabulatedDensity> convolution_powers(const Distribution& d, int r_max, const UniformGrid& grid);

/// Trapezoidal convolution of two densities tabulated on the same grid.
TabulatedDensity convolve(const TabulatedDensity& a, const TabulatedDensity& b);

}  // namespace coldstandby
