#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "coldstandby/grid.hpp"
#include "coldstandby/marginals.hpp"
#include "coldstandby/random.hpp"

namespace coldstandby {

enum class GeneratorFamily { clayton, gumbel_barnett, independence };

/// Archimedean generator phi: [0, inf) -> (0, 1] with phi(0) = 1, decreasing
/// to 0. The copula is C(u) = phi(sum_i phi^{-1}(u_i)).
///
///   clayton(theta)   phi(t) = (1 + t)^{-1/theta}
///   gumbel_barnett   phi(t) = exp(-sqrt(t))
///   independence     phi(t) = exp(-t)
class Generator {
 public:
  static Generator clayton(double theta);
  static Generator gumbel_barnett();
  static Generator independence();

  GeneratorFamily family() const { return family_; }
  double theta() const { return theta_; }
  std::string describe() const;

  double phi(double t) const;
  /// phi^{-1}(u); +infinity at u = 0.
  double inverse(double u) const;
  /// k-th derivative of phi. All three families are completely monotone, so
  /// (-1)^k phi^{(k)} >= 0.
  double derivative(int k, double t) const;
  /// log |phi^{(k)}(t)|, evaluated without cancellation.
  double log_abs_derivative(int k, double t) const;

  friend bool operator==(const Generator&, const Generator&) = default;

 private:
  Generator(GeneratorFamily family, double theta) : family_(family), theta_(theta) {}

  GeneratorFamily family_;
  double theta_;
};

enum class CopulaMode {
  /// Uniforms are the component CDF values: X_i = F_i^{-1}(U_i).
  copula,
  /// Uniforms are the component survival values: X_i = F̄_i^{-1}(U_i).
  survival,
};

const char* to_string(CopulaMode mode);

class CopulaModel {
 public:
  /// Throws std::invalid_argument if dimension < 2 or the generator fails the
  /// sign check (-1)^k phi^{(k)} >= 0 for k <= dimension on a log-spaced grid.
  CopulaModel(Generator generator, CopulaMode mode, std::size_t dimension);

  const Generator& generator() const { return generator_; }
  CopulaMode mode() const { return mode_; }
  std::size_t dimension() const { return dimension_; }

 private:
  Generator generator_;
  CopulaMode mode_;
  std::size_t dimension_;
};

/// phi(sum phi^{-1}(u_i)). Throws DomainError for u outside [0,1]^n and
/// ContractError on a length mismatch.
double copula_cdf(const CopulaModel& model, std::span<const double> u);

/// Probability that the uniform vector lands in the box (lower, upper].
double copula_box_probability(const CopulaModel& model, std::span<const double> lower,
                              std::span<const double> upper);

/// Second differences of log phi must be >= -1e-8 on the grid.
ShapeVerdict is_log_convex_generator(const Generator& g, const UniformGrid& grid);
UniformGrid default_generator_grid();

/// Row-major count x dim matrix.
struct SampleMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
  std::string to_csv() const;
};

/// Residual bound enforced on every conditional inversion.
inline constexpr double kConditionalTolerance = 1e-10;

/// Conditional-distribution sampler. Coordinate k >= 1 solves
///   phi^{(k)}(s_{k-1} + t) / phi^{(k)}(s_{k-1}) = v,   s_{k-1} = sum_{i<k} phi^{-1}(u_i)
/// for t by safeguarded Newton, then sets u_k = phi(t).
class CopulaSampler {
 public:
  explicit CopulaSampler(const CopulaModel& model) : model_(model) {}

  /// Writes one vector of dependent uniforms into `out` (length = dimension).
  /// `draw_index` only labels errors.
  void draw_uniforms(RandomStream& rng, std::span<double> out, std::size_t draw_index = 0) const;

  /// Maps uniforms to lifetimes according to the model's mode.
  void to_lifetimes(std::span<const double> uniforms, std::span<const Distribution> marginals,
                    std::span<double> out) const;

  /// Largest |C(u_k | u_1..u_{k-1}) - v| this sampler has accepted so far.
  /// Near u = 1 a single ulp of u can move the conditional CDF by more than
  /// kConditionalTolerance; draws are accepted when the residual is within
  /// the tolerance plus that two-ulp floor.
  double max_residual() const { return max_residual_; }
  /// Largest residual in excess of the two-ulp floor.
  double max_excess() const { return max_excess_; }

 private:
  double solve_conditional(int order, double s_prev, double target, std::size_t draw_index) const;

  CopulaModel model_;
  mutable double max_residual_ = 0.0;
  mutable double max_excess_ = 0.0;
};

SampleMatrix sample_uniforms(const CopulaModel& model, std::size_t count, RandomStream& rng);

/// count joint lifetime vectors with the given marginals.
SampleMatrix sample_joint(const CopulaModel& model, std::span<const Distribution> marginals, std::size_t count,
                          RandomStream& rng);

}  // namespace coldstandby
