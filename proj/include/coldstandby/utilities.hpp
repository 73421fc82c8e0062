#pragma once

#include <string>
#include <variant>
#include <vector>

#include "coldstandby/grid.hpp"

namespace coldstandby {

struct PowerUtility {
  double gamma;
};
struct LogUtility {};
/// a (1 - e^{-bx})
struct ExpSaturatingUtility {
  double a;
  double b;
};
struct IdentityUtility {};
/// Piecewise-linear through (x0 + k*step, values[k]); test fixture.
struct TabulatedUtility {
  double x0;
  double step;
  std::vector<double> values;
};

class Utility {
 public:
  using Kind = std::variant<PowerUtility, LogUtility, ExpSaturatingUtility, IdentityUtility, TabulatedUtility>;

  static Utility power(double gamma);
  static Utility log();
  static Utility exp_saturating(double a, double b);
  static Utility identity();
  static Utility tabulated(double x0, double step, std::vector<double> values);

  const Kind& kind() const { return kind_; }
  std::string describe() const;

  /// Throws DomainError for x < 0 (power), x <= 1e-300 (log), or outside
  /// the table (tabulated).
  double operator()(double x) const;

 private:
  explicit Utility(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

inline double evaluate(const Utility& u, double x) { return u(x); }

struct UtilityShape {
  bool increasing = false;
  bool concave = false;
  bool convex = false;

  friend bool operator==(const UtilityShape&, const UtilityShape&) = default;
};

inline constexpr double kShapeTolerance = 1e-9;

/// Exact answer for the parametric kinds; finite differences on `grid` for tables.
UtilityShape classify(const Utility& u, const UniformGrid& grid);
/// First and second differences on `grid` with tolerance 1e-9.
UtilityShape classify_numeric(const Utility& u, const UniformGrid& grid);

}  // namespace coldstandby
