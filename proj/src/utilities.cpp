#include "coldstandby/utilities.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "coldstandby/errors.hpp"

namespace coldstandby {

namespace {
template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[96];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}
}  // namespace

Utility Utility::power(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("power utility needs gamma > 0");
  return Utility(PowerUtility{gamma});
}

Utility Utility::log() { return Utility(LogUtility{}); }

Utility Utility::exp_saturating(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("exp_saturating utility needs a > 0 and b > 0");
  return Utility(ExpSaturatingUtility{a, b});
}

Utility Utility::identity() { return Utility(IdentityUtility{}); }

Utility Utility::tabulated(double x0, double step, std::vector<double> values) {
  if (!(step > 0.0) || values.size() < 2) throw std::invalid_argument("tabulated utility needs step > 0 and 2+ values");
  return Utility(TabulatedUtility{x0, step, std::move(values)});
}

std::string Utility::describe() const {
  return std::visit(Overloaded{
                        [](const PowerUtility& p) { return fmt("x^%g", p.gamma); },
                        [](const LogUtility&) { return std::string("log(x)"); },
                        [](const ExpSaturatingUtility& e) { return fmt("%g(1-exp(-%gx))", e.a, e.b); },
                        [](const IdentityUtility&) { return std::string("x"); },
                        [](const TabulatedUtility& t) { return fmt("tabulated(%g points from %g)",
                                                                   static_cast<double>(t.values.size()), t.x0); },
                    },
                    kind_);
}

double Utility::operator()(double x) const {
  return std::visit(Overloaded{
                        [x](const PowerUtility& p) {
                          if (x < 0.0) throw DomainError("power utility at negative x");
                          return std::pow(x, p.gamma);
                        },
                        [x](const LogUtility&) {
                          if (!(x > 1e-300)) throw DomainError("log utility at x <= 0");
                          return std::log(x);
                        },
                        [x](const ExpSaturatingUtility& e) { return -e.a * std::expm1(-e.b * x); },
                        [x](const IdentityUtility&) { return x; },
                        [x](const TabulatedUtility& t) {
                          const double pos = (x - t.x0) / t.step;
                          const double last = static_cast<double>(t.values.size() - 1);
                          if (!(pos >= 0.0 && pos <= last)) throw DomainError("tabulated utility outside its table");
                          const auto k = std::min(static_cast<std::size_t>(pos), t.values.size() - 2);
                          const double w = pos - static_cast<double>(k);
                          return t.values[k] + w * (t.values[k + 1] - t.values[k]);
                        },
                    },
                    kind_);
}

UtilityShape classify_numeric(const Utility& u, const UniformGrid& grid) {
  UtilityShape s{true, true, true};
  if (grid.count < 3) throw ContractError("shape classification needs at least three grid points");
  std::vector<double> v(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) v[i] = u(grid[i]);
  for (std::size_t i = 1; i < grid.count; ++i) {
    if (v[i] - v[i - 1] < -kShapeTolerance) s.increasing = false;
  }
  for (std::size_t i = 1; i + 1 < grid.count; ++i) {
    const double d2 = v[i + 1] - 2.0 * v[i] + v[i - 1];
    if (d2 > kShapeTolerance) s.concave = false;
    if (d2 < -kShapeTolerance) s.convex = false;
  }
  return s;
}

UtilityShape classify(const Utility& u, const UniformGrid& grid) {
  return std::visit(Overloaded{
                        [](const PowerUtility& p) { return UtilityShape{true, p.gamma <= 1.0, p.gamma >= 1.0}; },
                        [](const LogUtility&) { return UtilityShape{true, true, false}; },
                        [](const ExpSaturatingUtility&) { return UtilityShape{true, true, false}; },
                        [](const IdentityUtility&) { return UtilityShape{true, true, true}; },
                        [&](const TabulatedUtility&) { return classify_numeric(u, grid); },
                    },
                    u.kind());
}

}  // namespace coldstandby
