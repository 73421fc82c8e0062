#pragma once

#include <cstddef>
#include <vector>

namespace coldstandby {

/// Equally spaced points x0, x0 + step, ..., x0 + (count - 1) * step.
struct UniformGrid {
  double x0 = 0.0;
  double step = 1.0;
  std::size_t count = 0;

  /// `count` points spanning [lo, hi] inclusive. Requires count >= 2 and lo < hi.
  static UniformGrid spanning(double lo, double hi, std::size_t count);

  double operator[](std::size_t i) const { return x0 + static_cast<double>(i) * step; }
  double back() const { return (*this)[count - 1]; }
  std::vector<double> points() const;
};

}  // namespace coldstandby
