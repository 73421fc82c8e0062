#include "coldstandby/grid.hpp"

#include <cmath>

#include "coldstandby/errors.hpp"

namespace coldstandby {

UniformGrid UniformGrid::spanning(double lo, double hi, std::size_t count) {
  if (count < 2) throw GridError("grid needs at least two points");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw GridError("grid needs finite lo < hi");
  return UniformGrid{lo, (hi - lo) / static_cast<double>(count - 1), count};
}

std::vector<double> UniformGrid::points() const {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = (*this)[i];
  return out;
}

}  // namespace coldstandby
