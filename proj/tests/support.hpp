#pragma once

#include <cmath>
#include <vector>

#include "coldstandby/dependence.hpp"
#include "coldstandby/random.hpp"

namespace testing_support {

// Random k x k pmf on support 1..k. Mass is tilted towards one triangle by a
// random factor, and a fifth of the draws are symmetrized, so both passing and
// failing WSAI instances occur.
inline coldstandby::DiscreteBivariate random_pmf(std::size_t k, coldstandby::RandomStream& rng) {
  std::vector<double> support(k);
  for (std::size_t i = 0; i < k; ++i) support[i] = static_cast<double>(i + 1);
  const double tilt = std::exp(2.0 * (rng.uniform() - 0.3));
  const bool symmetric = rng.uniform() < 0.2;
  std::vector<double> p(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double u = rng.uniform();
      p[i * k + j] = u * u * u * (i < j ? tilt : 1.0);
    }
  }
  if (symmetric) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < i; ++j) p[i * k + j] = p[j * k + i];
    }
  }
  double total = 0;
  for (double x : p) total += x;
  for (double& x : p) x /= total;
  return coldstandby::DiscreteBivariate(support, p);
}

}  // namespace testing_support
