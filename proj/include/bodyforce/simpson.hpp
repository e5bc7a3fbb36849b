#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bodyforce/errors.hpp"
#include "bodyforce/summation.hpp"

namespace bodyforce {

inline void require_simpson_count(std::size_t n, const char* what) {
  if (n < 3 || n % 2 == 0)
    throw InvalidInput(std::string(what) + ": composite Simpson needs an odd node count >= 3, got " +
                       std::to_string(n));
}

/// Composite Simpson weights (h/3)·[1, 4, 2, 4, ..., 2, 4, 1].
inline std::vector<double> simpson_weights(std::size_t n, double h) {
  require_simpson_count(n, "simpson_weights");
  std::vector<double> w(n);
  const double third = h / 3.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || i + 1 == n)
      w[i] = third;
    else
      w[i] = (i % 2 == 1 ? 4.0 : 2.0) * third;
  }
  return w;
}

inline double simpson_1d(std::span<const double> samples, double h) {
  require_simpson_count(samples.size(), "simpson_1d");
  const auto w = simpson_weights(samples.size(), h);
  return compensated_dot(samples, w);
}

}  // namespace bodyforce
