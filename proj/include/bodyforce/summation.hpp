#pragma once

#include <cstddef>
#include <span>

namespace bodyforce {

/// Running sum with an error-free (TwoSum) correction term.
///
/// Every reduction in the library goes through this accumulator in a fixed
/// index order, so a given input always produces the same bits regardless of
/// how work was split across threads.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double initial) : sum_(initial) {}

  void add(double x) noexcept {
    const double s = sum_ + x;
    const double bp = s - sum_;
    const double err = (sum_ - (s - bp)) + (x - bp);
    sum_ = s;
    correction_ += err;
  }

  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  double value() const noexcept { return sum_ + correction_; }

 private:
  double sum_ = 0.0;
  double correction_ = 0.0;
};

inline double compensated_dot(std::span<const double> a, std::span<const double> b) noexcept {
  CompensatedSum acc;
  const std::size_t n = a.size() < b.size() ? a.size() : b.size();
  for (std::size_t i = 0; i < n; ++i) acc.add(a[i] * b[i]);
  return acc.value();
}

}  // namespace bodyforce
