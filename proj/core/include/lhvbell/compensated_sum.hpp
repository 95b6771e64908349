#pragma once

#include <cmath>

namespace lhvbell {

/// Neumaier (improved Kahan-Babuska) running sum.
class CompensatedSum {
 public:
  constexpr CompensatedSum() noexcept = default;

  constexpr void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  /// Folds another partial sum in. Merge order is part of the result; callers
  /// merge in a fixed (substream / chunk index) order.
  constexpr void merge(const CompensatedSum& other) noexcept {
    add(other.sum_);
    compensation_ += other.compensation_;
  }

  [[nodiscard]] constexpr double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace lhvbell
