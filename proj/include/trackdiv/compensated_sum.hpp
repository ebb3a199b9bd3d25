// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

namespace trackdiv {

/// Neumaier (improved Kahan-Babuska) running sum.
///
/// Results depend only on the order of the added terms, so callers that add in
/// a fixed order get bit-identical totals across runs.
class CompensatedSum {
 public:
  constexpr CompensatedSum() = default;

  CompensatedSum& operator+=(double value) noexcept {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  constexpr double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace trackdiv
