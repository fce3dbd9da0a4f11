#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dslogistic/params.hpp"

namespace dslogistic {

/// Integer observations with cached branch counts (relative to zero).
class IntSample {
 public:
  IntSample() = default;
  explicit IntSample(std::vector<integer> values) : values_(std::move(values)) {
    for (integer v : values_) {
      if (v < 0) {
        ++s_minus_;
      } else {
        ++s_plus_;
        if (v == 0) ++zeros_;
      }
    }
    std::vector<integer> sorted(values_);
    std::sort(sorted.begin(), sorted.end());
    for (integer v : sorted) {
      if (cells_.empty() || cells_.back().value != v) cells_.push_back({v, 0});
      ++cells_.back().count;
    }
  }

  struct Cell {
    integer value;
    std::size_t count;
  };

  std::span<const integer> values() const noexcept { return values_; }
  /// Distinct values in increasing order with their multiplicities.
  std::span<const Cell> cells() const noexcept { return cells_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  /// Number of values < 0.
  std::size_t s_minus() const noexcept { return s_minus_; }
  /// Number of values >= 0.
  std::size_t s_plus() const noexcept { return s_plus_; }
  /// Number of values == 0.
  std::size_t zeros() const noexcept { return zeros_; }

  integer min() const {
    if (values_.empty()) throw std::logic_error("min() of empty sample");
    return *std::min_element(values_.begin(), values_.end());
  }
  integer max() const {
    if (values_.empty()) throw std::logic_error("max() of empty sample");
    return *std::max_element(values_.begin(), values_.end());
  }

  /// Copy with every value replaced by value - offset.
  IntSample shifted(integer offset) const {
    std::vector<integer> out(values_);
    for (auto& v : out) v -= offset;
    return IntSample(std::move(out));
  }

  double mean() const {
    double s = 0.0;
    for (integer v : values_) s += static_cast<double>(v);
    return values_.empty() ? 0.0 : s / static_cast<double>(values_.size());
  }

  double variance() const {
    if (values_.size() < 2) return 0.0;
    const double m = mean();
    double s = 0.0;
    for (integer v : values_) {
      const double e = static_cast<double>(v) - m;
      s += e * e;
    }
    return s / static_cast<double>(values_.size() - 1);
  }

  friend bool operator==(const IntSample& a, const IntSample& b) {
    return a.values_ == b.values_;
  }

 private:
  std::vector<integer> values_;
  std::vector<Cell> cells_;
  std::size_t s_minus_ = 0;
  std::size_t s_plus_ = 0;
  std::size_t zeros_ = 0;
};

}  // namespace dslogistic
