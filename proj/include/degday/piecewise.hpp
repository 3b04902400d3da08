#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace degday {

// Right-continuous piecewise-constant function of time. With breakpoints
// k_1 < ... < k_n and values v_0..v_n it evaluates to v_0 on (-inf, k_1),
// v_i on [k_i, k_{i+1}), and v_n on [k_n, inf). A single value and no
// breakpoints gives a constant function.
class PiecewiseConstant {
 public:
  PiecewiseConstant() : values_{0.0} {}

  explicit PiecewiseConstant(double constant) : values_{constant} {}

  PiecewiseConstant(std::vector<double> breakpoints, std::vector<double> values)
      : breaks_(std::move(breakpoints)), values_(std::move(values)) {
    if (values_.size() != breaks_.size() + 1) {
      throw std::invalid_argument("piecewise: need one more value than breakpoints");
    }
    if (!std::is_sorted(breaks_.begin(), breaks_.end()) ||
        std::adjacent_find(breaks_.begin(), breaks_.end()) != breaks_.end()) {
      throw std::invalid_argument("piecewise: breakpoints must be strictly increasing");
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw std::invalid_argument("piecewise: non-finite value");
    }
  }

  double operator()(double t) const {
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    return values_[static_cast<std::size_t>(it - breaks_.begin())];
  }

  bool is_constant() const { return breaks_.empty(); }

  // True when the function is identically zero (lets integrators skip work).
  bool is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
  }

  double min_value() const { return *std::min_element(values_.begin(), values_.end()); }
  double max_value() const { return *std::max_element(values_.begin(), values_.end()); }

  // Breakpoints strictly inside (a, b); integrands built on this function
  // should be split there before adaptive refinement.
  std::vector<double> breakpoints_in(double a, double b) const {
    std::vector<double> out;
    for (double k : breaks_) {
      if (k > a && k < b) out.push_back(k);
    }
    return out;
  }

  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;
};

}  // namespace degday
