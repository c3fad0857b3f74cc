#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "nloop/errors.hpp"

namespace nloop {

namespace detail {
// Outside the class so that the member is_zero() does not hide the ADL hook.
template <class T>
bool scalar_is_zero(const T& v) {
  return is_zero(v);
}
}  // namespace detail

/// Truncated Laurent polynomial in hbar: coefficients for degrees
/// min_deg .. min(min_deg + size - 1, cutoff). Terms above the cutoff are
/// dropped by every operation. T needs +, *, is_zero and zero_like.
template <class T>
class HbarSeries {
 public:
  HbarSeries(T zero, int min_deg, int cutoff, std::vector<T> coeffs = {})
      : zero_(std::move(zero)), min_deg_(min_deg), cutoff_(cutoff), c_(std::move(coeffs)) {
    truncate();
  }

  int min_deg() const { return min_deg_; }
  int cutoff() const { return cutoff_; }
  /// Highest stored degree (min_deg - 1 for an empty series).
  int max_deg() const { return min_deg_ + static_cast<int>(c_.size()) - 1; }
  const std::vector<T>& coeffs() const { return c_; }

  const T& coefficient(int deg) const {
    if (deg < min_deg_ || deg > max_deg()) return zero_;
    return c_[static_cast<std::size_t>(deg - min_deg_)];
  }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const T& v) { return nloop_is_zero(v); });
  }

  /// Strips leading and trailing zero coefficients, making min_deg tight.
  HbarSeries& normalize() {
    std::size_t lead = 0;
    while (lead < c_.size() && nloop_is_zero(c_[lead])) ++lead;
    c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
    min_deg_ += static_cast<int>(lead);
    while (!c_.empty() && nloop_is_zero(c_.back())) c_.pop_back();
    return *this;
  }

  HbarSeries with_cutoff(int cutoff) const {
    HbarSeries r(*this);
    r.cutoff_ = cutoff;
    r.truncate();
    return r;
  }

  friend HbarSeries operator+(const HbarSeries& a, const HbarSeries& b) {
    const int cutoff = std::min(a.cutoff_, b.cutoff_);
    if (a.c_.empty()) return b.with_cutoff(cutoff);
    if (b.c_.empty()) return a.with_cutoff(cutoff);
    const int lo = std::min(a.min_deg_, b.min_deg_);
    const int hi = std::min(std::max(a.max_deg(), b.max_deg()), cutoff);
    std::vector<T> c;
    for (int d = lo; d <= hi; ++d) c.push_back(a.coefficient(d) + b.coefficient(d));
    return HbarSeries(a.zero_, lo, cutoff, std::move(c));
  }

  friend HbarSeries operator*(const HbarSeries& a, const HbarSeries& b) {
    const int cutoff = std::min(a.cutoff_, b.cutoff_);
    const int lo = a.min_deg_ + b.min_deg_;
    if (a.c_.empty() || b.c_.empty() || lo > cutoff) return HbarSeries(a.zero_, lo, cutoff);
    const int hi = std::min(a.max_deg() + b.max_deg(), cutoff);
    std::vector<T> c(static_cast<std::size_t>(hi - lo + 1), a.zero_);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (nloop_is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size() && static_cast<int>(i + j) <= hi - lo; ++j) {
        c[i + j] += a.c_[i] * b.c_[j];
      }
    }
    return HbarSeries(a.zero_, lo, cutoff, std::move(c));
  }

  /// Multiplication by the monomial s * hbar^shift.
  HbarSeries scaled(const T& s, int shift) const {
    std::vector<T> c;
    c.reserve(c_.size());
    for (const auto& v : c_) c.push_back(v * s);
    return HbarSeries(zero_, min_deg_ + shift, cutoff_, std::move(c));
  }

 private:
  static bool nloop_is_zero(const T& v) { return detail::scalar_is_zero(v); }

  void truncate() {
    if (max_deg() > cutoff_) c_.resize(static_cast<std::size_t>(std::max(0, cutoff_ - min_deg_ + 1)), zero_);
  }

  T zero_;
  int min_deg_;
  int cutoff_;
  std::vector<T> c_;
};

}  // namespace nloop
