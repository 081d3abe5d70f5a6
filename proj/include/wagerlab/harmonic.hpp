#pragma once

#include <cstddef>
#include <stdexcept>

#include "wagerlab/rational.hpp"

namespace wagerlab {

/// H(n) = sum_{k=1}^{n} 1/k, exactly. O(n) rational additions.
inline Rational harmonic_sum(std::size_t n) {
  Rational h(0);
  for (std::size_t k = 1; k <= n; ++k) h += Rational(Int(1), Int(k));
  return h;
}

/// Sliding window of consecutive harmonic terms: value() = H(hi) - H(lo) =
/// sum_{j=lo+1}^{hi} 1/j, maintained incrementally so long runs never
/// recompute partial sums from scratch.
class HarmonicWindow {
 public:
  HarmonicWindow() = default;

  std::size_t lo() const { return lo_; }
  std::size_t hi() const { return hi_; }
  std::size_t width() const { return hi_ - lo_; }
  const Rational& value() const { return value_; }

  /// Drops the bottom term 1/(lo+1).
  void advance_lo() {
    if (lo_ == hi_) throw std::logic_error("HarmonicWindow: empty");
    value_ -= Rational(Int(1), Int(lo_ + 1));
    ++lo_;
  }
  /// Appends the term 1/(hi+1) on top.
  void grow_hi() {
    ++hi_;
    value_ += Rational(Int(1), Int(hi_));
  }
  /// Removes the top term 1/hi.
  void shrink_hi() {
    if (lo_ == hi_) throw std::logic_error("HarmonicWindow: empty");
    value_ -= Rational(Int(1), Int(hi_));
    --hi_;
  }

 private:
  std::size_t lo_ = 0;
  std::size_t hi_ = 0;
  Rational value_;
};

/// Largest k >= 0 with k + H(n+k) - H(n) <= m: the number of consecutive
/// losses a bettor wagering 1 + 1/t at time t can survive from time n with
/// capital m. Direct scan; the constructions keep an incremental equivalent.
inline std::size_t survivable_losses(std::size_t n, const Rational& m) {
  if (m < Rational(0)) return 0;
  std::size_t k = 0;
  Rational cost(0);  // k + H(n+k) - H(n)
  for (;;) {
    const Rational next = cost + Rational(1) + Rational(Int(1), Int(n + k + 1));
    if (next > m) return k;
    cost = next;
    ++k;
  }
}

}  // namespace wagerlab
