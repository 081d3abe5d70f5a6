#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "wagerlab/rational.hpp"

namespace wagerlab {

/// A set of admissible wagers. Membership may depend on the step index for
/// the schedule kinds (a wager is tested at the position where it is placed).
/// The punctured set `v` contains 0: idle steps are always allowed.
class WagerSet {
 public:
  enum class Kind {
    reals,
    v,  // {0} union {|a| >= 1}
    integers,
    unit,                        // {0, 1}
    harmonic_schedule,           // step n: {0, +-1/(n+1)}
    one_plus_harmonic_schedule,  // step n: {0, +-(1 + 1/(n+1))}
    finite,
  };

  static WagerSet reals() { return WagerSet(Kind::reals); }
  static WagerSet v() { return WagerSet(Kind::v); }
  static WagerSet integers() { return WagerSet(Kind::integers); }
  static WagerSet unit() { return WagerSet(Kind::unit); }
  static WagerSet harmonic_schedule() { return WagerSet(Kind::harmonic_schedule); }
  static WagerSet one_plus_harmonic_schedule() {
    return WagerSet(Kind::one_plus_harmonic_schedule);
  }
  static WagerSet finite(std::vector<Rational> values) {
    WagerSet ws(Kind::finite);
    ws.values_ = std::move(values);
    return ws;
  }

  Kind kind() const { return kind_; }
  const std::vector<Rational>& values() const { return values_; }

  bool contains(const Rational& a, std::size_t step) const {
    switch (kind_) {
      case Kind::reals:
        return true;
      case Kind::v:
        return a.is_zero() || abs(a) >= Rational(1);
      case Kind::integers:
        return a.is_integer();
      case Kind::unit:
        return a.is_zero() || a == Rational(1);
      case Kind::harmonic_schedule: {
        if (a.is_zero()) return true;
        const Rational s(Int(1), Int(step + 1));
        return a == s || a == -s;
      }
      case Kind::one_plus_harmonic_schedule: {
        if (a.is_zero()) return true;
        const Rational s(Int(step + 2), Int(step + 1));
        return a == s || a == -s;
      }
      case Kind::finite:
        return std::find(values_.begin(), values_.end(), a) != values_.end();
    }
    return false;
  }

  std::string name() const {
    switch (kind_) {
      case Kind::reals: return "reals";
      case Kind::v: return "v";
      case Kind::integers: return "integers";
      case Kind::unit: return "unit";
      case Kind::harmonic_schedule: return "harmonic-schedule";
      case Kind::one_plus_harmonic_schedule: return "one-plus-harmonic-schedule";
      case Kind::finite: {
        std::string s = "finite{";
        for (std::size_t i = 0; i < values_.size(); ++i) {
          if (i) s += ",";
          s += values_[i].to_string();
        }
        return s + "}";
      }
    }
    return "?";
  }

 private:
  explicit WagerSet(Kind k) : kind_(k) {}
  Kind kind_;
  std::vector<Rational> values_;
};

}  // namespace wagerlab
