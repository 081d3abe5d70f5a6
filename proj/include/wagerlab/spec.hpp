#pragma once

#include <functional>
#include <string>
#include <utility>

#include "wagerlab/bits.hpp"
#include "wagerlab/errors.hpp"
#include "wagerlab/rational.hpp"
#include "wagerlab/wager_set.hpp"

namespace wagerlab {

/// A supermartingale, given constructively: initial capital, a wager rule
/// M'(sigma), and a marginal-consumption rule c(sigma), both total functions
/// of the history. A proper martingale is the special case c == 0.
///
/// Capital evolves by the one-step identity
///     M(sigma, b) = M(sigma) - c(sigma) + b * M'(sigma).
///
/// Rules may capture per-path mutable caches (stopping times, capital
/// trackers). Such caches are shared by copies of the spec, so one instance
/// must be evaluated by a single thread at a time; rules built from pure
/// lambdas are freely shareable.
struct SupermartingaleSpec {
  Rational initial;
  std::function<Rational(const History&)> wager;
  std::function<Rational(const History&)> marginal_consumption;
  WagerSet wager_set = WagerSet::reals();
  std::string label;
};

/// One step of the capital recursion, exactly.
inline Rational step(const Rational& capital, const Rational& consumption,
                     const Rational& wager, Bit b) {
  return b == Bit::plus ? capital - consumption + wager
                        : capital - consumption - wager;
}

/// Bankruptcy test on raw state: capital - |wager| < consumption.
inline bool bankrupt_state(const Rational& capital, const Rational& wager,
                           const Rational& consumption) {
  return capital - abs(wager) < consumption;
}

/// Walks the current node of one spec along a history that the caller
/// extends one bit at a time. Validates the spec's contract at every node:
/// wager-set membership and non-negative consumption. The bankruptcy flag is
/// sticky (once bankrupt at any prefix, it stays set).
class Cursor {
 public:
  explicit Cursor(const SupermartingaleSpec& spec)
      : spec_(&spec), capital_(spec.initial) {}

  /// Looks at node `h` (which must be the node the cursor stands on):
  /// computes the pending wager and consumption, validates them, and updates
  /// the sticky bankruptcy flag.
  void peek(const History& h) {
    wager_ = spec_->wager(h);
    consumption_ = spec_->marginal_consumption(h);
    const std::size_t n = h.size();
    if (!spec_->wager_set.contains(wager_, n))
      throw WagerSetViolation(n, spec_->label + ": " + wager_.to_string() +
                                     " not in " + spec_->wager_set.name());
    if (consumption_.sign() < 0)
      throw ConsumptionNegative(n, spec_->label + ": " + consumption_.to_string());
    if (bankrupt_state(capital_, wager_, consumption_)) bankrupt_ = true;
    peeked_ = true;
  }

  /// Applies the outcome bit to the peeked node and moves one step forward.
  void apply(Bit b) {
    capital_ = step(capital_, consumption_, wager_, b);
    accumulated_ += consumption_;
    peeked_ = false;
  }

  const Rational& capital() const { return capital_; }
  const Rational& accumulated_consumption() const { return accumulated_; }
  const Rational& pending_wager() const { return wager_; }
  const Rational& pending_consumption() const { return consumption_; }
  bool bankrupt() const { return bankrupt_; }
  bool peeked() const { return peeked_; }
  const SupermartingaleSpec& spec() const { return *spec_; }

 private:
  const SupermartingaleSpec* spec_;
  Rational capital_;
  Rational accumulated_;
  Rational wager_;
  Rational consumption_;
  bool bankrupt_ = false;
  bool peeked_ = false;
};

/// M(sigma) by a fresh fold from the empty history. O(|sigma|^2) including
/// the rule calls; meant for definitions and small-depth checks, not long runs.
inline Rational capital_at(const SupermartingaleSpec& spec, const History& h) {
  Rational capital = spec.initial;
  History prefix;
  for (std::size_t i = 0; i < h.size(); ++i) {
    capital = step(capital, spec.marginal_consumption(prefix), spec.wager(prefix), h[i]);
    prefix.push_back(h[i]);
  }
  return capital;
}

/// True iff M goes bankrupt at sigma: M(sigma) - |M'(sigma)| < c(sigma).
inline bool bankrupt_at(const SupermartingaleSpec& spec, const History& h) {
  return bankrupt_state(capital_at(spec, h), spec.wager(h),
                        spec.marginal_consumption(h));
}

/// The proper cover: same initial capital and wagers, zero consumption.
/// The cover shares the original's wager rule (and so any cache inside it).
inline SupermartingaleSpec proper_cover(const SupermartingaleSpec& spec) {
  SupermartingaleSpec cover = spec;
  cover.marginal_consumption = [](const History&) { return Rational(0); };
  cover.label = spec.label.empty() ? "cover" : spec.label + "~cover";
  return cover;
}

}  // namespace wagerlab
