#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "wagerlab/errors.hpp"
#include "wagerlab/path_state.hpp"
#include "wagerlab/spec.hpp"
#include "wagerlab/strategies.hpp"

namespace wagerlab {

/// An ordered adversary family. The order is the diagonalization priority
/// order; augmented constants stand in for "constants of arbitrarily large
/// capital" and are appended after the user members. Preprocessing flags
/// realise the usual without-loss-of-generality steps constructively.
struct Family {
  std::vector<SupermartingaleSpec> members;
  std::vector<Rational> augment_constants;
  bool ceil_to_integer = false;
  bool clamp_nonnegative = false;
};

/// Rounds a supermartingale's values up to integers. Sound only for integer
/// wagers (checked at every node): with w in Z,
///   ceil(S)(sigma b) = ceil(S(sigma) - c(sigma)) + b w,
/// so the wrapper keeps the wagers and charges consumption
/// ceil(S) - ceil(S - c), which is a non-negative integer.
inline SupermartingaleSpec ceil_values(const SupermartingaleSpec& spec) {
  auto tracker = std::make_shared<detail::PathState<Rational>>(spec.initial);
  auto src = std::make_shared<SupermartingaleSpec>(spec);
  auto capital = [tracker, src](const History& h) -> const Rational& {
    return tracker->sync(h, [src](const History& prefix, Bit b, const Rational& cap) {
      const Rational w = src->wager(prefix);
      if (!w.is_integer())
        throw FamilyNotInteger(prefix.size(), src->label + " wagers " + w.to_string());
      return step(cap, src->marginal_consumption(prefix), w, b);
    });
  };
  SupermartingaleSpec out;
  out.initial = Rational(spec.initial.ceil());
  out.wager = [capital, src](const History& h) {
    const Rational w = src->wager(h);
    if (!w.is_integer())
      throw FamilyNotInteger(h.size(), src->label + " wagers " + w.to_string());
    (void)capital(h);
    return w;
  };
  out.marginal_consumption = [capital, src](const History& h) {
    const Rational cap = capital(h);
    return Rational(Int(cap.ceil() - (cap - src->marginal_consumption(h)).ceil()));
  };
  out.wager_set = spec.wager_set;
  out.label = spec.label;
  return out;
}

/// Freezes a strategy at its first bankruptcy: from the first node where
/// capital - |wager| < consumption it wagers 0 and consumes 0 forever, so
/// the result never goes bankrupt and, given non-negative initial capital,
/// never goes negative. A negative initial capital degenerates to the
/// constant 0.
inline SupermartingaleSpec clamp_nonnegative(const SupermartingaleSpec& spec) {
  if (spec.initial < Rational(0)) {
    auto zero = make_constant(Rational(0));
    zero.label = spec.label;
    return zero;
  }
  struct Node {
    Rational capital;
    bool frozen_in = false;  // frozen strictly before this node
  };
  auto src = std::make_shared<SupermartingaleSpec>(spec);
  auto tracker = std::make_shared<detail::PathState<Node>>(Node{spec.initial, false});

  // Whether the wrapped strategy is frozen at this node, plus the effective
  // wager/consumption there.
  struct Look {
    bool frozen;
    Rational wager, consumption;
  };
  auto look = [src](const Node& node, const History& h) {
    Look l{node.frozen_in, Rational(0), Rational(0)};
    if (!l.frozen) {
      const Rational w = src->wager(h);
      const Rational c = src->marginal_consumption(h);
      if (bankrupt_state(node.capital, w, c)) {
        l.frozen = true;
      } else {
        l.wager = w;
        l.consumption = c;
      }
    }
    return l;
  };
  auto sync = [tracker, look](const History& h) -> const Node& {
    return tracker->sync(h, [look](const History& prefix, Bit b, const Node& cur) {
      const Look l = look(cur, prefix);
      return Node{step(cur.capital, l.consumption, l.wager, b), l.frozen};
    });
  };

  SupermartingaleSpec out;
  out.initial = spec.initial;
  out.wager = [sync, look](const History& h) { return look(sync(h), h).wager; };
  out.marginal_consumption = [sync, look](const History& h) {
    return look(sync(h), h).consumption;
  };
  out.wager_set = spec.wager_set;
  out.label = spec.label;
  return out;
}

/// 1, 2, 4, ... up to the first power of two >= bound.
inline std::vector<Rational> powers_of_two_up_to(const Rational& bound) {
  std::vector<Rational> out;
  Rational p(1);
  out.push_back(p);
  while (p < bound) {
    p = p * Rational(2);
    out.push_back(p);
  }
  return out;
}

/// Applies the family's preprocessing flags to its members and appends the
/// augmentation constants. The result is the list the constructions play
/// against, in priority order.
inline std::vector<SupermartingaleSpec> prepared_members(const Family& family) {
  std::vector<SupermartingaleSpec> out;
  out.reserve(family.members.size() + family.augment_constants.size());
  for (const auto& m : family.members) {
    SupermartingaleSpec s = m;
    if (family.ceil_to_integer) s = ceil_values(s);
    if (family.clamp_nonnegative) s = clamp_nonnegative(s);
    out.push_back(std::move(s));
  }
  for (const auto& c : family.augment_constants) {
    auto spec = make_constant(c);
    spec.label = "constant(" + c.to_string() + ")~aug";
    out.push_back(std::move(spec));
  }
  return out;
}

}  // namespace wagerlab
