#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>

#include "wagerlab/errors.hpp"
#include "wagerlab/path_state.hpp"
#include "wagerlab/spec.hpp"

namespace wagerlab {

/// sign as a rational in {-1, 0, +1}, with sign(0) = 0.
inline Rational rational_sign(const Rational& r) { return Rational(r.sign()); }

namespace detail {

// Stopping times are discovered lazily while a history is walked and cached
// per path, so each output spec is a deterministic function of history. The
// caches live in shared state captured by both the wager and consumption
// closures; copies of the output spec share them, so make a fresh transform
// per concurrent evaluation.

struct OscToConsState {
  SupermartingaleSpec source;
  Rational low, high;  // a < b

  struct Node {
    Rational cover_capital;  // proper-cover capital of the source
    std::uint32_t stops = 0;  // stopping indices discovered at nodes <= here
    bool odd_stop_here = false;  // this node is an odd-index stopping time
  };
  PathState<Node> path;

  OscToConsState(SupermartingaleSpec src, Rational a, Rational b)
      : source(std::move(src)), low(std::move(a)), high(std::move(b)),
        path(initial_node(source, low)) {}

  static Node initial_node(const SupermartingaleSpec& src, const Rational& a) {
    Node n;
    n.cover_capital = src.initial;
    if (n.cover_capital < a) n.stops = 1;  // first entry below the band
    return n;
  }

  const Node& sync(const History& h) {
    return path.sync(h, [this](const History& prefix, Bit b, const Node& cur) {
      Node next;
      next.cover_capital =
          cur.cover_capital +
          (b == Bit::plus ? source.wager(prefix) : -source.wager(prefix));
      next.stops = cur.stops;
      if (cur.stops % 2 == 1) {
        if (next.cover_capital > high) {
          ++next.stops;
          next.odd_stop_here = true;
        }
      } else {
        if (next.cover_capital < low) ++next.stops;
      }
      return next;
    });
  }

  bool copying(const Node& n) const { return n.stops % 2 == 1; }
};

struct VOscToUnitState {
  SupermartingaleSpec source;
  std::size_t start_step;  // t0
  Rational level;          // L

  struct Node {
    Rational cover_capital;
    Rational toggle;  // the output's own capital; bets flip between 1 and 2
  };
  PathState<Node> path;

  VOscToUnitState(SupermartingaleSpec src, std::size_t t0, Rational l)
      : source(std::move(src)), start_step(t0), level(std::move(l)),
        path(Node{source.initial, Rational(1)}) {}

  Rational output_wager(const Node& n, const History& h) const {
    if (h.size() < start_step) return Rational(0);
    if (abs(n.cover_capital - level) >= Rational(Int(1), Int(2))) return Rational(0);
    if (n.toggle == Rational(1)) return rational_sign(source.wager(h));
    if (n.toggle == Rational(2)) return -rational_sign(source.wager(h));
    return Rational(0);
  }

  const Node& sync(const History& h) {
    return path.sync(h, [this](const History& prefix, Bit b, const Node& cur) {
      const Rational sw = output_wager(cur, prefix);
      const Rational mw = source.wager(prefix);
      Node next;
      next.cover_capital = cur.cover_capital + (b == Bit::plus ? mw : -mw);
      next.toggle = cur.toggle + (b == Bit::plus ? sw : -sw);
      return next;
    });
  }
};

struct GainToOscState {
  SupermartingaleSpec source;

  struct Node {
    Rational source_capital;  // with consumption, as bet against
    Rational epoch_base;      // source capital at the current epoch start
    Rational output_capital;
    int direction = -1;  // frozen at epoch start: -1 when output >= 5
  };
  PathState<Node> path;

  explicit GainToOscState(SupermartingaleSpec src)
      : source(std::move(src)), path(initial_node(source)) {}

  static Node initial_node(const SupermartingaleSpec& src) {
    if (src.initial <= Rational(0)) throw NonpositiveCapital(0);
    Node n;
    n.source_capital = src.initial;
    n.epoch_base = src.initial;
    n.output_capital = Rational(5);
    n.direction = -1;  // 5 >= 5
    return n;
  }

  Rational output_wager(const Node& n, const History& h) const {
    return source.wager(h) / n.epoch_base * Rational(n.direction);
  }

  const Node& sync(const History& h) {
    return path.sync(h, [this](const History& prefix, Bit b, const Node& cur) {
      const Rational sw = output_wager(cur, prefix);
      const Rational mw = source.wager(prefix);
      const Rational mc = source.marginal_consumption(prefix);
      Node next;
      next.source_capital =
          cur.source_capital - mc + (b == Bit::plus ? mw : -mw);
      next.output_capital = cur.output_capital + (b == Bit::plus ? sw : -sw);
      if (next.source_capital >= Rational(2) * cur.epoch_base) {
        if (next.source_capital <= Rational(0))
          throw NonpositiveCapital(prefix.size() + 1);
        next.epoch_base = next.source_capital;
        next.direction = next.output_capital >= Rational(5) ? -1 : +1;
      } else {
        next.epoch_base = cur.epoch_base;
        next.direction = cur.direction;
      }
      return next;
    });
  }
};

struct VGainToConsState {
  SupermartingaleSpec source;

  struct Node {
    Rational cover_capital;
    Rational epoch_base;
    Rational inverse_sum;  // sum of 1/(capital at completed epoch starts)
    bool epoch_boundary_here = false;
  };
  PathState<Node> path;

  explicit VGainToConsState(SupermartingaleSpec src)
      : source(std::move(src)),
        path(Node{source.initial, source.initial, Rational(0), false}) {}

  Rational scale(const Node& n) const { return Rational(2) - n.inverse_sum; }

  const Node& sync(const History& h) {
    return path.sync(h, [this](const History& prefix, Bit b, const Node& cur) {
      const Rational mw = source.wager(prefix);
      Node next;
      next.cover_capital = cur.cover_capital + (b == Bit::plus ? mw : -mw);
      if (next.cover_capital >= Rational(2) * cur.epoch_base) {
        next.inverse_sum = cur.inverse_sum + Rational(1) / cur.epoch_base;
        next.epoch_base = next.cover_capital;
        next.epoch_boundary_here = true;
      } else {
        next.inverse_sum = cur.inverse_sum;
        next.epoch_base = cur.epoch_base;
      }
      return next;
    });
  }
};

}  // namespace detail

/// Oscillation into consumption. The output starts at 2a, copies the
/// source's wagers on the upcrossing stretches [n_2i, n_2i+1) of the
/// source's proper cover across the band (a, b), idles elsewhere, and
/// consumes exactly b - a at each node where an odd-index stopping time
/// fires (so the accumulated consumption shows one row later).
inline SupermartingaleSpec oscillation_to_consumption(const SupermartingaleSpec& m,
                                                      const Rational& a,
                                                      const Rational& b) {
  if (!(a < b)) throw BandInvalid(a.to_string() + " .. " + b.to_string());
  if (!m.wager_set.contains(Rational(0), 0))
    throw std::invalid_argument("oscillation_to_consumption: 0 not in wager set");
  auto st = std::make_shared<detail::OscToConsState>(m, a, b);
  SupermartingaleSpec out;
  out.initial = Rational(2) * a;
  out.wager = [st](const History& h) {
    const auto& node = st->sync(h);
    return st->copying(node) ? st->source.wager(h) : Rational(0);
  };
  const Rational charge = b - a;
  out.marginal_consumption = [st, charge](const History& h) {
    return st->sync(h).odd_stop_here ? charge : Rational(0);
  };
  out.wager_set = m.wager_set;
  out.label = "osc2cons(" + m.label + ")";
  return out;
}

/// Oscillation of a punctured-set martingale into a {-1,0,+1} martingale.
/// The output capital toggles between 1 and 2 while the source sits within
/// 1/2 of `level` from step `t0` on; sign(0) = 0. The trigger is evaluated
/// on the history being bet on.
inline SupermartingaleSpec v_oscillation_to_unit(const SupermartingaleSpec& m,
                                                 std::size_t t0,
                                                 const Rational& level) {
  auto st = std::make_shared<detail::VOscToUnitState>(m, t0, level);
  SupermartingaleSpec out;
  out.initial = Rational(1);
  out.wager = [st](const History& h) { return st->output_wager(st->sync(h), h); };
  out.marginal_consumption = [](const History&) { return Rational(0); };
  out.wager_set = WagerSet::finite({Rational(-1), Rational(0), Rational(1)});
  out.label = "v2unit(" + m.label + ")";
  return out;
}

/// Unbounded gains into oscillation. Epochs end when the source capital has
/// doubled since the epoch start; within an epoch the output bets the
/// source's wager scaled by the epoch-start capital, with the direction
/// frozen at the epoch start (against the source while the output is at or
/// above 5, with it below).
inline SupermartingaleSpec r_gains_to_oscillation(const SupermartingaleSpec& m) {
  auto st = std::make_shared<detail::GainToOscState>(m);
  SupermartingaleSpec out;
  out.initial = Rational(5);
  out.wager = [st](const History& h) { return st->output_wager(st->sync(h), h); };
  out.marginal_consumption = [](const History&) { return Rational(0); };
  out.wager_set = WagerSet::reals();
  out.label = "gain2osc(" + m.label + ")";
  return out;
}

/// Unbounded gains of a punctured-set martingale into unbounded consumption.
/// The output starts at twice the source's initial capital, scales the
/// source's wagers by 2 - sum_j 1/(epoch-start capital j) — a factor in
/// (1, 2], which keeps the wagers in the punctured set — and consumes one
/// unit at each doubling-epoch boundary.
inline SupermartingaleSpec v_gains_to_consumption(const SupermartingaleSpec& m) {
  if (m.initial < Rational(2))
    throw InitialTooSmall(m.label + " starts at " + m.initial.to_string() +
                          ", need at least 2");
  auto st = std::make_shared<detail::VGainToConsState>(m);
  SupermartingaleSpec out;
  out.initial = Rational(2) * m.initial;
  out.wager = [st](const History& h) {
    const auto& node = st->sync(h);
    return st->source.wager(h) * st->scale(node);
  };
  out.marginal_consumption = [st](const History& h) {
    return st->sync(h).epoch_boundary_here ? Rational(1) : Rational(0);
  };
  out.wager_set = m.wager_set;
  out.label = "gain2cons(" + m.label + ")";
  return out;
}

}  // namespace wagerlab
