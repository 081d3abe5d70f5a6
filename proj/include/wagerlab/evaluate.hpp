#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wagerlab/spec.hpp"

namespace wagerlab {

/// What to do when a strategy goes bankrupt mid-trace. Negative capitals are
/// representable, so the default keeps playing and just records the flag.
enum class BankruptcyPolicy { record_and_continue, stop_at_bankruptcy };

/// Row n of a trace: the state at node x|n. `wager` and `consumption` are the
/// values applied on the transition into this row (so row 0 carries zeros),
/// `capital` is M(x|n), and `bankrupt` is sticky: set from the first prefix
/// at which the strategy could not cover its bet onward.
struct TraceRow {
  std::size_t n = 0;
  std::optional<Bit> bit;
  Rational capital;
  Rational wager;
  Rational consumption;
  Rational accumulated_consumption;
  bool bankrupt = false;
};

struct Trace {
  std::string spec_label;
  std::size_t horizon = 0;
  std::vector<TraceRow> rows;  // rows 0..horizon unless truncated by policy

  /// Proper-cover capital at row n: cover = capital + accumulated consumption.
  Rational cover_capital(std::size_t n) const {
    return rows[n].capital + rows[n].accumulated_consumption;
  }
};

/// Plays `spec` against the first `horizon` bits of `x`, validating the
/// wager-set and consumption contracts at every node.
inline Trace evaluate(const SupermartingaleSpec& spec, std::span<const Bit> x,
                      std::size_t horizon,
                      BankruptcyPolicy policy = BankruptcyPolicy::record_and_continue) {
  if (x.size() < horizon)
    throw std::invalid_argument("evaluate: sequence shorter than horizon");
  Trace trace;
  trace.spec_label = spec.label;
  trace.horizon = horizon;
  trace.rows.reserve(horizon + 1);

  Cursor cur(spec);
  History h;
  cur.peek(h);
  trace.rows.push_back({0, std::nullopt, cur.capital(), Rational(0), Rational(0),
                        Rational(0), cur.bankrupt()});
  for (std::size_t n = 1; n <= horizon; ++n) {
    if (cur.bankrupt() && policy == BankruptcyPolicy::stop_at_bankruptcy) break;
    const Bit b = x[n - 1];
    const Rational w = cur.pending_wager();
    const Rational c = cur.pending_consumption();
    cur.apply(b);
    h.push_back(b);
    cur.peek(h);
    trace.rows.push_back({n, b, cur.capital(), w, c, cur.accumulated_consumption(),
                          cur.bankrupt()});
  }
  return trace;
}

inline Trace evaluate(const SupermartingaleSpec& spec, const History& x,
                      std::size_t horizon,
                      BankruptcyPolicy policy = BankruptcyPolicy::record_and_continue) {
  return evaluate(spec, x.bits(), horizon, policy);
}

}  // namespace wagerlab
