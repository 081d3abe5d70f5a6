#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wagerlab/errors.hpp"
#include "wagerlab/evaluate.hpp"

namespace wagerlab {

/// The three asymptotic success criteria. None of them is decidable at a
/// finite horizon, so every verdict below is an explicit proxy with
/// user-visible parameters (threshold, band, crossing count, window).
enum class Criterion { gains, consumption, oscillation };

struct CriterionConfig {
  Criterion criterion = Criterion::gains;
  Rational gain_threshold;          // G, for gains/consumption
  Rational band_low, band_high;     // a < b, for oscillation
  std::size_t crossing_target = 1;  // k >= 1
  std::size_t window = 1;           // W >= 1, for stabilization
};

enum class Outcome { achieved_at, bankrupt, stable_in_window, inconclusive };

struct Verdict {
  Outcome outcome = Outcome::inconclusive;
  std::optional<std::size_t> step;           // hit or bankruptcy step
  std::vector<std::size_t> crossings;        // oscillation witness
  std::optional<std::size_t> last_change;    // stabilization witness

  bool achieved() const { return outcome == Outcome::achieved_at; }
  bool stable() const { return outcome == Outcome::stable_in_window; }
};

inline std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::achieved_at: return "achieved";
    case Outcome::bankrupt: return "bankrupt";
    case Outcome::stable_in_window: return "stable";
    case Outcome::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace detail {

inline std::optional<std::size_t> first_bankrupt_row(const Trace& t) {
  for (const auto& row : t.rows)
    if (row.bankrupt) return row.n;
  return std::nullopt;
}

// Success requires not going bankrupt: bankruptcy strictly before the hit
// forces Bankrupt; a hit at or before the first bankruptcy step wins.
inline Verdict resolve_hit(std::optional<std::size_t> hit,
                           std::optional<std::size_t> bankrupt,
                           std::vector<std::size_t> crossings = {}) {
  Verdict v;
  v.crossings = std::move(crossings);
  if (hit && (!bankrupt || *hit <= *bankrupt)) {
    v.outcome = Outcome::achieved_at;
    v.step = hit;
  } else if (bankrupt) {
    v.outcome = Outcome::bankrupt;
    v.step = bankrupt;
  }
  return v;
}

}  // namespace detail

/// First row with capital >= G, subject to the bankruptcy rule.
inline Verdict gains_verdict(const Trace& t, const CriterionConfig& cfg) {
  if (cfg.gain_threshold <= Rational(0))
    throw std::invalid_argument("gains_verdict: threshold must be > 0");
  std::optional<std::size_t> hit;
  for (const auto& row : t.rows)
    if (row.capital >= cfg.gain_threshold) {
      hit = row.n;
      break;
    }
  return detail::resolve_hit(hit, detail::first_bankrupt_row(t));
}

/// First row with accumulated consumption >= G, same bankruptcy rule.
inline Verdict consumption_verdict(const Trace& t, const CriterionConfig& cfg) {
  if (cfg.gain_threshold <= Rational(0))
    throw std::invalid_argument("consumption_verdict: threshold must be > 0");
  std::optional<std::size_t> hit;
  for (const auto& row : t.rows)
    if (row.accumulated_consumption >= cfg.gain_threshold) {
      hit = row.n;
      break;
    }
  return detail::resolve_hit(hit, detail::first_bankrupt_row(t));
}

/// Steps at which a series flips between strictly below `low` and strictly
/// above `high`. The first excursion outside [low, high] sets the state and
/// is not itself a crossing.
inline std::vector<std::size_t> band_crossings(const std::vector<Rational>& series,
                                               const Rational& low,
                                               const Rational& high) {
  if (!(low < high)) throw BandInvalid(low.to_string() + " .. " + high.to_string());
  std::vector<std::size_t> steps;
  int state = 0;  // 0 unset, -1 below, +1 above
  for (std::size_t n = 0; n < series.size(); ++n) {
    const int here = series[n] < low ? -1 : (series[n] > high ? +1 : 0);
    if (here == 0) continue;
    if (state != 0 && here != state) steps.push_back(n);
    state = here;
  }
  return steps;
}

/// k-th band crossing of the proper-cover capital, which is what the
/// oscillation criterion watches.
inline Verdict oscillation_verdict(const Trace& t, const CriterionConfig& cfg) {
  if (cfg.crossing_target < 1)
    throw std::invalid_argument("oscillation_verdict: crossing target >= 1");
  std::vector<Rational> cover;
  cover.reserve(t.rows.size());
  for (std::size_t n = 0; n < t.rows.size(); ++n) cover.push_back(t.cover_capital(n));
  auto crossings = band_crossings(cover, cfg.band_low, cfg.band_high);
  std::optional<std::size_t> hit;
  if (crossings.size() >= cfg.crossing_target)
    hit = crossings[cfg.crossing_target - 1];
  return detail::resolve_hit(hit, detail::first_bankrupt_row(t), std::move(crossings));
}

enum class TraceStatistic { capital, floored_capital, accumulated_consumption };

/// Last row whose statistic differs from its predecessor, or nullopt when
/// the whole series is constant.
template <class T>
std::optional<std::size_t> last_change_step(const std::vector<T>& series) {
  for (std::size_t n = series.size(); n > 1; --n)
    if (!(series[n - 1] == series[n - 2])) return n - 1;
  return std::nullopt;
}

/// StableInWindow iff the statistic takes a single value on every row n with
/// n >= rows-1 - window; the witness is the last change step.
template <class T>
Verdict stable_verdict(const std::vector<T>& series, std::size_t window) {
  if (window < 1 || series.empty() || window >= series.size())
    throw std::invalid_argument("stabilization window out of range");
  Verdict v;
  v.last_change = last_change_step(series);
  const std::size_t first_window_row = series.size() - 1 - window;
  if (!v.last_change || *v.last_change <= first_window_row)
    v.outcome = Outcome::stable_in_window;
  return v;
}

inline Verdict stabilization_check(const Trace& t, std::size_t window,
                                   TraceStatistic stat) {
  switch (stat) {
    case TraceStatistic::capital: {
      std::vector<Rational> s;
      s.reserve(t.rows.size());
      for (const auto& r : t.rows) s.push_back(r.capital);
      return stable_verdict(s, window);
    }
    case TraceStatistic::floored_capital: {
      std::vector<Int> s;
      s.reserve(t.rows.size());
      for (const auto& r : t.rows) s.push_back(r.capital.floor());
      return stable_verdict(s, window);
    }
    case TraceStatistic::accumulated_consumption: {
      std::vector<Rational> s;
      s.reserve(t.rows.size());
      for (const auto& r : t.rows) s.push_back(r.accumulated_consumption);
      return stable_verdict(s, window);
    }
  }
  throw std::invalid_argument("unknown statistic");
}

/// Pragmatic band default when none is given: midpoint +- range/4 of the
/// cover capital over the first half of the trace; +-1/4 around a constant.
inline std::pair<Rational, Rational> default_band(const Trace& t) {
  const std::size_t half = t.rows.size() / 2;
  Rational lo = t.cover_capital(0), hi = lo;
  for (std::size_t n = 0; n <= half && n < t.rows.size(); ++n) {
    const Rational c = t.cover_capital(n);
    lo = min(lo, c);
    hi = max(hi, c);
  }
  const Rational mid = (lo + hi) / Rational(2);
  Rational radius = (hi - lo) / Rational(4);
  if (radius.is_zero()) radius = Rational(Int(1), Int(4));
  return {mid - radius, mid + radius};
}

}  // namespace wagerlab
