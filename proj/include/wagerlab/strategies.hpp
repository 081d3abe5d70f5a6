#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wagerlab/errors.hpp"
#include "wagerlab/path_state.hpp"
#include "wagerlab/spec.hpp"
#include "wagerlab/transforms.hpp"

namespace wagerlab {

constexpr std::size_t k_max_table_depth = 16;

enum class TransformWhich { osc2cons, v2unit, gain2osc, gain2cons };

/// Declarative description of a named strategy. Descriptors are what the
/// strategy files hold; `make()` compiles one into a SupermartingaleSpec.
/// There is deliberately no general programmable DSL: families are built
/// from these kinds plus the transform wrappers.
struct StrategyDescriptor {
  enum class Kind {
    constant,
    unit_bettor,
    harmonic,
    one_plus_harmonic,
    proportional,
    table,
    casino_fractional,
    transform,
  };

  Kind kind = Kind::constant;
  Rational initial;
  Rational scale = Rational(1);                // harmonic
  int direction = +1;                          // proportional
  std::size_t depth = 0;                       // table
  std::vector<std::pair<std::string, Rational>> table_wagers;  // pattern -> wager
  TransformWhich which = TransformWhich::osc2cons;             // transform
  Rational band_low, band_high;                // osc2cons
  Rational level;                              // v2unit L
  std::size_t start_step = 0;                  // v2unit t0
  std::shared_ptr<const StrategyDescriptor> source;  // transform input
  std::string label;
};

namespace detail {

inline std::string kind_name(StrategyDescriptor::Kind k) {
  switch (k) {
    case StrategyDescriptor::Kind::constant: return "constant";
    case StrategyDescriptor::Kind::unit_bettor: return "unit_bettor";
    case StrategyDescriptor::Kind::harmonic: return "harmonic";
    case StrategyDescriptor::Kind::one_plus_harmonic: return "one_plus_harmonic";
    case StrategyDescriptor::Kind::proportional: return "proportional";
    case StrategyDescriptor::Kind::table: return "table";
    case StrategyDescriptor::Kind::casino_fractional: return "casino_fractional";
    case StrategyDescriptor::Kind::transform: return "transform";
  }
  return "?";
}

inline std::string which_name(TransformWhich w) {
  switch (w) {
    case TransformWhich::osc2cons: return "osc2cons";
    case TransformWhich::v2unit: return "v2unit";
    case TransformWhich::gain2osc: return "gain2osc";
    case TransformWhich::gain2cons: return "gain2cons";
  }
  return "?";
}

// Table lookup key: history as (length, bits packed little-endian, plus = 1).
inline std::uint32_t pack_history(const History& h) {
  std::uint32_t idx = 0;
  for (std::size_t i = 0; i < h.size(); ++i)
    if (h[i] == Bit::plus) idx |= (1u << i);
  return idx;
}

struct TableData {
  std::size_t depth = 0;
  std::vector<std::unordered_map<std::uint32_t, Rational>> by_len;

  Rational wager_at(const History& h) const {
    if (h.size() > depth) return Rational(0);
    const auto& m = by_len[h.size()];
    const auto it = m.find(pack_history(h));
    return it == m.end() ? Rational(0) : it->second;
  }
};

}  // namespace detail

inline std::string default_label(const StrategyDescriptor& d) {
  using Kind = StrategyDescriptor::Kind;
  switch (d.kind) {
    case Kind::constant: return "constant(" + d.initial.to_string() + ")";
    case Kind::unit_bettor: return "unit_bettor(" + d.initial.to_string() + ")";
    case Kind::harmonic:
      return d.scale == Rational(1)
                 ? "harmonic(" + d.initial.to_string() + ")"
                 : "harmonic(" + d.initial.to_string() + ",scale=" +
                       d.scale.to_string() + ")";
    case Kind::one_plus_harmonic:
      return "one_plus_harmonic(" + d.initial.to_string() + ")";
    case Kind::proportional:
      return "proportional(" + d.initial.to_string() + "," +
             (d.direction > 0 ? "+1" : "-1") + ")";
    case Kind::table:
      return "table(" + d.initial.to_string() + ",depth=" +
             std::to_string(d.depth) + ")";
    case Kind::casino_fractional:
      return "casino_fractional(" + d.initial.to_string() + ")";
    case Kind::transform:
      return detail::which_name(d.which) + "(" +
             (d.source ? (d.source->label.empty() ? default_label(*d.source)
                                                  : d.source->label)
                       : std::string("?")) +
             ")";
  }
  return "?";
}

/// Compiles a descriptor into a runnable spec. Throws BadDescriptor on
/// ill-formed parameters.
inline SupermartingaleSpec make(const StrategyDescriptor& d) {
  using Kind = StrategyDescriptor::Kind;
  const std::string label = d.label.empty() ? default_label(d) : d.label;
  if (d.kind != Kind::transform && d.initial < Rational(0))
    throw BadDescriptor("initial capital must be >= 0, got " +
                        d.initial.to_string());

  SupermartingaleSpec spec;
  spec.initial = d.initial;
  spec.marginal_consumption = [](const History&) { return Rational(0); };
  spec.label = label;

  switch (d.kind) {
    case Kind::constant:
      spec.wager = [](const History&) { return Rational(0); };
      spec.wager_set = WagerSet::finite({Rational(0)});
      return spec;

    case Kind::unit_bettor:
      spec.wager = [](const History&) { return Rational(1); };
      spec.wager_set = WagerSet::unit();
      return spec;

    case Kind::harmonic: {
      const Rational scale = d.scale;
      if (scale.is_zero()) throw BadDescriptor("harmonic scale must be nonzero");
      spec.wager = [scale](const History& h) {
        return scale * Rational(Int(1), Int(h.size() + 1));
      };
      spec.wager_set = scale == Rational(1) ? WagerSet::harmonic_schedule()
                                            : WagerSet::reals();
      return spec;
    }

    case Kind::one_plus_harmonic:
      spec.wager = [](const History& h) {
        return Rational(Int(h.size() + 2), Int(h.size() + 1));
      };
      spec.wager_set = WagerSet::one_plus_harmonic_schedule();
      return spec;

    case Kind::proportional: {
      if (d.direction != 1 && d.direction != -1)
        throw BadDescriptor("proportional direction must be +1 or -1");
      const Rational dir(d.direction);
      const Rational initial = d.initial;
      auto tracker = std::make_shared<detail::PathState<Rational>>(initial);
      auto capital = [tracker, dir](const History& h) -> const Rational& {
        return tracker->sync(h, [&dir](const History&, Bit b, const Rational& cap) {
          // wager = dir * cap, so a win doubles and a loss zeroes
          return b == Bit::plus ? cap + dir * cap : cap - dir * cap;
        });
      };
      spec.wager = [capital, dir](const History& h) { return dir * capital(h); };
      spec.wager_set = WagerSet::reals();
      return spec;
    }

    case Kind::casino_fractional: {
      const Rational initial = d.initial;
      auto tracker = std::make_shared<detail::PathState<Rational>>(initial);
      auto capital = [tracker](const History& h) -> const Rational& {
        return tracker->sync(h, [](const History&, Bit b, const Rational& cap) {
          const Rational w = cap.frac() / Rational(2);
          return b == Bit::plus ? cap + w : cap - w;
        });
      };
      // bets half the fractional part of the current capital, always on +1
      spec.wager = [capital](const History& h) {
        return capital(h).frac() / Rational(2);
      };
      spec.wager_set = WagerSet::reals();
      return spec;
    }

    case Kind::table: {
      if (d.depth > k_max_table_depth)
        throw BadDescriptor("table depth " + std::to_string(d.depth) +
                            " exceeds bound " + std::to_string(k_max_table_depth));
      auto data = std::make_shared<detail::TableData>();
      data->depth = d.depth;
      data->by_len.resize(d.depth + 1);
      std::vector<Rational> values{Rational(0)};
      auto add_entry = [&](std::size_t len, std::uint32_t idx, const Rational& w) {
        data->by_len[len][idx] = w;
      };
      for (const auto& [pattern, w] : d.table_wagers) {
        if (std::find(values.begin(), values.end(), w) == values.end())
          values.push_back(w);
        if (!pattern.empty() && pattern[0] == '@') {
          std::size_t len = 0;
          try {
            len = std::stoul(pattern.substr(1));
          } catch (...) {
            throw BadDescriptor("bad table pattern: " + pattern);
          }
          if (len > d.depth)
            throw BadDescriptor("table pattern " + pattern + " beyond depth");
          for (std::uint32_t idx = 0; idx < (1u << len); ++idx)
            add_entry(len, idx, w);
        } else {
          const std::string text = pattern == "." ? "" : pattern;
          History h;
          try {
            h = History::parse(text);
          } catch (const std::exception&) {
            throw BadDescriptor("bad table pattern: " + pattern);
          }
          if (h.size() > d.depth)
            throw BadDescriptor("table pattern " + pattern + " beyond depth");
          add_entry(h.size(), detail::pack_history(h), w);
        }
      }
      spec.wager = [data](const History& h) { return data->wager_at(h); };
      spec.wager_set = WagerSet::finite(std::move(values));
      return spec;
    }

    case Kind::transform: {
      if (!d.source) throw BadDescriptor("transform needs a source");
      SupermartingaleSpec src = make(*d.source);
      SupermartingaleSpec out;
      switch (d.which) {
        case TransformWhich::osc2cons:
          out = oscillation_to_consumption(src, d.band_low, d.band_high);
          break;
        case TransformWhich::v2unit:
          out = v_oscillation_to_unit(src, d.start_step, d.level);
          break;
        case TransformWhich::gain2osc:
          out = r_gains_to_oscillation(src);
          break;
        case TransformWhich::gain2cons:
          out = v_gains_to_consumption(src);
          break;
      }
      if (!d.label.empty()) out.label = d.label;
      return out;
    }
  }
  throw BadDescriptor("unknown kind");
}

// ---------------------------------------------------------------------------
// Strategy file format: one descriptor per line, `kind key=value ...`,
// '#' comments, transform sources nested as of=(...). File order is the
// enumeration order used by the sequence constructions.

namespace detail {

inline std::vector<std::string> split_top_level(std::string_view line) {
  std::vector<std::string> tokens;
  std::string cur;
  int depth = 0;
  for (char c : line) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if ((c == ' ' || c == '\t') && depth == 0) {
      if (!cur.empty()) tokens.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (depth != 0) throw BadDescriptor("unbalanced parentheses: " + std::string(line));
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

inline Rational parse_rational_param(const std::string& key, const std::string& v) {
  auto r = Rational::parse(v);
  if (!r) throw BadDescriptor("parameter " + key + ": not a rational: " + v);
  return *r;
}

inline std::size_t parse_size_param(const std::string& key, const std::string& v) {
  try {
    const long n = std::stol(v);
    if (n < 0) throw std::out_of_range("");
    return static_cast<std::size_t>(n);
  } catch (...) {
    throw BadDescriptor("parameter " + key + ": not a non-negative integer: " + v);
  }
}

}  // namespace detail

inline StrategyDescriptor parse_descriptor(std::string_view line);

namespace detail {

inline void parse_table_wagers(StrategyDescriptor& d, const std::string& v) {
  std::stringstream ss{v};
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw BadDescriptor("table wagers entry needs pattern:value, got " + item);
    d.table_wagers.emplace_back(
        item.substr(0, colon),
        parse_rational_param("wagers", item.substr(colon + 1)));
  }
}

}  // namespace detail

inline StrategyDescriptor parse_descriptor(std::string_view line) {
  using Kind = StrategyDescriptor::Kind;
  const auto tokens = detail::split_top_level(line);
  if (tokens.empty()) throw BadDescriptor("empty descriptor");

  static const std::map<std::string, Kind> kinds = {
      {"constant", Kind::constant},
      {"unit_bettor", Kind::unit_bettor},
      {"harmonic", Kind::harmonic},
      {"one_plus_harmonic", Kind::one_plus_harmonic},
      {"proportional", Kind::proportional},
      {"table", Kind::table},
      {"casino_fractional", Kind::casino_fractional},
      {"transform", Kind::transform},
  };
  const auto kit = kinds.find(tokens[0]);
  if (kit == kinds.end()) throw BadDescriptor("unknown kind: " + tokens[0]);

  StrategyDescriptor d;
  d.kind = kit->second;
  bool saw_initial = false;

  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const auto eq = tokens[i].find('=');
    if (eq == std::string::npos)
      throw BadDescriptor("expected key=value, got " + tokens[i]);
    const std::string key = tokens[i].substr(0, eq);
    const std::string value = tokens[i].substr(eq + 1);

    if (key == "label") {
      d.label = value;
    } else if (key == "initial" && d.kind != Kind::transform) {
      d.initial = detail::parse_rational_param(key, value);
      saw_initial = true;
    } else if (key == "scale" && d.kind == Kind::harmonic) {
      d.scale = detail::parse_rational_param(key, value);
    } else if (key == "direction" && d.kind == Kind::proportional) {
      if (value == "+1" || value == "1") d.direction = +1;
      else if (value == "-1") d.direction = -1;
      else throw BadDescriptor("direction must be +1 or -1, got " + value);
    } else if (key == "depth" && d.kind == Kind::table) {
      d.depth = detail::parse_size_param(key, value);
    } else if (key == "wagers" && d.kind == Kind::table) {
      detail::parse_table_wagers(d, value);
    } else if (key == "which" && d.kind == Kind::transform) {
      if (value == "osc2cons") d.which = TransformWhich::osc2cons;
      else if (value == "v2unit") d.which = TransformWhich::v2unit;
      else if (value == "gain2osc") d.which = TransformWhich::gain2osc;
      else if (value == "gain2cons") d.which = TransformWhich::gain2cons;
      else throw BadDescriptor("unknown transform: " + value);
    } else if (key == "a" && d.kind == Kind::transform) {
      d.band_low = detail::parse_rational_param(key, value);
    } else if (key == "b" && d.kind == Kind::transform) {
      d.band_high = detail::parse_rational_param(key, value);
    } else if (key == "L" && d.kind == Kind::transform) {
      d.level = detail::parse_rational_param(key, value);
    } else if (key == "t0" && d.kind == Kind::transform) {
      d.start_step = detail::parse_size_param(key, value);
    } else if (key == "of" && d.kind == Kind::transform) {
      if (value.size() < 2 || value.front() != '(' || value.back() != ')')
        throw BadDescriptor("of= must be parenthesised");
      d.source = std::make_shared<const StrategyDescriptor>(
          parse_descriptor(std::string_view(value).substr(1, value.size() - 2)));
    } else {
      throw BadDescriptor("unknown parameter '" + key + "' for kind " +
                          tokens[0]);
    }
  }
  if (d.kind != Kind::transform && !saw_initial)
    throw BadDescriptor(tokens[0] + " needs initial=");
  if (d.kind == Kind::transform && !d.source)
    throw BadDescriptor("transform needs of=(...)");
  return d;
}

/// Canonical single-line form; parse(serialize(d)) reproduces d.
inline std::string serialize_descriptor(const StrategyDescriptor& d) {
  using Kind = StrategyDescriptor::Kind;
  std::string s = detail::kind_name(d.kind);
  if (d.kind != Kind::transform) s += " initial=" + d.initial.to_string();
  switch (d.kind) {
    case Kind::harmonic:
      if (d.scale != Rational(1)) s += " scale=" + d.scale.to_string();
      break;
    case Kind::proportional:
      s += std::string(" direction=") + (d.direction > 0 ? "+1" : "-1");
      break;
    case Kind::table: {
      s += " depth=" + std::to_string(d.depth);
      if (!d.table_wagers.empty()) {
        s += " wagers=";
        for (std::size_t i = 0; i < d.table_wagers.size(); ++i) {
          if (i) s += ",";
          s += d.table_wagers[i].first + ":" + d.table_wagers[i].second.to_string();
        }
      }
      break;
    }
    case Kind::transform: {
      s += " which=" + detail::which_name(d.which);
      if (d.which == TransformWhich::osc2cons)
        s += " a=" + d.band_low.to_string() + " b=" + d.band_high.to_string();
      if (d.which == TransformWhich::v2unit)
        s += " t0=" + std::to_string(d.start_step) + " L=" + d.level.to_string();
      s += " of=(" + serialize_descriptor(*d.source) + ")";
      break;
    }
    default:
      break;
  }
  if (!d.label.empty()) s += " label=" + d.label;
  return s;
}

inline std::vector<StrategyDescriptor> parse_strategy_file(std::istream& in) {
  std::vector<StrategyDescriptor> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      out.push_back(parse_descriptor(std::string_view(line).substr(first)));
    } catch (const BadDescriptor& e) {
      throw BadDescriptor("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline void write_strategy_file(std::ostream& out,
                                const std::vector<StrategyDescriptor>& ds) {
  for (const auto& d : ds) out << serialize_descriptor(d) << "\n";
}

inline std::string strategy_schema_text() {
  return
      "# strategy file: one descriptor per line, '#' comments\n"
      "constant initial=<p/q> [label=<text>]\n"
      "unit_bettor initial=<p/q>            # always wagers 1 on +1\n"
      "harmonic initial=<p/q> [scale=<p/q>] # wagers scale/(n+1) at step n\n"
      "one_plus_harmonic initial=<p/q>      # wagers 1 + 1/(n+1) at step n\n"
      "proportional initial=<p/q> [direction=+1|-1]  # bets full capital\n"
      "casino_fractional initial=<p/q>      # bets frac(capital)/2 on +1\n"
      "table initial=<p/q> depth=<n> wagers=<pat>:<p/q>[,...]\n"
      "    # pat: '+'/'-' string, '.' for the empty history, @n for every\n"
      "    # history of length n; unlisted histories wager 0\n"
      "transform which=osc2cons|v2unit|gain2osc|gain2cons [a=<p/q> b=<p/q>]\n"
      "    [t0=<n> L=<p/q>] of=(<descriptor>)\n";
}

// Convenience builders for the builtin strategies.

inline SupermartingaleSpec make_constant(const Rational& initial) {
  StrategyDescriptor d;
  d.kind = StrategyDescriptor::Kind::constant;
  d.initial = initial;
  return make(d);
}

inline SupermartingaleSpec make_unit_bettor(const Rational& initial) {
  StrategyDescriptor d;
  d.kind = StrategyDescriptor::Kind::unit_bettor;
  d.initial = initial;
  return make(d);
}

inline SupermartingaleSpec make_harmonic(const Rational& initial,
                                         const Rational& scale = Rational(1)) {
  StrategyDescriptor d;
  d.kind = StrategyDescriptor::Kind::harmonic;
  d.initial = initial;
  d.scale = scale;
  return make(d);
}

inline SupermartingaleSpec make_one_plus_harmonic(const Rational& initial) {
  StrategyDescriptor d;
  d.kind = StrategyDescriptor::Kind::one_plus_harmonic;
  d.initial = initial;
  return make(d);
}

inline SupermartingaleSpec make_proportional(const Rational& initial,
                                             int direction = +1) {
  StrategyDescriptor d;
  d.kind = StrategyDescriptor::Kind::proportional;
  d.initial = initial;
  d.direction = direction;
  return make(d);
}

inline SupermartingaleSpec make_casino_fractional(const Rational& initial) {
  StrategyDescriptor d;
  d.kind = StrategyDescriptor::Kind::casino_fractional;
  d.initial = initial;
  return make(d);
}

}  // namespace wagerlab
