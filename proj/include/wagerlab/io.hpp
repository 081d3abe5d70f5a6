#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wagerlab/bits.hpp"
#include "wagerlab/evaluate.hpp"
#include "wagerlab/version.hpp"

namespace wagerlab {

/// FNV-1a, for family/sequence fingerprints in trace metadata.
inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[h & 0xf];
    h >>= 4;
  }
  return s;
}

// --------------------------------------------------------------------------
// Sequence files: one line over {+,-}, aliases {1,0}; whitespace ignored.

inline void write_sequence(std::ostream& os, const std::vector<Bit>& bits) {
  for (Bit b : bits) os.put(bit_char(b));
  os.put('\n');
}

inline std::vector<Bit> read_sequence(std::istream& in) {
  std::vector<Bit> bits;
  char c;
  while (in.get(c)) {
    if (c == '\n' || c == '\r' || c == ' ' || c == '\t') continue;
    const auto b = bit_from_char(c);
    if (!b) throw std::invalid_argument(std::string("bad sequence character: ") + c);
    bits.push_back(*b);
  }
  return bits;
}

// --------------------------------------------------------------------------
// Trace CSV: a '#' metadata line, a header, then one row per step with
// rationals as p/q (plain p when the denominator is 1). Lossless round-trip.

inline const char* k_trace_header =
    "n,bit,capital,wager,consumption,accumulated_consumption,bankrupt";

struct TraceMeta {
  std::string strategy;
  std::string seed = "none";
  std::string family_hash = "none";
  std::string rng = "none";
  std::string extra;  // preformatted ", key=value" tail, optional

  std::string line() const {
    return "# wagerlab v" + std::string(k_version) + ", strategy=" + strategy +
           ", seed=" + seed + ", family-hash=" + family_hash + ", rng=" + rng +
           extra;
  }
};

inline void write_trace_csv(std::ostream& os, const Trace& t, const TraceMeta& meta) {
  os << meta.line() << "\n" << k_trace_header << "\n";
  for (const auto& row : t.rows) {
    os << row.n << ",";
    if (row.bit) os << bit_char(*row.bit);
    os << "," << row.capital.to_string() << "," << row.wager.to_string() << ","
       << row.consumption.to_string() << ","
       << row.accumulated_consumption.to_string() << ","
       << (row.bankrupt ? 1 : 0) << "\n";
  }
}

inline void write_trace_csv(std::ostream& os, const Trace& t) {
  TraceMeta meta;
  meta.strategy = t.spec_label;
  write_trace_csv(os, t, meta);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace detail

/// Reads a trace CSV written by write_trace_csv. The metadata line is kept
/// verbatim in the returned label when no better label is present.
inline Trace read_trace_csv(std::istream& in) {
  Trace t;
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("strategy=");
      if (pos != std::string::npos) {
        auto end = line.find(',', pos);
        t.spec_label = line.substr(pos + 9, end == std::string::npos
                                                ? std::string::npos
                                                : end - pos - 9);
      }
      continue;
    }
    if (!saw_header) {
      if (line != k_trace_header)
        throw std::invalid_argument("trace CSV: unexpected header: " + line);
      saw_header = true;
      continue;
    }
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != 7)
      throw std::invalid_argument("trace CSV: expected 7 cells: " + line);
    TraceRow row;
    row.n = std::stoul(cells[0]);
    if (!cells[1].empty()) {
      const auto b = bit_from_char(cells[1][0]);
      if (!b) throw std::invalid_argument("trace CSV: bad bit: " + cells[1]);
      row.bit = b;
    }
    row.capital = Rational::parse_or_throw(cells[2]);
    row.wager = Rational::parse_or_throw(cells[3]);
    row.consumption = Rational::parse_or_throw(cells[4]);
    row.accumulated_consumption = Rational::parse_or_throw(cells[5]);
    row.bankrupt = cells[6] == "1";
    t.rows.push_back(std::move(row));
  }
  if (!saw_header) throw std::invalid_argument("trace CSV: missing header");
  t.horizon = t.rows.empty() ? 0 : t.rows.back().n;
  return t;
}

}  // namespace wagerlab
