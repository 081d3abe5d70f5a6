#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wagerlab/criteria.hpp"
#include "wagerlab/errors.hpp"
#include "wagerlab/evaluate.hpp"
#include "wagerlab/family.hpp"
#include "wagerlab/harmonic.hpp"
#include "wagerlab/spec.hpp"
#include "wagerlab/strategies.hpp"

namespace wagerlab {

struct ConstructOptions {
  /// Check the per-step certificates (the constructions' induction
  /// invariants); throws CertificateViolation on the first failure.
  bool certificates = false;
  /// Record the per-step diagnostic table (costs memory on long runs).
  bool record_log = true;
};

/// Per-step diagnostic table of a construction run, CSV-serialisable.
/// Tuple-valued cells are pipe/colon packed so rows stay one CSV line.
struct DiagLog {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << "\n";
    }
  }
};

/// End-of-run summary for one family member; enough to decide the
/// finite-horizon failure proxies without keeping full traces around.
struct MemberSummary {
  std::string label;
  Rational final_capital;
  Rational final_consumption;
  Int final_floor;
  std::size_t floor_last_change = 0;        // 0: never changed
  std::size_t consumption_last_change = 0;  // 0: never changed
  bool ever_bankrupt = false;

  bool floor_stable(std::size_t horizon, std::size_t window) const {
    return floor_last_change <= horizon - window;
  }
  bool consumption_stable(std::size_t horizon, std::size_t window) const {
    return consumption_last_change <= horizon - window;
  }
};

namespace detail {

// Tracks one member along the shared history: cursor plus summary stats.
struct MemberRun {
  Cursor cursor;
  MemberSummary summary;
  Int floor_now;

  explicit MemberRun(const SupermartingaleSpec& spec)
      : cursor(spec), floor_now(spec.initial.floor()) {
    summary.label = spec.label;
    summary.final_floor = floor_now;
  }

  void after_apply(std::size_t row) {
    const Int f = cursor.capital().floor();
    if (f != floor_now) {
      floor_now = f;
      summary.floor_last_change = row;
    }
  }
};

inline void certify(bool ok, std::size_t step, const std::string& what) {
  if (!ok) throw CertificateViolation(step, what);
}

inline Int to_int_exact(const Rational& r, std::size_t step, const std::string& who) {
  if (!r.is_integer()) throw FamilyNotInteger(step, who + ": " + r.to_string());
  return r.numerator();
}

inline void check_v_wager(const Rational& w, std::size_t step, const std::string& who) {
  if (!(w.is_zero() || abs(w) >= Rational(1)))
    throw WagerSetViolation(step, who + ": " + w.to_string() + " not in v");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Gains of the always-bet-one martingale vs consumption of an integer family.
//
// The family is ceiled to integer values, frozen at bankruptcy, and padded
// with constants 2^j up to the hero's reachable capital. Each step runs the
// cascading long division of the members' capitals by the hero's remaining
// stakes m_1 = hero, m_{e+1} = m_e - r_e with q_e = floor(s_e / m_e),
// attends to the least e whose wager differs from q_e, and plays +1 exactly
// when that wager is at most q_e.

struct GainVsConsumptionResult {
  std::vector<Bit> sequence;
  std::vector<long long> hero_capital;  // rows 0..horizon
  std::vector<MemberSummary> members;   // prepared members incl. constants
  std::size_t user_member_count = 0;
  DiagLog log;

  long long hero_max() const {
    long long m = hero_capital.empty() ? 0 : hero_capital[0];
    for (long long c : hero_capital) m = std::max(m, c);
    return m;
  }
};

inline GainVsConsumptionResult diagonalize_gain_vs_consumption(
    const Family& family, std::size_t horizon, const ConstructOptions& opts = {}) {
  Family fam = family;
  fam.ceil_to_integer = true;
  fam.clamp_nonnegative = true;
  if (fam.augment_constants.empty())
    fam.augment_constants = powers_of_two_up_to(Rational(Int(horizon + 1)));
  const auto specs = prepared_members(fam);

  GainVsConsumptionResult res;
  res.user_member_count = family.members.size();
  if (opts.record_log)
    res.log.columns = {"n", "bit", "hero", "attention", "quotients"};

  std::vector<detail::MemberRun> runs;
  runs.reserve(specs.size());
  for (const auto& s : specs) runs.emplace_back(s);

  History x;
  long long hero = 1;
  res.hero_capital.push_back(hero);

  // previous step's division pairs (e = 1..i), attention index, and whether
  // each of those members consumed; used by the certificates.
  std::vector<std::pair<Int, Int>> prev_qr;
  std::vector<bool> prev_consumed;
  std::size_t prev_i = 0;

  for (std::size_t n = 0; n < horizon; ++n) {
    detail::certify(hero > 0, n, "hero capital positive");
    for (auto& r : runs) r.cursor.peek(x);

    // cascade of long divisions; extended past the attention index as far
    // as the previous step's certificates need
    std::vector<std::pair<Int, Int>> qr;
    std::vector<bool> consumed;
    std::size_t attention = specs.size();  // first e with wager != q_e
    Int m(static_cast<long>(hero));
    for (std::size_t e = 0; e < specs.size(); ++e) {
      const Int s = detail::to_int_exact(runs[e].cursor.capital(), n,
                                         specs[e].label + " capital");
      const Int sp = detail::to_int_exact(runs[e].cursor.pending_wager(), n,
                                          specs[e].label + " wager");
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), s.get_mpz_t(), m.get_mpz_t());
      Int r = s - q * m;
      qr.emplace_back(q, r);
      consumed.push_back(runs[e].cursor.pending_consumption().sign() > 0);
      if (attention == specs.size() && sp != q) attention = e;
      if (attention != specs.size() && e + 1 >= std::max(attention + 1, prev_i + 1))
        break;
      m -= r;
      detail::certify(m >= 1, n, "remaining stake m_e at least 1");
    }
    if (attention == specs.size())
      throw CertificateViolation(n, "no attention index: family too small");

    const Int sp_i = detail::to_int_exact(runs[attention].cursor.pending_wager(), n,
                                          specs[attention].label + " wager");
    const Bit bit = sp_i <= qr[attention].first ? Bit::plus : Bit::minus;

    if (opts.certificates && n > 0) {
      // pairs never grow for e below the previous attention index, strictly
      // shrink where that member consumed, and strictly shrink at the index
      for (std::size_t e = 0; e < prev_i && e < qr.size(); ++e) {
        detail::certify(qr[e] <= prev_qr[e], n, "division pair non-increasing");
        if (prev_consumed[e])
          detail::certify(qr[e] < prev_qr[e], n,
                          "division pair strictly decreasing under consumption");
      }
      if (prev_i < qr.size())
        detail::certify(qr[prev_i] < prev_qr[prev_i], n,
                        "division pair strictly decreasing at attention index");
    }

    if (opts.record_log) {
      std::string tuples;
      for (std::size_t e = 0; e <= attention && e < qr.size(); ++e) {
        if (e) tuples += "|";
        tuples += qr[e].first.get_str() + ":" + qr[e].second.get_str();
      }
      res.log.rows.push_back({std::to_string(n), std::string(1, bit_char(bit)),
                              std::to_string(hero), std::to_string(attention + 1),
                              tuples});
    }

    prev_qr = std::move(qr);
    prev_consumed = std::move(consumed);
    prev_i = attention;

    hero += bit == Bit::plus ? 1 : -1;
    x.push_back(bit);
    res.sequence.push_back(bit);
    res.hero_capital.push_back(hero);
    for (auto& r : runs) {
      const bool consumed_now = r.cursor.pending_consumption().sign() > 0;
      r.cursor.apply(bit);
      r.after_apply(n + 1);
      if (consumed_now) r.summary.consumption_last_change = n + 1;
    }
  }
  detail::certify(hero > 0, horizon, "hero capital positive");

  for (auto& r : runs) {
    r.summary.final_capital = r.cursor.capital();
    r.summary.final_consumption = r.cursor.accumulated_consumption();
    r.summary.final_floor = r.floor_now;
    r.summary.ever_bankrupt = r.cursor.bankrupt();
    res.members.push_back(std::move(r.summary));
  }
  return res;
}

// ---------------------------------------------------------------------------
// Consumption of the always-bet-one hero vs oscillation of a family whose
// wagers live in the punctured set.
//
// The hero banks floor(max-so-far / 2) as savings f and keeps m = M - f in
// play. Pairs (member, threshold) are enumerated threshold-major; the least
// pair with capital at or below its threshold, m above the pair index, and a
// live wager receives attention and gets its bet refuted; otherwise +1.

struct ConsumptionVsOscillationResult {
  std::vector<Bit> sequence;
  std::vector<Int> hero_capital;  // M, rows 0..horizon
  std::vector<Int> savings;       // f
  std::vector<Int> spendable;     // m = M - f
  // per-row min(threshold, floored capital) of the first few pairs; these
  // are what the construction actually pins down
  std::vector<std::vector<Int>> pair_states;
  std::vector<MemberSummary> members;
  std::size_t user_member_count = 0;
  DiagLog log;
};

inline ConsumptionVsOscillationResult diagonalize_consumption_vs_oscillation(
    const Family& family, std::size_t horizon, const ConstructOptions& opts = {}) {
  const auto specs = prepared_members(family);
  const std::size_t count = specs.size();

  ConsumptionVsOscillationResult res;
  res.user_member_count = family.members.size();
  if (opts.record_log)
    res.log.columns = {"n", "bit", "hero", "savings", "spendable",
                       "attention_pair", "attention_member", "pair_states"};

  std::vector<detail::MemberRun> runs;
  runs.reserve(count);
  for (const auto& s : specs) runs.emplace_back(s);

  const std::size_t tracked_pairs = count > 0 ? 4 : 0;
  auto& pair_states = res.pair_states;
  pair_states.resize(tracked_pairs);

  History x;
  Int hero(1), run_max(1);
  Int savings = run_max / 2;  // floor(1/2) = 0
  Int spendable = hero - savings;
  res.hero_capital.push_back(hero);
  res.savings.push_back(savings);
  res.spendable.push_back(spendable);
  std::size_t last_savings_increment = 0;  // row index; 0 = never

  auto pair_value = [&](std::size_t e) {  // e is 0-based pair index
    const std::size_t member = e % count;
    const Int threshold(static_cast<unsigned long>(e / count + 1));
    const Int fl = runs[member].cursor.capital().floor();
    return fl < threshold ? fl : threshold;
  };

  for (std::size_t n = 0; n <= horizon; ++n) {
    detail::certify(spendable >= 1, n, "spendable capital at least 1");
    for (auto& r : runs) r.cursor.peek(x);
    for (std::size_t e = 0; e < tracked_pairs; ++e)
      pair_states[e].push_back(pair_value(e));
    if (n == horizon) break;

    // least pair (member j, threshold k) with capital <= k, spendable > pair
    // index, and a live wager; per member the candidate is the first
    // threshold at or above its capital, since thresholds grow member-major
    std::optional<std::size_t> best_pair;  // 1-based pair index
    std::size_t best_member = 0;
    for (std::size_t j = 0; j < count; ++j) {
      const Rational& w = runs[j].cursor.pending_wager();
      detail::check_v_wager(w, n, specs[j].label);
      if (w.is_zero()) continue;
      Int t = runs[j].cursor.capital().ceil();
      if (t < 1) t = 1;
      const Int pair_index = (t - 1) * static_cast<unsigned long>(count) +
                             static_cast<unsigned long>(j) + 1;
      if (pair_index < spendable &&
          (!best_pair || pair_index < Int(static_cast<unsigned long>(*best_pair)))) {
        best_pair = static_cast<std::size_t>(pair_index.get_ui());
        best_member = j;
      }
    }

    Bit bit = Bit::plus;
    if (best_pair)
      bit = runs[best_member].cursor.pending_wager().sign() > 0 ? Bit::minus
                                                                : Bit::plus;

    if (opts.record_log) {
      std::string states;
      for (std::size_t e = 0; e < tracked_pairs; ++e) {
        if (e) states += "|";
        states += pair_states[e][n].get_str();
      }
      res.log.rows.push_back(
          {std::to_string(n), std::string(1, bit_char(bit)), hero.get_str(),
           savings.get_str(), spendable.get_str(),
           best_pair ? std::to_string(*best_pair) : "-",
           best_pair ? std::to_string(best_member + 1) : "-", states});
    }

    hero += bit == Bit::plus ? 1 : -1;
    if (hero > run_max) run_max = hero;
    const Int new_savings = run_max / 2;
    if (opts.certificates && new_savings != savings) {
      detail::certify(new_savings > savings, n + 1, "savings non-decreasing");
      detail::certify(last_savings_increment + 1 != n + 1 || last_savings_increment == 0,
                      n + 1, "savings never increment at consecutive steps");
      last_savings_increment = n + 1;
    }
    savings = new_savings;
    spendable = hero - savings;

    x.push_back(bit);
    res.sequence.push_back(bit);
    res.hero_capital.push_back(hero);
    res.savings.push_back(savings);
    res.spendable.push_back(spendable);
    for (auto& r : runs) {
      const bool consumed_now = r.cursor.pending_consumption().sign() > 0;
      r.cursor.apply(bit);
      r.after_apply(n + 1);
      if (consumed_now) r.summary.consumption_last_change = n + 1;
    }
  }

  if (opts.certificates && tracked_pairs > 0) {
    // pair states only settle once the spendable capital has permanently
    // cleared the level; check lexicographic monotonicity from there on
    for (std::size_t level = 1; level <= tracked_pairs; ++level) {
      std::size_t start = 0;
      for (std::size_t n = 0; n < res.spendable.size(); ++n)
        if (res.spendable[n] < Int(static_cast<unsigned long>(level))) start = n + 1;
      std::optional<std::size_t> prev;
      for (std::size_t n = start; n < res.spendable.size(); ++n) {
        if (!(res.spendable[n] > Int(static_cast<unsigned long>(level)))) continue;
        if (prev) {
          bool less_or_equal = true;
          for (std::size_t e = 0; e < level; ++e) {
            if (pair_states[e][n] < pair_states[e][*prev]) break;
            if (pair_states[e][n] > pair_states[e][*prev]) {
              less_or_equal = false;
              break;
            }
          }
          detail::certify(less_or_equal, n, "pair states non-increasing");
        }
        prev = n;
      }
    }
  }

  for (auto& r : runs) {
    r.summary.final_capital = r.cursor.capital();
    r.summary.final_consumption = r.cursor.accumulated_consumption();
    r.summary.final_floor = r.floor_now;
    r.summary.ever_bankrupt = r.cursor.bankrupt();
    res.members.push_back(std::move(r.summary));
  }
  return res;
}

// ---------------------------------------------------------------------------
// Gains of the 1 + 1/n bettor vs gains of an integer family.
//
// K(x|n) counts the consecutive losses the hero can survive; the pointer
// e(n) is the least prefix of the family whose capitals cover K. A live
// wager below the pointer gets refuted; otherwise the pointer member's wager
// is compared against its capital split into k(n) equal stakes.

struct VVsIntegerResult {
  std::vector<Bit> sequence;
  Rational hero_final, hero_max, hero_min;
  std::vector<std::size_t> survivable;  // K at rows 0..horizon
  std::vector<std::size_t> pointer;     // e(n) per decision step, 1-based
  std::vector<MemberSummary> members;
  std::size_t user_member_count = 0;
  DiagLog log;
};

inline VVsIntegerResult diagonalize_v_vs_z_gains(const Family& family,
                                                 std::size_t horizon,
                                                 const ConstructOptions& opts = {}) {
  Family fam = family;
  fam.clamp_nonnegative = true;
  if (fam.augment_constants.empty()) {
    // bound on the hero's reachable capital: 2 + horizon + H(horizon)
    std::size_t log2h = 1;
    while ((std::size_t{1} << log2h) < horizon + 2) ++log2h;
    fam.augment_constants =
        powers_of_two_up_to(Rational(Int(horizon + 4 + log2h)));
  }
  const auto specs = prepared_members(fam);

  VVsIntegerResult res;
  res.user_member_count = family.members.size();
  if (opts.record_log)
    res.log.columns = {"n", "bit", "hero", "survivable", "pointer", "stake",
                       "quotient", "remainder"};

  std::vector<detail::MemberRun> runs;
  runs.reserve(specs.size());
  for (const auto& s : specs) runs.emplace_back(s);

  History x;
  Rational hero(2);
  res.hero_max = hero;
  res.hero_min = hero;

  // K maintained incrementally: headroom = hero - (H(lo + k) - H(lo)) with
  // lo = current step; K is the largest k with k <= headroom
  HarmonicWindow window;
  Rational headroom = hero;
  std::size_t k = 0;
  auto adjust = [&](std::size_t n) {
    while (k > 0 && Rational(Int(k)) > headroom) {
      headroom += Rational(Int(1), Int(window.hi()));
      window.shrink_hi();
      --k;
    }
    for (;;) {
      const Rational grown = headroom - Rational(Int(1), Int(window.hi() + 1));
      if (Rational(Int(k + 1)) <= grown) {
        headroom = grown;
        window.grow_hi();
        ++k;
      } else {
        break;
      }
    }
    detail::certify(k >= 1, n, "hero survives at least one loss");
  };
  adjust(0);
  res.survivable.push_back(k);

  std::size_t prev_pointer = 0;  // 1-based e(n-1)
  bool prev_adversarial = false;
  std::size_t prev_refuted = 0;  // 1-based j refuted at n-1

  for (std::size_t n = 0; n < horizon; ++n) {
    for (auto& r : runs) r.cursor.peek(x);

    // pointer e(n): least e with K <= S_1 + ... + S_e
    const Int K(static_cast<unsigned long>(k));
    Int prefix(0);
    std::size_t pointer = specs.size();  // 0-based
    Int stake(0);
    for (std::size_t e = 0; e < specs.size(); ++e) {
      const Int s = detail::to_int_exact(runs[e].cursor.capital(), n,
                                         specs[e].label + " capital");
      if (K <= prefix + s) {
        pointer = e;
        stake = K - prefix;
        break;
      }
      prefix += s;
    }
    if (pointer == specs.size())
      throw CertificateViolation(n, "no pointer member: family too small");

    if (opts.certificates && n > 0) {
      if (prev_adversarial)
        detail::certify(pointer + 1 >= prev_refuted, n,
                        "pointer at least the refuted index");
      else
        detail::certify(pointer + 1 >= prev_pointer, n, "pointer non-decreasing");
    }

    // a live wager strictly below the pointer is refuted first
    std::optional<std::size_t> refute;
    for (std::size_t jj = 0; jj < pointer; ++jj)
      if (!runs[jj].cursor.pending_wager().is_zero()) {
        refute = jj;
        break;
      }

    Bit bit;
    Int q(0), r(0);
    if (refute) {
      bit = runs[*refute].cursor.pending_wager().sign() > 0 ? Bit::minus : Bit::plus;
    } else {
      const Int s = detail::to_int_exact(runs[pointer].cursor.capital(), n,
                                         specs[pointer].label + " capital");
      const Int sp = detail::to_int_exact(runs[pointer].cursor.pending_wager(), n,
                                          specs[pointer].label + " wager");
      // wager <= capital / stake, exactly
      bit = sp * stake <= s ? Bit::plus : Bit::minus;
      mpz_fdiv_q(q.get_mpz_t(), s.get_mpz_t(), stake.get_mpz_t());
      r = s - q * stake;
    }

    if (opts.record_log)
      res.log.rows.push_back({std::to_string(n), std::string(1, bit_char(bit)),
                              hero.to_string(), std::to_string(k),
                              std::to_string(pointer + 1), stake.get_str(),
                              refute ? "-" : q.get_str(),
                              refute ? "-" : r.get_str()});
    res.pointer.push_back(pointer + 1);
    prev_pointer = pointer + 1;
    prev_adversarial = refute.has_value();
    prev_refuted = refute ? *refute + 1 : 0;

    // hero wagers 1 + 1/(n+1); keep headroom in sync with the capital move
    // and the window base shift from n to n+1
    const Rational wager(Int(n + 2), Int(n + 1));
    if (bit == Bit::plus) {
      hero += wager;
      headroom += wager;
    } else {
      hero -= wager;
      headroom -= wager;
    }
    detail::certify(k >= 1, n, "window base shift");
    headroom += Rational(Int(1), Int(window.lo() + 1));
    window.advance_lo();
    --k;
    adjust(n + 1);
    res.survivable.push_back(k);

    if (hero > res.hero_max) res.hero_max = hero;
    if (hero < res.hero_min) res.hero_min = hero;

    x.push_back(bit);
    res.sequence.push_back(bit);
    for (auto& r2 : runs) {
      const bool consumed_now = r2.cursor.pending_consumption().sign() > 0;
      r2.cursor.apply(bit);
      r2.after_apply(n + 1);
      if (consumed_now) r2.summary.consumption_last_change = n + 1;
    }
  }
  res.hero_final = hero;

  for (auto& r : runs) {
    r.summary.final_capital = r.cursor.capital();
    r.summary.final_consumption = r.cursor.accumulated_consumption();
    r.summary.final_floor = r.floor_now;
    r.summary.ever_bankrupt = r.cursor.bankrupt();
    res.members.push_back(std::move(r.summary));
  }
  return res;
}

// ---------------------------------------------------------------------------
// Gains of the scaled harmonic bettor vs gains of a punctured-set family,
// with fair-coin phases. Odd-index stopping times fire when the leading
// members' capitals drop below the clock; even-index ones when the harmonic
// sum of the phase's bits reaches the level L. Between them the construction
// refutes the least member active since the phase started.

struct RealVsVResult {
  std::vector<Bit> sequence;
  Rational hero_final, hero_max, hero_min;
  std::vector<std::size_t> stopping_times;
  std::vector<MemberSummary> members;
  std::size_t user_member_count = 0;
  std::uint64_t seed = 0;
  DiagLog log;
};

inline RealVsVResult diagonalize_r_vs_v_gains(const Family& family,
                                              std::size_t horizon,
                                              const Rational& level,
                                              const Rational& hero_initial,
                                              std::uint64_t seed,
                                              const ConstructOptions& opts = {}) {
  Family fam = family;
  fam.clamp_nonnegative = true;
  const auto specs = prepared_members(fam);
  const std::size_t count = specs.size();

  RealVsVResult res;
  res.user_member_count = family.members.size();
  res.seed = seed;
  if (opts.record_log)
    res.log.columns = {"n", "bit", "phase", "hero", "phase_sum", "refuted"};

  std::vector<detail::MemberRun> runs;
  runs.reserve(count);
  for (const auto& s : specs) runs.emplace_back(s);

  std::mt19937_64 engine(seed);
  const Rational hero_scale = level + Rational(2);

  History x;
  Rational hero = hero_initial;
  res.hero_max = hero;
  res.hero_min = hero;

  bool adversarial = false;
  std::size_t next_index = 1;       // next stopping time to discover
  std::size_t phase_start = 0;      // node where the adversarial phase began
  Rational phase_sum;               // sum of x_t / t since phase_start
  std::size_t minus_count = 0;
  Rational hero_at_phase_start;
  std::vector<bool> ever_active(count, false);
  std::vector<Int> prev_floors;  // lex certificate within adversarial phases

  for (std::size_t n = 0; n < horizon; ++n) {
    for (auto& r : runs) r.cursor.peek(x);
    for (std::size_t j = 0; j < count; ++j) {
      detail::check_v_wager(runs[j].cursor.pending_wager(), n, specs[j].label);
      if (adversarial && !runs[j].cursor.pending_wager().is_zero())
        ever_active[j] = true;
    }

    Bit bit;
    std::optional<std::size_t> refuted;
    if (!adversarial) {
      bit = (engine() & 1u) ? Bit::plus : Bit::minus;
    } else {
      // the phase that started at n_{2i+1} may refute members 1..i+1
      const std::size_t punishable = next_index / 2;  // i + 1
      std::size_t least_active = count;
      for (std::size_t j = 0; j < count; ++j)
        if (ever_active[j]) {
          least_active = j;
          break;
        }
      if (least_active < count && least_active + 1 <= punishable &&
          runs[least_active].cursor.pending_wager().sign() > 0) {
        bit = Bit::minus;
        refuted = least_active;
      } else {
        bit = Bit::plus;
      }
    }

    if (opts.record_log)
      res.log.rows.push_back({std::to_string(n), std::string(1, bit_char(bit)),
                              adversarial ? "adversarial" : "fair",
                              hero.to_string(),
                              adversarial ? phase_sum.to_string() : "-",
                              refuted ? std::to_string(*refuted + 1) : "-"});

    const Rational term(Int(1), Int(n + 1));
    hero += bit == Bit::plus ? hero_scale * term : -(hero_scale * term);
    if (adversarial) {
      phase_sum += bit == Bit::plus ? term : -term;
      if (bit == Bit::minus) ++minus_count;
    }
    if (hero > res.hero_max) res.hero_max = hero;
    if (hero < res.hero_min) res.hero_min = hero;

    x.push_back(bit);
    res.sequence.push_back(bit);
    for (auto& r : runs) {
      r.cursor.apply(bit);
      r.after_apply(n + 1);
    }

    if (opts.certificates && adversarial) {
      detail::certify(minus_count <= phase_start, n + 1,
                      "refutations bounded by the phase start");
      detail::certify(hero - hero_at_phase_start > -hero_scale, n + 1,
                      "hero drawdown within an adversarial phase");
      const std::size_t lead = next_index / 2 - 1;  // members 1..i
      std::vector<Int> floors;
      for (std::size_t j = 0; j < std::min(lead, count); ++j)
        floors.push_back(runs[j].cursor.capital().floor());
      if (prev_floors.size() == floors.size())
        detail::certify(floors <= prev_floors, n + 1,
                        "leading floors non-increasing in adversarial phase");
      prev_floors = std::move(floors);
    }

    // stopping-time discovery at the new node n+1
    const std::size_t t = n + 1;
    if (!adversarial) {
      // n_{2i+1}: sum of the first i+1 capitals drops below the clock;
      // members beyond the family count as 0
      const std::size_t lead = (next_index + 1) / 2;
      Rational sum(0);
      for (std::size_t j = 0; j < std::min(lead, count); ++j)
        sum += runs[j].cursor.capital();
      if (sum < Rational(Int(t))) {
        res.stopping_times.push_back(t);
        ++next_index;
        adversarial = true;
        phase_start = t;
        // the defining sum starts at n_{2i+1} itself, whose bit was fair and
        // is not one of the phase's refutations
        phase_sum = bit == Bit::plus ? term : -term;
        minus_count = 0;
        hero_at_phase_start = hero;
        std::fill(ever_active.begin(), ever_active.end(), false);
        prev_floors.clear();
        const std::size_t lead = next_index / 2 - 1;
        for (std::size_t j = 0; j < std::min(lead, count); ++j)
          prev_floors.push_back(runs[j].cursor.capital().floor());
      }
    } else if (phase_sum >= level) {
      res.stopping_times.push_back(t);
      ++next_index;
      adversarial = false;
    }
  }
  res.hero_final = hero;

  for (auto& r : runs) {
    r.summary.final_capital = r.cursor.capital();
    r.summary.final_consumption = r.cursor.accumulated_consumption();
    r.summary.final_floor = r.floor_now;
    r.summary.ever_bankrupt = r.cursor.bankrupt();
    res.members.push_back(std::move(r.summary));
  }
  return res;
}

// ---------------------------------------------------------------------------
// Casino schedule: bankrupt each integer bettor in turn by refuting every
// bet until its capital has sat still for a patience window, then feed the
// fractional-part hero +1s until its floor ticks up, and rotate.

struct CasinoResult {
  std::vector<Bit> sequence;
  Rational hero_final;
  std::vector<Int> hero_floor;  // rows 0..horizon
  struct PhaseAEnd {
    std::size_t member = 0;
    std::size_t step = 0;
    Rational capital;
  };
  std::vector<PhaseAEnd> phase_a_ends;
  std::vector<MemberSummary> members;
  std::size_t user_member_count = 0;
  DiagLog log;
};

inline CasinoResult casino_demo(const SupermartingaleSpec& hero_spec,
                                const Family& family, std::size_t horizon,
                                std::size_t patience = 8,
                                const ConstructOptions& opts = {}) {
  Family fam = family;
  fam.clamp_nonnegative = true;
  const auto specs = prepared_members(fam);
  const std::size_t count = specs.size();

  CasinoResult res;
  res.user_member_count = family.members.size();
  if (opts.record_log)
    res.log.columns = {"n", "bit", "phase", "target", "target_capital",
                       "hero", "hero_floor"};

  std::vector<detail::MemberRun> runs;
  runs.reserve(count);
  for (const auto& s : specs) runs.emplace_back(s);

  History x;
  Cursor hero(hero_spec);
  res.hero_floor.push_back(hero.capital().floor());

  bool attacking = count > 0;
  std::size_t target = 0;
  std::size_t quiet = 0;
  Int floor_goal = hero.capital().floor() + 1;

  for (std::size_t n = 0; n < horizon; ++n) {
    hero.peek(x);
    for (auto& r : runs) r.cursor.peek(x);

    if (attacking && quiet >= patience) {
      res.phase_a_ends.push_back({target, n, runs[target].cursor.capital()});
      attacking = false;
      floor_goal = hero.capital().floor() + 1;
    } else if (!attacking && count > 0 && hero.capital().floor() >= floor_goal) {
      target = (target + 1) % count;
      attacking = true;
      quiet = 0;
    }

    Bit bit = Bit::plus;
    if (attacking) {
      const Rational& w = runs[target].cursor.pending_wager();
      detail::to_int_exact(w, n, specs[target].label + " wager");
      detail::to_int_exact(runs[target].cursor.pending_consumption(), n,
                           specs[target].label + " consumption");
      if (!w.is_zero()) {
        bit = w.sign() > 0 ? Bit::minus : Bit::plus;
        quiet = 0;
      } else {
        ++quiet;
      }
    }

    if (opts.record_log)
      res.log.rows.push_back(
          {std::to_string(n), std::string(1, bit_char(bit)),
           attacking ? "attack" : "feed",
           count > 0 ? std::to_string(target + 1) : "-",
           count > 0 ? runs[target].cursor.capital().to_string() : "-",
           hero.capital().to_string(), hero.capital().floor().get_str()});

    const Int floor_before = hero.capital().floor();
    hero.apply(bit);
    x.push_back(bit);
    res.sequence.push_back(bit);
    res.hero_floor.push_back(hero.capital().floor());
    if (opts.certificates)
      detail::certify(hero.capital().floor() >= floor_before, n + 1,
                      "hero floor never decreases");
    for (auto& r : runs) {
      r.cursor.apply(bit);
      r.after_apply(n + 1);
    }
  }
  res.hero_final = hero.capital();

  for (auto& r : runs) {
    r.summary.final_capital = r.cursor.capital();
    r.summary.final_consumption = r.cursor.accumulated_consumption();
    r.summary.final_floor = r.floor_now;
    r.summary.ever_bankrupt = r.cursor.bankrupt();
    res.members.push_back(std::move(r.summary));
  }
  return res;
}

}  // namespace wagerlab
