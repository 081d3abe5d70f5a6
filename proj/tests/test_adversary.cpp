#include <catch2/catch_amalgamated.hpp>

#include <memory>
#include <sstream>

#include "wagerlab/adversary.hpp"
#include "wagerlab/harmonic.hpp"
#include "wagerlab/io.hpp"

using namespace wagerlab;

namespace {

// consumes 1 per step while it can; the clamp freezes it at 0
SupermartingaleSpec steady_consumer(const Rational& initial) {
  SupermartingaleSpec s;
  s.initial = initial;
  s.wager = [](const History&) { return Rational(0); };
  s.marginal_consumption = [](const History&) { return Rational(1); };
  s.wager_set = WagerSet::integers();
  s.label = "consumer(" + initial.to_string() + ")";
  return s;
}

// always wagers +1; in the punctured set, and integer-valued
SupermartingaleSpec v_up_bettor(const Rational& initial) {
  SupermartingaleSpec s;
  s.initial = initial;
  s.wager = [](const History&) { return Rational(1); };
  s.marginal_consumption = [](const History&) { return Rational(0); };
  s.wager_set = WagerSet::v();
  s.label = "up(" + initial.to_string() + ")";
  return s;
}

// wagers +1 at even lengths and -1 at odd ones: an oscillation attempt
SupermartingaleSpec v_alternator(const Rational& initial) {
  SupermartingaleSpec s;
  s.initial = initial;
  s.wager = [](const History& h) {
    return h.size() % 2 == 0 ? Rational(1) : Rational(-1);
  };
  s.marginal_consumption = [](const History&) { return Rational(0); };
  s.wager_set = WagerSet::v();
  s.label = "alt(" + initial.to_string() + ")";
  return s;
}

bool all_plus(const std::vector<Bit>& bits) {
  for (Bit b : bits)
    if (b != Bit::plus) return false;
  return true;
}

std::string log_bytes(const DiagLog& log) {
  std::ostringstream os;
  log.write_csv(os);
  return os.str();
}

}  // namespace

TEST_CASE("gain-vs-consumption against pure constants plays all +1") {
  Family fam;
  fam.members = {make_constant(Rational(5)), make_constant(Rational(25))};
  ConstructOptions opts;
  opts.certificates = true;
  const auto res = diagonalize_gain_vs_consumption(fam, 40, opts);
  REQUIRE(all_plus(res.sequence));
  // hero capital 1 + n
  for (std::size_t n = 0; n <= 40; ++n)
    REQUIRE(res.hero_capital[n] == 1 + static_cast<long long>(n));

  // hand-run division pairs for the first member (capital 5):
  // m=1..6 gives q = 5,2,1,1,1,0; at q=0 the attention moves to member 2
  const std::vector<std::string> expect_q = {"5", "2", "1", "1", "1"};
  for (std::size_t n = 0; n < expect_q.size(); ++n) {
    const auto& tuples = res.log.rows[n][4];
    REQUIRE(tuples.substr(0, tuples.find(':')) == expect_q[n]);
    REQUIRE(res.log.rows[n][3] == "1");  // attention at member 1
  }
  REQUIRE(res.log.rows[5][3] == "2");
}

TEST_CASE("gain-vs-consumption with empty family rides its constants") {
  Family fam;
  ConstructOptions opts;
  opts.certificates = true;
  const auto res = diagonalize_gain_vs_consumption(fam, 64, opts);
  REQUIRE(all_plus(res.sequence));
  REQUIRE(res.user_member_count == 0);
  REQUIRE(res.members.size() >= 7);  // 1,2,...,>=64
  REQUIRE(res.hero_capital.back() == 65);
}

TEST_CASE("gain-vs-consumption certificates hold against a consumer") {
  Family fam;
  fam.members = {steady_consumer(Rational(60)), make_unit_bettor(Rational(9))};
  ConstructOptions opts;
  opts.certificates = true;
  opts.record_log = false;
  const auto res = diagonalize_gain_vs_consumption(fam, 10000, opts);
  REQUIRE(res.sequence.size() == 10000);
  // the consumer was frozen by the clamp once drained: consumption settles
  REQUIRE(res.members[0].consumption_stable(10000, 5000));
  REQUIRE(res.members[0].final_consumption == Rational(60));
  // hero solvency, asserted from a fresh trace of the emitted sequence
  const auto hero = evaluate(make_unit_bettor(Rational(1)), res.sequence, 10000);
  for (const auto& row : hero.rows) REQUIRE_FALSE(row.bankrupt);
}

TEST_CASE("consumption-vs-oscillation against a constant plays all +1") {
  Family fam;
  fam.members = {make_constant(Rational(3))};
  ConstructOptions opts;
  opts.certificates = true;
  const auto res = diagonalize_consumption_vs_oscillation(fam, 3, opts);
  REQUIRE(all_plus(res.sequence));
  // savings trace on (+,+,+) from capital 1: f = 0,1,1,2
  const std::vector<long> expect_f = {0, 1, 1, 2};
  for (std::size_t n = 0; n <= 3; ++n)
    REQUIRE(res.savings[n] == Int(expect_f[n]));
}

TEST_CASE("consumption-vs-oscillation with empty family staircases") {
  Family fam;
  const auto res = diagonalize_consumption_vs_oscillation(fam, 9);
  REQUIRE(all_plus(res.sequence));
  // m = M - f alternates 1,1,2,2,3,...
  const std::vector<long> expect_m = {1, 1, 2, 2, 3, 3, 4, 4, 5, 5};
  for (std::size_t n = 0; n <= 9; ++n)
    REQUIRE(res.spendable[n] == Int(expect_m[n]));
}

TEST_CASE("consumption-vs-oscillation hammers an oscillating v-bettor flat") {
  Family fam;
  fam.members = {v_alternator(Rational(10))};
  fam.clamp_nonnegative = true;
  ConstructOptions opts;
  opts.certificates = true;
  opts.record_log = false;
  const auto res = diagonalize_consumption_vs_oscillation(fam, 10000, opts);
  for (const auto& m : res.spendable) REQUIRE(m >= 1);
  REQUIRE(res.members[0].floor_stable(10000, 5000));
  REQUIRE(res.members[0].final_capital <= Rational(1));
  REQUIRE(res.savings.back() > 100);

  // savings never increment at two consecutive rows
  for (std::size_t n = 2; n < res.savings.size(); ++n)
    REQUIRE((res.savings[n] == res.savings[n - 1] ||
             res.savings[n - 1] == res.savings[n - 2]));

  const auto hero = evaluate(make_unit_bettor(Rational(1)), res.sequence, 10000);
  for (const auto& row : hero.rows) REQUIRE_FALSE(row.bankrupt);
}

TEST_CASE("consumption-vs-oscillation pins the always-up bettor's pairs") {
  // a bettor that only climbs never oscillates; the construction leaves it
  // alone and its pair states min(k, floor) settle at the thresholds
  Family fam;
  fam.members = {v_up_bettor(Rational(10))};
  fam.clamp_nonnegative = true;
  ConstructOptions opts;
  opts.certificates = true;
  opts.record_log = false;
  const auto res = diagonalize_consumption_vs_oscillation(fam, 4000, opts);
  for (const auto& series : res.pair_states) {
    REQUIRE_FALSE(series.empty());
    const Int last = series.back();
    for (std::size_t n = series.size() / 2; n < series.size(); ++n)
      REQUIRE(series[n] == last);
  }
  REQUIRE(res.savings.back() > 100);
}

TEST_CASE("v-vs-integer against pure constants plays all +1") {
  Family fam;
  ConstructOptions opts;
  opts.certificates = true;
  const auto res = diagonalize_v_vs_z_gains(fam, 24, opts);
  REQUIRE(all_plus(res.sequence));
  // hero capitals 2, 4, 11/2, ...
  REQUIRE(res.hero_max == Rational(2) + Rational(24) +
                              (harmonic_sum(24) - harmonic_sum(0)) * Rational(1));
  REQUIRE(res.log.rows[0][2] == "2");
  REQUIRE(res.log.rows[1][2] == "4");
  REQUIRE(res.log.rows[2][2] == "11/2");
  // e(0) = 1 against the constant 1, with a single survivable loss
  REQUIRE(res.survivable[0] == 1);
  REQUIRE(res.pointer[0] == 1);
}

TEST_CASE("v-vs-integer incremental survivable-loss count matches the scan") {
  Family fam;
  fam.members = {v_alternator(Rational(6)), make_constant(Rational(3))};
  ConstructOptions opts;
  opts.certificates = true;
  const auto res = diagonalize_v_vs_z_gains(fam, 300, opts);

  const auto hero = evaluate(make_one_plus_harmonic(Rational(2)), res.sequence, 300);
  for (std::size_t n = 0; n <= 300; ++n) {
    REQUIRE(res.survivable[n] ==
            survivable_losses(n, hero.rows[n].capital));
    REQUIRE_FALSE(hero.rows[n].bankrupt);
  }
  REQUIRE(res.hero_final == hero.rows[300].capital);
}

TEST_CASE("v-vs-integer defeats oscillating bettors while the hero gains") {
  Family fam;
  fam.members = {v_alternator(Rational(12)), steady_consumer(Rational(8))};
  ConstructOptions opts;
  opts.certificates = true;
  opts.record_log = false;
  const auto res = diagonalize_v_vs_z_gains(fam, 8000, opts);
  REQUIRE(res.members[0].floor_stable(8000, 4000));
  REQUIRE(res.members[1].floor_stable(8000, 4000));
  REQUIRE(res.hero_max >= Rational(20));
  REQUIRE(res.hero_min > Rational(0));
}

TEST_CASE("real-vs-v stopping times against the zero constant") {
  Family fam;
  fam.members = {make_constant(Rational(0))};
  ConstructOptions opts;
  opts.certificates = true;
  const auto res =
      diagonalize_r_vs_v_gains(fam, 40, Rational(4), Rational(3), 7, opts);
  REQUIRE(res.sequence.size() == 40);
  REQUIRE(res.stopping_times.size() >= 3);
  // n_1 = 1: the constant's capital 0 is already below the clock
  REQUIRE(res.stopping_times[0] == 1);
  // the adversarial phase plays +1 until the harmonic sum from 1 reaches 4
  std::size_t expect = 1;
  while (harmonic_sum(expect) < Rational(4)) ++expect;
  REQUIRE(expect == 31);
  REQUIRE(res.stopping_times[1] == expect);
  for (std::size_t t = 1; t < 31; ++t) REQUIRE(res.sequence[t] == Bit::plus);
  // the next clock check fires immediately
  REQUIRE(res.stopping_times[2] == 32);
}

TEST_CASE("real-vs-v is seed-deterministic") {
  Family fam;
  fam.members = {v_up_bettor(Rational(4))};
  const auto a = diagonalize_r_vs_v_gains(fam, 500, Rational(4), Rational(3), 42);
  Family fam2;
  fam2.members = {v_up_bettor(Rational(4))};
  const auto b = diagonalize_r_vs_v_gains(fam2, 500, Rational(4), Rational(3), 42);
  REQUIRE(a.sequence == b.sequence);
  REQUIRE(log_bytes(a.log) == log_bytes(b.log));

  Family fam3;
  fam3.members = {v_up_bettor(Rational(4))};
  const auto c = diagonalize_r_vs_v_gains(fam3, 500, Rational(4), Rational(3), 43);
  REQUIRE(a.sequence != c.sequence);
}

TEST_CASE("casino bankrupts a unit bettor then feeds the hero") {
  Family fam;
  fam.members = {make_unit_bettor(Rational(3))};
  ConstructOptions opts;
  opts.certificates = true;
  const auto hero = make_casino_fractional(ratio(7, 3));
  const auto res = casino_demo(hero, fam, 64, 4, opts);

  // three refuted bets, then the patience window of quiet +1s
  REQUIRE(res.sequence[0] == Bit::minus);
  REQUIRE(res.sequence[1] == Bit::minus);
  REQUIRE(res.sequence[2] == Bit::minus);
  for (std::size_t t = 3; t < 3 + 4; ++t) REQUIRE(res.sequence[t] == Bit::plus);
  REQUIRE_FALSE(res.phase_a_ends.empty());
  REQUIRE(res.phase_a_ends[0].member == 0);
  REQUIRE(res.phase_a_ends[0].capital == Rational(0));

  // the hero's floor never decreases and eventually ticks up
  for (std::size_t n = 1; n < res.hero_floor.size(); ++n)
    REQUIRE(res.hero_floor[n] >= res.hero_floor[n - 1]);
  REQUIRE(res.hero_floor.back() >= res.hero_floor.front() + 1);
}

TEST_CASE("casino against a constant plays all +1") {
  Family fam;
  fam.members = {make_constant(Rational(5))};
  const auto res = casino_demo(make_casino_fractional(ratio(7, 3)), fam, 32, 4);
  REQUIRE(all_plus(res.sequence));
  REQUIRE(res.phase_a_ends[0].capital == Rational(5));
}

TEST_CASE("casino hero floor holds against a three-member family") {
  Family fam;
  fam.members = {make_unit_bettor(Rational(3)), make_constant(Rational(2)),
                 v_up_bettor(Rational(5))};
  ConstructOptions opts;
  opts.certificates = true;
  opts.record_log = false;
  const auto res =
      casino_demo(make_casino_fractional(ratio(7, 3)), fam, 10000, 8, opts);
  for (std::size_t n = 1; n < res.hero_floor.size(); ++n)
    REQUIRE(res.hero_floor[n] >= res.hero_floor[n - 1]);
  REQUIRE(res.hero_final.floor() > 2);
  const auto hero_trace =
      evaluate(make_casino_fractional(ratio(7, 3)), res.sequence, 10000);
  for (const auto& row : hero_trace.rows) REQUIRE_FALSE(row.bankrupt);
}

TEST_CASE("deterministic constructions are byte-identical across runs") {
  Family fam;
  fam.members = {v_up_bettor(Rational(7)), make_constant(Rational(2))};
  const auto a = diagonalize_consumption_vs_oscillation(fam, 400);
  Family fam2;
  fam2.members = {v_up_bettor(Rational(7)), make_constant(Rational(2))};
  const auto b = diagonalize_consumption_vs_oscillation(fam2, 400);
  REQUIRE(a.sequence == b.sequence);
  REQUIRE(log_bytes(a.log) == log_bytes(b.log));

  Family fam3;
  fam3.members = {steady_consumer(Rational(5))};
  const auto c = diagonalize_gain_vs_consumption(fam3, 400);
  Family fam4;
  fam4.members = {steady_consumer(Rational(5))};
  const auto d = diagonalize_gain_vs_consumption(fam4, 400);
  REQUIRE(c.sequence == d.sequence);
  REQUIRE(log_bytes(c.log) == log_bytes(d.log));
}

TEST_CASE("family preprocessing: ceiling and bankruptcy freeze") {
  // fractional-valued supermartingale with integer wagers
  SupermartingaleSpec s;
  s.initial = ratio(7, 2);
  s.wager = [](const History&) { return Rational(1); };
  s.marginal_consumption = [](const History&) { return ratio(1, 4); };
  s.wager_set = WagerSet::integers();
  s.label = "frac";
  const auto ceiled = ceil_values(s);
  REQUIRE(ceiled.initial == Rational(4));
  const std::vector<Bit> x(6, Bit::plus);
  const auto t = evaluate(ceiled, x, 6);
  const auto raw = evaluate(s, x, 6);
  for (std::size_t n = 0; n <= 6; ++n) {
    REQUIRE(t.rows[n].capital == Rational(raw.rows[n].capital.ceil()));
    REQUIRE(t.rows[n].capital.is_integer());
  }

  // the freeze stops a unit bettor at zero
  const auto frozen = clamp_nonnegative(make_unit_bettor(Rational(2)));
  const auto ft = evaluate(frozen, std::vector<Bit>(6, Bit::minus), 6);
  REQUIRE(ft.rows[2].capital == Rational(0));
  for (std::size_t n = 2; n <= 6; ++n) {
    REQUIRE(ft.rows[n].capital == Rational(0));
    REQUIRE_FALSE(ft.rows[n].bankrupt);
  }

  // negative initial capital degenerates to the constant 0
  SupermartingaleSpec neg = make_unit_bettor(Rational(0));
  neg.initial = Rational(-3);
  const auto zeroed = clamp_nonnegative(neg);
  REQUIRE(zeroed.initial == Rational(0));
  const auto zt = evaluate(zeroed, x, 6);
  for (const auto& row : zt.rows) REQUIRE(row.capital == Rational(0));

  // non-integer wagers are rejected by the ceiling wrapper
  SupermartingaleSpec halfer;
  halfer.initial = Rational(1);
  halfer.wager = [](const History&) { return ratio(1, 2); };
  halfer.marginal_consumption = [](const History&) { return Rational(0); };
  halfer.wager_set = WagerSet::reals();
  halfer.label = "halfer";
  const auto bad = ceil_values(halfer);
  REQUIRE_THROWS_AS(evaluate(bad, x, 2), FamilyNotInteger);
}

TEST_CASE("constants augmentation covers the requested bound") {
  const auto values = powers_of_two_up_to(Rational(100));
  REQUIRE(values.front() == Rational(1));
  REQUIRE(values.back() == Rational(128));
  Family fam;
  fam.augment_constants = values;
  const auto specs = prepared_members(fam);
  REQUIRE(specs.size() == values.size());
  REQUIRE(specs[3].initial == Rational(8));
}
