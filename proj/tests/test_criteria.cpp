#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "wagerlab/criteria.hpp"
#include "wagerlab/strategies.hpp"
#include "wagerlab/transforms.hpp"

using namespace wagerlab;

namespace {

std::vector<Bit> bits(std::size_t n, Bit b) { return std::vector<Bit>(n, b); }

Trace trace_of_capitals(const std::vector<Rational>& caps) {
  Trace t;
  t.spec_label = "synthetic";
  t.horizon = caps.size() - 1;
  for (std::size_t n = 0; n < caps.size(); ++n)
    t.rows.push_back({n, n ? std::optional<Bit>(Bit::plus) : std::nullopt,
                      caps[n], Rational(0), Rational(0), Rational(0), false});
  return t;
}

CriterionConfig gains_cfg(const Rational& g) {
  CriterionConfig cfg;
  cfg.criterion = Criterion::gains;
  cfg.gain_threshold = g;
  return cfg;
}

// alternating +-1 bettor: capitals 2,3,2,3,... on the all-plus sequence
SupermartingaleSpec alternator() {
  SupermartingaleSpec s;
  s.initial = Rational(2);
  s.wager = [](const History& h) {
    return h.size() % 2 == 0 ? Rational(1) : Rational(-1);
  };
  s.marginal_consumption = [](const History&) { return Rational(0); };
  s.wager_set = WagerSet::v();
  s.label = "alternator";
  return s;
}

}  // namespace

TEST_CASE("gains verdict") {
  const auto unit = make_unit_bettor(Rational(1));
  const auto up = evaluate(unit, bits(20, Bit::plus), 20);
  const auto hit = gains_verdict(up, gains_cfg(Rational(10)));
  REQUIRE(hit.outcome == Outcome::achieved_at);
  REQUIRE(*hit.step == 9);  // capital 1 + n reaches 10 at n = 9

  const auto flat = evaluate(make_constant(Rational(5)), bits(20, Bit::plus), 20);
  REQUIRE(gains_verdict(flat, gains_cfg(Rational(10))).outcome ==
          Outcome::inconclusive);

  const auto down = evaluate(unit, bits(20, Bit::minus), 20);
  const auto broke = gains_verdict(down, gains_cfg(Rational(10)));
  REQUIRE(broke.outcome == Outcome::bankrupt);
  REQUIRE(*broke.step == 1);

  REQUIRE_THROWS_AS(gains_verdict(up, gains_cfg(Rational(0))),
                    std::invalid_argument);
}

TEST_CASE("consumption verdict") {
  SupermartingaleSpec sink;
  sink.initial = Rational(100);
  sink.wager = [](const History&) { return Rational(0); };
  sink.marginal_consumption = [](const History&) { return Rational(1); };
  sink.wager_set = WagerSet::integers();
  sink.label = "sink";
  const auto t = evaluate(sink, bits(20, Bit::plus), 20);
  CriterionConfig cfg;
  cfg.criterion = Criterion::consumption;
  cfg.gain_threshold = Rational(5);
  const auto v = consumption_verdict(t, cfg);
  REQUIRE(v.outcome == Outcome::achieved_at);
  REQUIRE(*v.step == 5);

  const auto proper =
      evaluate(make_unit_bettor(Rational(50)), bits(20, Bit::plus), 20);
  REQUIRE(consumption_verdict(proper, cfg).outcome == Outcome::inconclusive);
}

TEST_CASE("consumption verdict on the transformed alternator") {
  // the oscillation-to-consumption output of the alternator banks 1/2 per
  // full cycle; the charge lands at the odd stopping times 1, 3, 5, so the
  // accumulated column crosses 3/2 one row after the third one
  const auto s =
      oscillation_to_consumption(alternator(), ratio(9, 4), ratio(11, 4));
  const auto t = evaluate(s, bits(10, Bit::plus), 10);
  CriterionConfig cfg;
  cfg.criterion = Criterion::consumption;
  cfg.gain_threshold = ratio(3, 2);
  const auto v = consumption_verdict(t, cfg);
  REQUIRE(v.outcome == Outcome::achieved_at);
  REQUIRE(*v.step == 6);
}

TEST_CASE("oscillation verdict counts band flips of the cover") {
  const auto t = trace_of_capitals(
      {Rational(5), Rational(4), Rational(5), Rational(4), Rational(5)});
  CriterionConfig cfg;
  cfg.criterion = Criterion::oscillation;
  cfg.band_low = ratio(17, 4);
  cfg.band_high = ratio(19, 4);
  cfg.crossing_target = 3;
  const auto v = oscillation_verdict(t, cfg);
  REQUIRE(v.outcome == Outcome::achieved_at);
  REQUIRE(*v.step == 3);  // flips at 1, 2, 3, 4
  REQUIRE(v.crossings == std::vector<std::size_t>{1, 2, 3, 4});

  const auto flat = trace_of_capitals(std::vector<Rational>(6, Rational(5)));
  cfg.crossing_target = 1;
  REQUIRE(oscillation_verdict(flat, cfg).outcome == Outcome::inconclusive);

  // monotone: one upward crossing only
  const auto mono =
      trace_of_capitals({Rational(4), ratio(9, 2), Rational(5), Rational(6)});
  cfg.crossing_target = 2;
  REQUIRE(oscillation_verdict(mono, cfg).outcome == Outcome::inconclusive);

  cfg.band_low = Rational(5);
  cfg.band_high = Rational(4);
  REQUIRE_THROWS_AS(oscillation_verdict(t, cfg), BandInvalid);
}

TEST_CASE("oscillation watches the cover, not the raw capital") {
  // consumption makes the raw capital fall while the cover stays put
  SupermartingaleSpec s;
  s.initial = Rational(10);
  s.wager = [](const History&) { return Rational(0); };
  s.marginal_consumption = [](const History&) { return Rational(1); };
  s.wager_set = WagerSet::integers();
  s.label = "drainer";
  const auto t = evaluate(s, bits(5, Bit::plus), 5);  // capital 10 down to 5
  CriterionConfig cfg;
  cfg.criterion = Criterion::oscillation;
  cfg.band_low = Rational(6);
  cfg.band_high = Rational(8);
  cfg.crossing_target = 1;
  REQUIRE(oscillation_verdict(t, cfg).outcome == Outcome::inconclusive);
}

TEST_CASE("stabilization check") {
  const auto flat = evaluate(make_constant(Rational(5)), bits(12, Bit::plus), 12);
  const auto v = stabilization_check(flat, 6, TraceStatistic::capital);
  REQUIRE(v.outcome == Outcome::stable_in_window);
  REQUIRE_FALSE(v.last_change.has_value());

  const auto up = evaluate(make_unit_bettor(Rational(1)), bits(12, Bit::plus), 12);
  const auto moving = stabilization_check(up, 10, TraceStatistic::capital);
  REQUIRE(moving.outcome == Outcome::inconclusive);
  REQUIRE(*moving.last_change == 12);

  // floored capital of the fractional bettor settles even while the exact
  // capital keeps moving
  const auto frac =
      evaluate(make_casino_fractional(ratio(7, 3)), bits(12, Bit::minus), 12);
  REQUIRE(stabilization_check(frac, 6, TraceStatistic::floored_capital).outcome ==
          Outcome::stable_in_window);
  REQUIRE(stabilization_check(frac, 6, TraceStatistic::capital).outcome ==
          Outcome::inconclusive);

  REQUIRE_THROWS_AS(stabilization_check(flat, 13, TraceStatistic::capital),
                    std::invalid_argument);
}

TEST_CASE("gains monotone in the threshold") {
  std::mt19937_64 rng(17);
  const auto spec = make_unit_bettor(Rational(5));
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<Bit> x;
    for (int i = 0; i < 40; ++i)
      x.push_back((rng() & 1) ? Bit::plus : Bit::minus);
    const auto t = evaluate(spec, x, x.size());
    const auto strong = gains_verdict(t, gains_cfg(Rational(9)));
    const auto weak = gains_verdict(t, gains_cfg(Rational(7)));
    if (strong.outcome == Outcome::achieved_at) {
      REQUIRE(weak.outcome == Outcome::achieved_at);
      REQUIRE(*weak.step <= *strong.step);
    }
  }
}

TEST_CASE("crossing count ignores refinements inside the band") {
  std::mt19937_64 rng(19);
  const Rational low(2), high(3);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<Rational> series;
    for (int i = 0; i < 30; ++i)
      series.push_back(ratio(static_cast<long>(rng() % 9), 2));  // 0..4 by halves
    std::vector<Rational> refined;
    for (const auto& v : series) {
      refined.push_back(v);
      refined.push_back(ratio(5, 2));
      refined.push_back(ratio(9, 4));
    }
    REQUIRE(band_crossings(series, low, high).size() ==
            band_crossings(refined, low, high).size());
  }
}

TEST_CASE("v-martingale band crossings move capital by at least the width") {
  std::mt19937_64 rng(41);
  // scripted v-wagers in {-2,-1,0,1,2}
  SupermartingaleSpec s;
  s.initial = Rational(10);
  auto seq = std::make_shared<std::vector<long>>();
  for (int i = 0; i < 200; ++i)
    seq->push_back(static_cast<long>(rng() % 5) - 2);
  s.wager = [seq](const History& h) {
    return Rational(h.size() < seq->size() ? (*seq)[h.size()] : 0);
  };
  s.marginal_consumption = [](const History&) { return Rational(0); };
  s.wager_set = WagerSet::v();
  s.label = "scripted-v";
  std::vector<Bit> x;
  for (int i = 0; i < 200; ++i) x.push_back((rng() & 1) ? Bit::plus : Bit::minus);
  const auto t = evaluate(s, x, x.size());

  std::vector<Rational> cover;
  for (std::size_t n = 0; n < t.rows.size(); ++n)
    cover.push_back(t.cover_capital(n));
  for (std::size_t n = 1; n < cover.size(); ++n) {
    const Rational d = abs(cover[n] - cover[n - 1]);
    REQUIRE((d.is_zero() || d >= Rational(1)));
  }
  const Rational low(9), high(10);
  const auto steps = band_crossings(cover, low, high);
  for (std::size_t i = 1; i < steps.size(); ++i)
    REQUIRE(abs(cover[steps[i]] - cover[steps[i - 1]]) >= high - low);
}

TEST_CASE("default band brackets the first-half midpoint") {
  const auto t = trace_of_capitals({Rational(2), Rational(3), Rational(2),
                                    Rational(3), Rational(2), Rational(3),
                                    Rational(2), Rational(3)});
  const auto [a, b] = default_band(t);
  REQUIRE(a < b);
  REQUIRE(a == ratio(9, 4));
  REQUIRE(b == ratio(11, 4));

  const auto flat = trace_of_capitals(std::vector<Rational>(6, Rational(5)));
  const auto [fa, fb] = default_band(flat);
  REQUIRE(fa == ratio(19, 4));
  REQUIRE(fb == ratio(21, 4));
}
