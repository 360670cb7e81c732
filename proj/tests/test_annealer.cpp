#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "qafactor/annealer.hpp"
#include "qafactor/gates.hpp"
#include "qafactor/multiplier.hpp"
#include "qafactor/rng.hpp"
#include "support.hpp"

using namespace qaf;

namespace {

// Fraction of accepted moves over many draws, for an acceptance-rate check.
double acceptance_rate(double dE, double T, std::size_t draws, std::uint64_t seed) {
  ShotRng rng(seed);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < draws; ++k) hits += metropolis_accept(dE, T, uniform01(rng));
  return static_cast<double>(hits) / static_cast<double>(draws);
}

}  // namespace

TEST_CASE("metropolis acceptance probabilities") {
  struct Case {
    double dE, T, p;
  };
  for (const Case c : {Case{1.0, 1.0, 0.367879}, Case{2.0, 0.5, 0.0183156}, Case{0.3, 3.0, 0.904837}}) {
    CHECK(std::exp(-c.dE / c.T) == doctest::Approx(c.p).epsilon(1e-5));
    // Binomial standard error for 4e5 draws is below 1e-3.
    CHECK(std::abs(acceptance_rate(c.dE, c.T, 400000, 99) - c.p) < 4e-3);
  }
  for (double u : {0.0, 0.5, 0.999999}) {
    CHECK(metropolis_accept(0.0, 1.0, u));
    CHECK(metropolis_accept(-3.0, 0.01, u));
  }
  CHECK_FALSE(metropolis_accept(1.0, 1.0, 0.5));
  CHECK(metropolis_accept(1.0, 1.0, 0.3));
}

TEST_CASE("schedule endpoints and validation") {
  Schedule s;
  CHECK(s.temperature(0) == 3.0);
  CHECK(s.temperature(s.sweeps - 1) == doctest::Approx(0.05));
  for (std::size_t k = 1; k < s.sweeps; ++k) CHECK(s.temperature(k) < s.temperature(k - 1));
  Schedule lin;
  lin.kind = ScheduleKind::Linear;
  lin.sweeps = 5;
  lin.t_hot = 2.0;
  lin.t_cold = 1.0;
  CHECK(lin.temperature(2) == doctest::Approx(1.5));
  CHECK(lin.temperature(4) == doctest::Approx(1.0));
  Schedule one;
  one.sweeps = 1;
  CHECK(one.temperature(0) == one.t_cold);

  Schedule bad;
  bad.t_cold = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = Schedule{};
  bad.t_hot = 0.01;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = Schedule{};
  bad.sweeps = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK(parse_schedule_kind("linear") == ScheduleKind::Linear);
  CHECK(parse_schedule_kind(to_string(ScheduleKind::Geometric)) == ScheduleKind::Geometric);
  CHECK_THROWS_AS(parse_schedule_kind("cosine"), Error);
}

TEST_CASE("single spin relaxes against its bias") {
  const IsingModel m(1, {1.0}, {});
  Schedule s;
  s.sweeps = 1;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const ShotResult r = anneal_shot(m, s, seed);
    CHECK(r.state[0] == -1);
    CHECK(r.energy == -1.0);
  }
}

TEST_CASE("NOR block anneals into its ground manifold") {
  const GateTemplate g = nor_gate();
  RunOptions o;
  o.shots = 100;
  o.master_seed = 5;
  o.reference_e0 = -1.5;
  const RunSummary r = run_shots(g.model, Schedule{}, o);
  CHECK(r.ground_hits == 100);
  for (const auto& [key, n] : r.histogram) {
    const std::uint32_t mask = (key[0] == '1') | ((key[1] == '1') << 1) | ((key[2] == '1') << 2);
    CHECK(nor_table().contains(mask));
  }
  CHECK(r.histogram.size() == 4);
}

TEST_CASE("NOR with the output clamped high forces both inputs low") {
  const FoldResult f = clamp_fold(nor_gate().model, {{2, 1}});
  RunOptions o;
  o.shots = 50;
  o.reference_e0 = brute_force_ground(f.reduced).e0;
  const RunSummary r = run_shots(f.reduced, Schedule{}, o);
  CHECK(r.ground_hits == 50);
  CHECK(r.histogram.size() == 1);
  CHECK(r.histogram.count("00") == 1);
}

TEST_CASE("logical inverse NOR with the output clamped low") {
  const FoldResult f = clamp_fold(nor_gate().model, {{2, 0}});
  RunOptions o;
  o.shots = 300;
  o.master_seed = 11;
  const RunSummary r = run_shots(f.reduced, Schedule{}, o);
  CHECK(r.histogram.count("00") == 0);
  for (const char* k : {"01", "10", "11"}) CHECK(r.histogram.count(k) == 1);
}

TEST_CASE("results do not depend on the thread count") {
  const IsingModel m = test::random_model(20, 77);
  RunOptions o;
  o.shots = 64;
  o.master_seed = 1234;
  o.reference_e0 = brute_force_ground(m).e0;
  Schedule s;
  s.sweeps = 200;
  const std::string serial = run_shots_serial(m, s, o).to_text();
  for (int t : {1, 2, 4, 0}) {
    o.threads = t;
    const RunSummary r = run_shots(m, s, o);
    CHECK(r.to_text() == serial);
  }
  const RunSummary r = run_shots(m, s, o);
  for (std::size_t k = 0; k < r.results.size(); ++k) {
    CHECK(r.results[k].shot == k);
    CHECK(r.results[k].seed == derive_seed(1234, k));
  }
}

TEST_CASE("no shot falls below the exact ground energy") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const IsingModel m = test::random_model(14, seed + 100);
    const double e0 = brute_force_ground(m).e0;
    RunOptions o;
    o.shots = 40;
    o.master_seed = seed;
    Schedule s;
    s.sweeps = 100;
    const RunSummary r = run_shots(m, s, o);
    CHECK(r.best_energy >= e0 - 1e-9);
    for (const auto& shot : r.results) CHECK(shot.energy == doctest::Approx(energy(m, shot.state)).epsilon(1e-12));
  }
}

TEST_CASE("longer schedules do not lower the hit rate") {
  const MultiplierNetwork net = build_multiplier(3, 3);
  const ClampedProblem p = clamp_product(net, 35);
  RunOptions o;
  o.shots = 200;
  o.master_seed = 3;
  o.reference_e0 = p.reference_e0;
  double last = -1.0;
  for (std::size_t sweeps : {1, 20, 2000}) {
    Schedule s;
    s.sweeps = sweeps;
    const double rate = run_shots(p.model, s, o).ground_rate();
    CHECK(rate >= last);
    last = rate;
  }
  CHECK(last > 0.5);
}

TEST_CASE("4x4 inverse multiplier finds only factorizations of 15") {
  const MultiplierNetwork net = build_multiplier(4, 4);
  const ClampedProblem p = clamp_product(net, 15);
  CHECK(p.model.size() == 80);
  RunOptions o;
  o.shots = 200;
  o.master_seed = 2024;
  o.reference_e0 = p.reference_e0;
  const RunSummary r = run_shots(p.model, Schedule{}, o);
  const std::set<std::pair<std::uint64_t, std::uint64_t>> allowed{{1, 15}, {15, 1}, {3, 5}, {5, 3}};
  std::size_t hits = 0;
  for (const auto& shot : r.results) {
    if (!r.is_ground(shot)) continue;
    ++hits;
    const FactorOutcome f = decode(net, p.expand(shot.state));
    CHECK(allowed.count({f.m, f.n}) == 1);
    CHECK(f.p == 15);
  }
  CHECK(hits == r.ground_hits);
  CHECK(hits > 0);
}

TEST_CASE("table and csv formatting") {
  RunSummary s;
  s.shots = 3;
  s.reference_e0 = -1.0;
  s.histogram = {{"01", 2}, {"10", 1}};
  s.results = {{SpinState(std::vector<std::int8_t>{-1, 1}), -1.0, 0, 9}, {SpinState(std::vector<std::int8_t>{1, -1}), 0.5, 1, 10}};
  CHECK(summarize_table(s) == "outcome  count\n01           2\n10           1\n");
  CHECK(summarize_table("x", {{"a", {{"k", 1}}}, {"bb", {{"j", 12}}}}, {"j"}) == "x  a  bb\nj  0  12\nk  1   0\n");
  CHECK(summarize_table("x", {{"a", {}}}) == "x  a\n");
  std::ostringstream os;
  write_shot_csv(os, s, "tag", [](const ShotResult& r) { return std::to_string(r.seed); });
  CHECK(os.str() == "shot,energy,ground_hit,state_bits,tag\n0,-1,1,01,9\n1,0.5,0,10,10\n");
  CHECK(bit_string(SpinState(std::vector<std::int8_t>{1, -1, -1})) == "100");
}
