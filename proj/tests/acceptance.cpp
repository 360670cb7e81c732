// End-to-end acceptance checks. Prints one [PASS]/[FAIL] line per criterion
// and exits non-zero if any criterion fails.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "qafactor/annealer.hpp"
#include "qafactor/capacity.hpp"
#include "qafactor/flux_sim.hpp"
#include "qafactor/gates.hpp"
#include "qafactor/multiplier.hpp"

using namespace qaf;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) {
    o.pass = false;
    o.detail += "; over time budget";
  }
  if (!o.pass) ++failures;
  std::printf("[%s] C%d %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", id, title, secs, o.detail.c_str());
  std::fflush(stdout);
}

std::vector<std::uint32_t> masks(const GroundReport& g) {
  std::vector<std::uint32_t> out;
  for (const auto& s : g.ground) out.push_back(static_cast<std::uint32_t>(s.mask()));
  return out;
}

// ---- criterion 5 ----------------------------------------------------------

constexpr std::uint64_t kFactorSeed = 2024;

RunSummary factor15(int threads) {
  const MultiplierNetwork net = build_multiplier(4, 4);
  const ClampedProblem p = clamp_product(net, 15);
  RunOptions o;
  o.shots = 200;
  o.master_seed = kFactorSeed;
  o.reference_e0 = p.reference_e0;
  o.threads = threads;
  o.key = [&](const SpinState& s) {
    const FactorOutcome f = decode(net, p.expand(s));
    return std::to_string(f.m) + "," + std::to_string(f.n);
  };
  return run_shots(p.model, Schedule{}, o);
}

// ---- criterion 7 ----------------------------------------------------------

constexpr std::uint64_t kCircuitSeed = 7;

flux::EnsembleResult inverse_nor(std::uint8_t clamp, int threads) {
  const flux::NetworkLayout layout = flux::logical_to_physical(flux::inverse_nor_model(clamp));
  return flux::run_ensemble(layout, flux::NoiseSpec{}, flux::RampSpec{}, 200, kCircuitSeed, threads);
}

std::string pair_counts(const flux::EnsembleResult& e) {
  std::map<std::string, int> c;
  for (const auto& b : e.bits) ++c[std::string{char('0' + b[0]), char('0' + b[1])}];
  std::ostringstream os;
  for (const auto& [k, n] : c) os << k << ':' << n << ' ';
  return os.str();
}

}  // namespace

int main() {
  report(1, "NOR/AND gate exactness", 1.0, [] {
    const GroundReport nor = brute_force_ground(nor_gate().model);
    const GroundReport land = brute_force_ground(and_gate().model);
    const bool ok = nor.e0 == -1.5 && nor.gap == 2.0 && masks(nor) == nor_table().rows() &&
                    masks(land) == and_table().rows() && land.gap == 2.0;
    std::ostringstream d;
    d << "NOR e0 " << nor.e0 << " gap " << nor.gap << " ground " << nor.ground_count << "; AND gap " << land.gap
      << " ground " << land.ground_count;
    return Outcome{ok, d.str()};
  });

  report(2, "half adder", 1.0, [] {
    const ComposedCircuit ha = half_adder();
    const GroundReport g = brute_force_ground(ha.model);
    bool logic = g.ground_count == 4;
    std::set<std::pair<int, int>> inputs;
    for (const auto& s : g.ground) {
      const int a = s[ha.ports.at("a")] > 0, b = s[ha.ports.at("b")] > 0;
      logic = logic && (s[ha.ports.at("sum")] > 0) == (a != b) && (s[ha.ports.at("carry")] > 0) == (a && b);
      inputs.insert({a, b});
    }
    const bool ok = ha.model.size() == 9 && g.e0 == -8.5 && logic && inputs.size() == 4;
    std::ostringstream d;
    d << "spins " << ha.model.size() << " e0 " << g.e0 << " ground " << g.ground_count;
    return Outcome{ok, d.str()};
  });

  report(3, "multiplier unit synthesis", 10.0, [] {
    SynthesisOptions opts;
    opts.gap = 1.0;
    opts.bound = 2.0;
    const GateTemplate u = synthesize_penalty(multiplier_unit_table(), opts);
    const GroundReport g = brute_force_ground(u.model);
    bool relation = true;
    for (const auto& s : g.ground) {
      const auto b = s.bits();
      relation = relation && 2 * b[4] + b[5] == b[0] * b[1] + b[2] + b[3];
    }
    const bool ok = u.model.size() == 6 && g.ground_count == 16 && relation && g.gap >= 1.0 - 1e-9;
    std::ostringstream d;
    d << "ground " << g.ground_count << " gap " << g.gap << " e0 " << g.e0;
    return Outcome{ok, d.str()};
  });

  report(4, "forward 2x2 multiplication", 60.0, [] {
    const MultiplierNetwork net = build_multiplier(2, 2);
    int good = 0;
    for (std::uint64_t m = 0; m < 4; ++m)
      for (std::uint64_t n = 0; n < 4; ++n) {
        const ClampedProblem p = clamp_factors(net, m, n);
        const GroundReport g = brute_force_ground(p.model);
        if (g.ground_count == 1 && decode(net, p.expand(g.ground[0])).p == m * n) ++good;
      }
    return Outcome{good == 16, std::to_string(good) + "/16 pairs decode to M*N uniquely"};
  });

  report(5, "inverse factoring of 15 on 4x4", 120.0, [] {
    const RunSummary r = factor15(0);
    const std::set<std::string> allowed{"1,15", "15,1", "3,5", "5,3"};
    std::size_t bad = 0;
    std::map<std::string, int> hits;
    const MultiplierNetwork net = build_multiplier(4, 4);
    const ClampedProblem p = clamp_product(net, 15);
    for (const auto& s : r.results) {
      if (!r.is_ground(s)) continue;
      const FactorOutcome f = decode(net, p.expand(s.state));
      const std::string key = std::to_string(f.m) + "," + std::to_string(f.n);
      ++hits[key];
      bad += !allowed.count(key);
    }
    std::ostringstream d;
    d << "ground hits " << r.ground_hits << "/200 (rate " << r.ground_rate() << "), off-set " << bad << ";";
    for (const auto& [k, n] : hits) d << ' ' << k << ':' << n;
    return Outcome{r.ground_hits > 0 && bad == 0, d.str()};
  });

  report(6, "Johnson noise amplitude", 1.0, [] {
    const double s = flux::johnson_sigma(3.2e3, 1.0, 1e12);
    const double rel = std::abs(s - 0.13e-6) / 0.13e-6;
    std::ostringstream d;
    d << "sigma " << s * 1e6 << " uA, deviation " << rel * 100 << "%";
    return Outcome{rel < 0.02, d.str()};
  });

  report(7, "circuit-level inverse NOR", 600.0, [] {
    const flux::EnsembleResult c0 = inverse_nor(0, 0);
    const flux::EnsembleResult c1 = inverse_nor(1, 0);
    std::size_t invalid0 = 0, clamp0_miss = 0;
    std::set<std::string> seen0;
    for (const auto& b : c0.bits) {
      invalid0 += !(b[0] || b[1]);
      clamp0_miss += b[2] != 0;
      seen0.insert(std::string{char('0' + b[0]), char('0' + b[1])});
    }
    std::size_t not_low1 = 0;
    for (const auto& b : c1.bits) not_low1 += b[0] || b[1];
    const bool ok = invalid0 == 0 && seen0.count("01") && seen0.count("10") && seen0.count("11") && not_low1 == 0;
    std::ostringstream d;
    d << "clamp0 (s1,s2) bits " << pair_counts(c0) << "invalid " << invalid0 << " Q3!=0 " << clamp0_miss
      << "; clamp1 " << pair_counts(c1) << "not (-1,-1) " << not_low1;
    return Outcome{ok, d.str()};
  });

  report(8, "bistability structure", 1.0, [] {
    const flux::NetworkLayout l = flux::logical_to_physical(IsingModel(1, {0.0}, {}));
    const auto open = flux::static_potential(l, 0, flux::kPhi0 / 2.0, 0.0);
    const auto closed = flux::static_potential(l, 0, 0.0, 0.0);
    std::ostringstream d;
    d << "equilibria at Phi0/2: " << open.equilibria << ", at 0: " << closed.equilibria;
    if (closed.equilibria == 2)
      d << " (I_q " << closed.minima_iq[0] * 1e6 << ", " << closed.minima_iq[1] * 1e6 << " uA)";
    return Outcome{open.equilibria == 1 && closed.equilibria == 2, d.str()};
  });

  report(9, "capacity arithmetic", 1.0, [] {
    const CapacityResult r = estimate_capacity({});
    std::ostringstream d;
    d << r.units_per_side << "x" << r.units_per_side << " units per chip, " << r.total_units << " units, "
      << r.max_bits << " bits";
    return Outcome{r.units_per_side == 35 && r.units_per_chip == 1225 && r.total_units == 122500 && r.max_bits == 350,
                   d.str()};
  });

  report(10, "determinism across thread counts", 1200.0, [] {
    const int n = std::max(4, omp_get_max_threads());
    const bool f = factor15(1).to_text() == factor15(n).to_text();
    const bool c = inverse_nor(0, 1).to_text() == inverse_nor(0, n).to_text() &&
                   inverse_nor(1, 1).to_text() == inverse_nor(1, n).to_text();
    std::ostringstream d;
    d << "1 vs " << n << " threads: factoring " << (f ? "identical" : "DIFFERENT") << ", circuit "
      << (c ? "identical" : "DIFFERENT");
    return Outcome{f && c, d.str()};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
