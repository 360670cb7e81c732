#include "qafactor/gates.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qafactor/simplex.hpp"

namespace qaf {

// ---------------------------------------------------------------------------
// Truth tables

TruthTable::TruthTable(std::size_t n_vars, std::vector<std::uint32_t> rows) : n_(n_vars), rows_(std::move(rows)) {
  if (n_ == 0 || n_ > 20) throw Error(ErrorKind::Range, "truth table arity must be in 1..20");
  if (rows_.empty()) throw Error(ErrorKind::Range, "truth table must have at least one valid row");
  for (auto r : rows_)
    if (r >> n_) throw Error(ErrorKind::Range, "truth table row has wrong arity");
  std::sort(rows_.begin(), rows_.end());
  if (std::adjacent_find(rows_.begin(), rows_.end()) != rows_.end())
    throw Error(ErrorKind::Range, "truth table rows must be distinct");
}

bool TruthTable::contains(std::uint32_t m) const { return std::binary_search(rows_.begin(), rows_.end(), m); }

namespace {
constexpr std::uint32_t bit(std::uint32_t m, int k) { return (m >> k) & 1U; }
}  // namespace

TruthTable nor_table() {
  return TruthTable::from_predicate(3, [](std::uint32_t m) { return bit(m, 2) == !(bit(m, 0) | bit(m, 1)); });
}

TruthTable and_table() {
  return TruthTable::from_predicate(3, [](std::uint32_t m) { return bit(m, 2) == (bit(m, 0) & bit(m, 1)); });
}

TruthTable multiplier_unit_table() {
  return TruthTable::from_predicate(6, [](std::uint32_t m) {
    return 2 * bit(m, 4) + bit(m, 5) == bit(m, 0) * bit(m, 1) + bit(m, 2) + bit(m, 3);
  });
}

// ---------------------------------------------------------------------------
// Gate library

GateTemplate nor_gate() {
  IsingBuilder b(3);
  b.add_bias(0, 0.5);
  b.add_bias(1, 0.5);
  b.add_bias(2, 1.0);
  b.add_coupling(0, 1, 0.5);
  b.add_coupling(0, 2, 1.0);
  b.add_coupling(1, 2, 1.0);
  return {"nor", b.build(), {{"in_a", 0}, {"in_b", 1}, {"out", 2}}, nor_table(), 2.0};
}

GateTemplate and_gate() {
  IsingBuilder b(3);
  b.add_bias(0, -0.5);
  b.add_bias(1, -0.5);
  b.add_bias(2, 1.0);
  b.add_coupling(0, 1, 0.5);
  b.add_coupling(0, 2, -1.0);
  b.add_coupling(1, 2, -1.0);
  return {"and", b.build(), {{"in_a", 0}, {"in_b", 1}, {"out", 2}}, and_table(), 2.0};
}

const GateTemplate& multiplier_unit() {
  static const GateTemplate unit = [] {
    SynthesisOptions opts;
    opts.gap = 1.0;
    opts.bound = 2.0;
    opts.name = "mult-unit";
    GateTemplate t = synthesize_penalty(multiplier_unit_table(), opts);
    t.ports = {{"a", 0}, {"b", 1}, {"c", 2}, {"d", 3}, {"carry", 4}, {"sum", 5}};
    return t;
  }();
  return unit;
}

// ---------------------------------------------------------------------------
// Composition

ComposedCircuit compose(const CircuitGraph& graph) {
  ComposedCircuit out;
  IsingBuilder builder;
  for (const auto& g : graph.gates) out.gate_offset.push_back(builder.append(g.model));

  auto resolve = [&](const PortRef& ref) -> SpinIndex {
    if (ref.gate >= graph.gates.size())
      throw Error(ErrorKind::Composition, "dangling port reference: no gate " + std::to_string(ref.gate));
    const auto& ports = graph.gates[ref.gate].ports;
    auto it = ports.find(ref.port);
    if (it == ports.end())
      throw Error(ErrorKind::Composition, "dangling port reference: gate " + std::to_string(ref.gate) +
                                              " has no port '" + ref.port + "'");
    return out.gate_offset[ref.gate] + it->second;
  };

  std::set<SpinPair> used;
  for (const auto& c : graph.couplings) {
    if (c.a.gate == c.b.gate)
      throw Error(ErrorKind::Composition, "inter-gate coupling endpoints must be in distinct gates");
    const SpinIndex i = resolve(c.a), j = resolve(c.b);
    if (!used.insert(canonical_pair(i, j)).second)
      throw Error(ErrorKind::Composition, "duplicate coupling on spins " + std::to_string(i) + "," +
                                              std::to_string(j));
    builder.add_coupling(i, j, c.kind == CouplingKind::Wire ? -c.strength : c.strength);
  }
  for (const auto& [name, ref] : graph.exports) {
    if (!out.ports.emplace(name, resolve(ref)).second)
      throw Error(ErrorKind::Composition, "duplicate export '" + name + "'");
  }
  out.model = builder.build();
  return out;
}

ComposedCircuit half_adder() {
  CircuitGraph g;
  g.gates = {nor_gate(), nor_gate(), nor_gate()};
  g.couplings = {
      {{0, "in_a"}, {1, "in_a"}, CouplingKind::Not},  // Q1-Q4, J = +1
      {{0, "in_b"}, {1, "in_b"}, CouplingKind::Not},  // Q2-Q5, J = +1
      {{1, "out"}, {2, "in_a"}, CouplingKind::Wire},  // Q6-Q7, J = -1
      {{0, "out"}, {2, "in_b"}, CouplingKind::Wire},  // Q3-Q8, J = -1
  };
  g.exports = {{"a", {0, "in_a"}}, {"b", {0, "in_b"}}, {"carry", {1, "out"}}, {"sum", {2, "out"}}};
  return compose(g);
}

// ---------------------------------------------------------------------------
// Verification

namespace {

double mask_energy(const IsingModel& m, std::uint32_t mask) {
  return energy(m, SpinState::from_mask(mask, m.size()));
}

}  // namespace

GateReport verify_gate(const GateTemplate& gate) {
  const std::size_t n = gate.model.size();
  if (n != gate.valid.n_vars())
    throw Error(ErrorKind::Dimension, "gate model and truth table disagree on arity");
  if (n > kDefaultBruteForceCap) throw Error(ErrorKind::Size, "gate too large to verify exhaustively");

  const std::uint32_t total = std::uint32_t{1} << n;
  std::vector<double> e(total);
  for (std::uint32_t m = 0; m < total; ++m) e[m] = mask_energy(gate.model, m);

  GateReport r;
  r.e0 = *std::min_element(e.begin(), e.end());
  double min_invalid = std::numeric_limits<double>::infinity();
  for (std::uint32_t m = 0; m < total; ++m) {
    const bool ground = e[m] <= r.e0 + kDegeneracyTol;
    const bool valid = gate.valid.contains(m);
    if (valid != ground) r.offending.push_back(m);
    if (!valid) min_invalid = std::min(min_invalid, e[m]);
  }
  r.achieved_gap = min_invalid - r.e0;
  if (r.achieved_gap < gate.gap - kDegeneracyTol) {
    for (std::uint32_t m = 0; m < total; ++m)
      if (!gate.valid.contains(m) && e[m] > r.e0 + kDegeneracyTol && e[m] < r.e0 + gate.gap - kDegeneracyTol)
        r.offending.push_back(m);
    std::sort(r.offending.begin(), r.offending.end());
  }
  r.pass = r.offending.empty();
  return r;
}

std::vector<std::uint32_t> ground_rows(const IsingModel& model, const std::vector<SpinIndex>& vars) {
  const auto report = brute_force_ground(model);
  std::vector<std::uint32_t> rows;
  for (const auto& s : report.ground) {
    std::uint32_t m = 0;
    for (std::size_t k = 0; k < vars.size(); ++k)
      if (s[vars[k]] > 0) m |= std::uint32_t{1} << k;
    rows.push_back(m);
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

// ---------------------------------------------------------------------------
// Penalty synthesis

GateTemplate synthesize_penalty(const TruthTable& table, const SynthesisOptions& opts) {
  const std::size_t n = table.n_vars();
  if (n > 10) throw Error(ErrorKind::Size, "penalty synthesis supports at most 10 variables");
  if (!(opts.gap > 0.0)) throw Error(ErrorKind::Range, "synthesis gap must be positive");
  if (opts.bound < opts.gap / 2) throw Error(ErrorKind::Range, "coefficient bound must be at least gap/2");

  std::vector<SpinPair> pairs = opts.pairs;
  if (pairs.empty()) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  for (auto& p : pairs) {
    p = canonical_pair(p.first, p.second);
    if (p.second >= n) throw Error(ErrorKind::Range, "coupling pair outside the table's variables");
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  // Variables: h[0..n), J[pairs], E0, gap.
  const std::size_t np = pairs.size();
  const std::size_t iE0 = n + np, iGap = n + np + 1, nv = n + np + 2;
  lp::Problem prob;
  prob.objective.assign(nv, 0.0);
  prob.objective[iGap] = 1.0;
  prob.lower.assign(nv, -opts.bound);
  prob.upper.assign(nv, opts.bound);
  prob.lower[iE0] = -lp::kInf;
  prob.upper[iE0] = lp::kInf;
  prob.lower[iGap] = 0.0;
  prob.upper[iGap] = 2.0 * opts.bound * static_cast<double>(n + np);

  const std::uint32_t total = std::uint32_t{1} << n;
  for (std::uint32_t m = 0; m < total; ++m) {
    lp::Row row;
    row.coef.assign(nv, 0.0);
    for (std::size_t i = 0; i < n; ++i) row.coef[i] = ((m >> i) & 1U) ? 1.0 : -1.0;
    for (std::size_t k = 0; k < np; ++k) row.coef[n + k] = row.coef[pairs[k].first] * row.coef[pairs[k].second];
    row.coef[iE0] = -1.0;
    if (table.contains(m)) {
      row.sense = lp::Sense::Equal;
    } else {
      row.coef[iGap] = -1.0;
      row.sense = lp::Sense::GreaterEq;
    }
    prob.rows.push_back(std::move(row));
  }

  const lp::Solution sol = lp::solve(prob);
  if (sol.status != lp::Status::Optimal)
    throw Error(ErrorKind::Synthesis, "penalty LP did not reach an optimum");

  auto make = [&](auto&& coef) {
    IsingBuilder b(n);
    for (std::size_t i = 0; i < n; ++i) b.add_bias(i, coef(i));
    for (std::size_t k = 0; k < np; ++k) {
      const double v = coef(n + k);
      if (v != 0.0) b.add_coupling(pairs[k].first, pairs[k].second, v);
    }
    return GateTemplate{opts.name, b.build(), {}, table, opts.gap};
  };
  const double best_gap = sol.x[iGap];
  if (best_gap < opts.gap - kDegeneracyTol) {
    const GateTemplate raw = make([&](std::size_t k) { return sol.x[k]; });
    std::size_t violated = 0, invalid = 0;
    const double e0 = sol.x[iE0];
    for (std::uint32_t m = 0; m < total; ++m) {
      if (table.contains(m)) continue;
      ++invalid;
      if (mask_energy(raw.model, m) < e0 + opts.gap - kDegeneracyTol) ++violated;
    }
    throw Error(ErrorKind::Synthesis,
                "penalty model infeasible on the given coupling graph: best gap " + std::to_string(best_gap) +
                    " < requested " + std::to_string(opts.gap) + "; " + std::to_string(violated) + " of " +
                    std::to_string(invalid) + " invalid-state constraints violated");
  }

  auto finalize = [&](GateTemplate t) {
    for (std::size_t i = 0; i < n; ++i) t.ports.emplace("v" + std::to_string(i), i);
    return t;
  };
  for (double grid = 4.0; grid <= 1024.0; grid *= 2.0) {
    GateTemplate t = make([&](std::size_t k) {
      const double v = std::round(sol.x[k] * grid) / grid;
      return v == 0.0 ? 0.0 : v;  // no negative zero
    });
    if (verify_gate(t).pass) return finalize(std::move(t));
  }
  return finalize(make([&](std::size_t k) { return sol.x[k]; }));
}

}  // namespace qaf
