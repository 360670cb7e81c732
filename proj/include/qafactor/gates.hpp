#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qafactor/ising.hpp"
#include "qafactor/model_io.hpp"

namespace qaf {

/// Legal assignments of a Boolean relation. Row bit k is variable k.
class TruthTable {
 public:
  TruthTable(std::size_t n_vars, std::vector<std::uint32_t> rows);

  /// Build from a predicate over bit-vectors (variable k = bit k).
  template <class Pred>
  static TruthTable from_predicate(std::size_t n_vars, Pred&& pred) {
    std::vector<std::uint32_t> rows;
    for (std::uint32_t m = 0; m < (std::uint32_t{1} << n_vars); ++m)
      if (pred(m)) rows.push_back(m);
    return TruthTable(n_vars, std::move(rows));
  }

  std::size_t n_vars() const { return n_; }
  const std::vector<std::uint32_t>& rows() const { return rows_; }  // sorted ascending
  bool contains(std::uint32_t m) const;

  friend bool operator==(const TruthTable&, const TruthTable&) = default;

 private:
  std::size_t n_;
  std::vector<std::uint32_t> rows_;
};

TruthTable nor_table();
TruthTable and_table();
/// 6 variables (a, b, c, d, carry, sum): 2*carry + sum == a*b + c + d.
TruthTable multiplier_unit_table();

struct GateTemplate {
  std::string name;
  IsingModel model;
  PortMap ports;
  TruthTable valid;
  double gap = 0.0;
};

GateTemplate nor_gate();
/// NOR with the signs of h1, h2, J13, J23 flipped.
GateTemplate and_gate();
/// 6-spin unit cell of the array multiplier, obtained from synthesize_penalty
/// on the complete graph with gap 1 and coefficient bound 2. Ports a, b, c
/// (partial-sum in), d (carry in), carry, sum. Computed once and cached.
const GateTemplate& multiplier_unit();

// ---------------------------------------------------------------------------
// Composition

enum class CouplingKind { Wire, Not };  // J = -strength, J = +strength

struct PortRef {
  std::size_t gate;
  std::string port;
};

struct InterGateCoupling {
  PortRef a;
  PortRef b;
  CouplingKind kind = CouplingKind::Wire;
  double strength = 1.0;
};

struct CircuitGraph {
  std::vector<GateTemplate> gates;
  std::vector<InterGateCoupling> couplings;
  std::vector<std::pair<std::string, PortRef>> exports;
};

struct ComposedCircuit {
  IsingModel model;
  PortMap ports;
  std::vector<std::size_t> gate_offset;  // global index of each gate's spin 0
};

ComposedCircuit compose(const CircuitGraph& graph);

/// Three NOR blocks: G1 = NOR(a, b); G2 = NOR(~a, ~b) = AND(a, b) via NOT
/// couplings on both inputs; G3 = NOR(G1, G2) = XOR(a, b). Four inter-gate
/// couplings. Spin k is qubit Q(k+1).
ComposedCircuit half_adder();

// ---------------------------------------------------------------------------
// Synthesis and verification

struct SynthesisOptions {
  /// Allowed coupling pairs; empty means the complete graph.
  std::vector<SpinPair> pairs;
  double gap = 1.0;
  double bound = 2.0;
  std::string name = "synthesized";
};

/// Find h, J (|.| <= bound) whose ground manifold is exactly the table and
/// whose invalid states sit at least `gap` above it. Maximizes the gap by LP,
/// then snaps to the coarsest dyadic grid that still verifies.
/// Throws Error(Synthesis) when the requested gap cannot be reached.
GateTemplate synthesize_penalty(const TruthTable& table, const SynthesisOptions& opts);

struct GateReport {
  bool pass = false;
  double e0 = 0.0;
  double achieved_gap = 0.0;
  /// Valid rows missing from the ground manifold, invalid ground rows, and
  /// invalid rows closer than the declared gap.
  std::vector<std::uint32_t> offending;
};

GateReport verify_gate(const GateTemplate& gate);

/// Ground manifold of `model` projected onto `vars` (bit k of each row is
/// spin vars[k]); sorted and deduplicated.
std::vector<std::uint32_t> ground_rows(const IsingModel& model, const std::vector<SpinIndex>& vars);

}  // namespace qaf
