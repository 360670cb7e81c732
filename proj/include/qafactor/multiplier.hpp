#pragma once

// Array multiplier built from 6-spin unit cells.
//
// Cell (i, j) sits in row j (bit j of B) and column i (bit i of A) and
// enforces 2*carry + sum = a_i*b_j + c + d, where
//   c = partial sum from row j-1 (sum of cell (i+1, j-1), or the row's final
//       carry for the last column), 0 on row 0;
//   d = ripple carry from cell (i-1, j), 0 on column 0.
// Product bits: P_j = sum(0, j) for j < n2, P_{n2-1+i} = sum(i, n2-1) for
// i >= 1, and the top bit is carry(n1-1, n2-1).
//
// Every cell has its own a and b spins; copies are chained by WIRE couplings
// down columns (a) and along rows (b). Factor roles live on row 0 (A) and
// column 0 (B).

#include <cstdint>
#include <optional>
#include <vector>

#include "qafactor/gates.hpp"
#include "qafactor/ising.hpp"
#include "qafactor/model_io.hpp"

namespace qaf {

enum class RoleKind : std::uint8_t { FactorA, FactorB, Product, Internal };

struct Role {
  RoleKind kind = RoleKind::Internal;
  std::size_t bit = 0;
  friend bool operator==(const Role&, const Role&) = default;
};

struct NetworkOptions {
  /// Insert one chain qubit into every inter-cell wire.
  bool interconnect_chains = false;
  /// |J| of every inter-cell WIRE coupling.
  double chain_strength = 1.0;
};

struct CellSpins {
  SpinIndex a, b, c, d, carry, sum;
};

struct Wire {
  SpinIndex from, to;
};

struct MultiplierNetwork {
  std::size_t n1 = 0, n2 = 0;
  NetworkOptions options;
  std::vector<CellSpins> cells;  // index j * n1 + i
  std::vector<Wire> wires;       // logical inter-cell wires (before chain insertion)
  std::size_t chain_qubits = 0;
  std::size_t coupler_count = 0;  // inter-cell couplings actually emitted
  IsingModel model;               // every spin, boundary inputs not yet folded
  std::vector<Role> roles;        // per spin
  ClampAssignment boundary_zero;  // cell inputs with no driver
  double cell_e0 = 0.0;
  double expected_e0 = 0.0;

  const CellSpins& cell(std::size_t i, std::size_t j) const { return cells.at(j * n1 + i); }
  std::size_t product_bits() const { return n1 + n2; }
  SpinIndex factor_a_spin(std::size_t k) const;
  SpinIndex factor_b_spin(std::size_t k) const;
  SpinIndex product_spin(std::size_t k) const;

  std::vector<RoleEntry> role_entries() const;
};

MultiplierNetwork build_multiplier(std::size_t n1, std::size_t n2, const NetworkOptions& options = {});

/// Sum of cell ground energies minus |J| for each inter-cell coupler. Boundary
/// zero clamps do not shift it because every cell's ground manifold contains
/// c = d = 0 for all inputs.
double expected_ground_energy(const MultiplierNetwork& net);

/// A folded network problem ready for annealing: reduced model, offset, and a
/// reference ground energy in reduced coordinates.
struct ClampedProblem {
  FoldResult fold;
  IsingModel model;  // equals fold.reduced unless product bias was applied
  double reference_e0 = 0.0;

  SpinState expand(const SpinState& reduced) const { return fold.expand(reduced); }
};

/// Only the boundary zeros folded in; every role spin free.
ClampedProblem free_problem(const MultiplierNetwork& net);

ClampedProblem clamp_factors(const MultiplierNetwork& net, std::uint64_t m, std::uint64_t n);

enum class ProductClamp { Fold, Bias };
inline constexpr double kDefaultProductBias = 1.1;

/// FOLD removes product spins exactly; BIAS adds -+strength to their h and
/// leaves them free. For BIAS the reference energy assumes some M*N == P exists.
ClampedProblem clamp_product(const MultiplierNetwork& net, std::uint64_t p, ProductClamp method = ProductClamp::Fold,
                             double bias_strength = kDefaultProductBias);

struct FactorOutcome {
  std::uint64_t m = 0, n = 0, p = 0;
  double energy = 0.0;
  bool is_ground = false;
};

/// Read M, N, P from a full-size state (LSB = bit 0). Energy is of the full,
/// unbiased network model.
FactorOutcome decode(const MultiplierNetwork& net, const SpinState& full_state);

/// Role entries re-indexed into a folded model; entries on clamped spins are
/// dropped.
std::vector<RoleEntry> reindex_roles(const std::vector<RoleEntry>& roles, const FoldResult& fold);

/// M, N, P read through role entries (energy and is_ground left unset).
FactorOutcome decode_roles(const std::vector<RoleEntry>& roles, const SpinState& state);

}  // namespace qaf
