#pragma once

// Ising-model energy functions over +-1 spins:
//
//   H(s) = sum_i h_i s_i + sum_{i<j} J_ij s_i s_j
//
// Each unordered pair is counted once. With that convention the NOR block
// (h = 0.5, 0.5, 1; J12 = 0.5, J13 = J23 = 1) has its minimum at -1.5.
//
// Indices are 0-based. Qubit labels Q1, Q2, ... are 1-based, so Q1 is spin 0.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "qafactor/error.hpp"

namespace qaf {

using SpinIndex = std::size_t;
using SpinPair = std::pair<SpinIndex, SpinIndex>;
using CouplingMap = std::map<SpinPair, double>;

/// A vector of spins, each exactly -1 or +1. Bit 1 maps to +1, bit 0 to -1.
class SpinState {
 public:
  SpinState() = default;
  explicit SpinState(std::size_t n, std::int8_t fill = -1);
  explicit SpinState(std::vector<std::int8_t> spins);

  static SpinState from_bits(std::span<const std::uint8_t> bits);
  /// Bit k of `mask` becomes spin k.
  static SpinState from_mask(std::uint64_t mask, std::size_t n);

  std::vector<std::uint8_t> bits() const;
  std::uint64_t mask() const;

  std::size_t size() const { return spins_.size(); }
  std::int8_t operator[](std::size_t i) const { return spins_[i]; }
  void flip(std::size_t i) { spins_[i] = static_cast<std::int8_t>(-spins_[i]); }
  void set(std::size_t i, std::int8_t s);

  std::span<const std::int8_t> values() const { return spins_; }

  friend bool operator==(const SpinState&, const SpinState&) = default;
  friend auto operator<=>(const SpinState&, const SpinState&) = default;

 private:
  std::vector<std::int8_t> spins_;
};

inline std::int8_t bit_to_spin(std::uint8_t bit) { return bit ? 1 : -1; }
inline std::uint8_t spin_to_bit(std::int8_t s) { return s > 0 ? 1 : 0; }

SpinState bits_to_spins(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> spins_to_bits(const SpinState& state);

/// Spin index -> clamped bit. std::map keeps keys unique and ordered.
using ClampAssignment = std::map<SpinIndex, std::uint8_t>;

/// Immutable Ising model. Couplings are stored with i < j; (j, i) lookups
/// resolve to the same entry. Zero couplings are dropped on construction.
class IsingModel {
 public:
  IsingModel() = default;
  IsingModel(std::size_t n, std::vector<double> h, CouplingMap J);

  std::size_t size() const { return h_.size(); }
  double bias(SpinIndex i) const { return h_.at(i); }
  double coupling(SpinIndex i, SpinIndex j) const;
  std::span<const double> biases() const { return h_; }
  const CouplingMap& couplings() const { return J_; }

  /// CSR adjacency: neighbors of i are nbr[offset[i] .. offset[i+1]).
  struct Adjacency {
    std::vector<std::size_t> offset;
    std::vector<SpinIndex> nbr;
    std::vector<double> weight;
  };
  const Adjacency& adjacency() const { return adj_; }

  /// Same model with every coefficient multiplied by c.
  IsingModel scaled(double c) const;

  friend bool operator==(const IsingModel& a, const IsingModel& b) {
    return a.h_ == b.h_ && a.J_ == b.J_;
  }

 private:
  std::vector<double> h_;
  CouplingMap J_;
  Adjacency adj_;
};

/// Accumulates coefficients before freezing them into an IsingModel.
class IsingBuilder {
 public:
  explicit IsingBuilder(std::size_t n = 0) : h_(n, 0.0) {}

  SpinIndex add_spin(double h = 0.0);
  std::size_t size() const { return h_.size(); }

  void add_bias(SpinIndex i, double v);
  void add_coupling(SpinIndex i, SpinIndex j, double v);
  /// Append a whole model, re-indexed to start at the current size.
  /// Returns the offset of its spin 0.
  SpinIndex append(const IsingModel& block);

  IsingModel build() const;

 private:
  std::vector<double> h_;
  CouplingMap J_;
};

SpinPair canonical_pair(SpinIndex i, SpinIndex j);

double energy(const IsingModel& model, const SpinState& state);

struct FoldResult {
  IsingModel reduced;
  double offset = 0.0;
  std::vector<SpinIndex> free_to_full;  // reduced index -> original index
  ClampAssignment clamps;
  std::size_t full_size = 0;

  /// Merge a reduced-model state with the clamped bits.
  SpinState expand(const SpinState& reduced_state) const;
};

/// Fix the given spins and fold their contributions into the remaining model:
/// energy(reduced, free) + offset == energy(model, merged) for every free assignment.
FoldResult clamp_fold(const IsingModel& model, const ClampAssignment& clamps);

inline constexpr std::size_t kDefaultBruteForceCap = 26;
inline constexpr double kDegeneracyTol = 1e-9;

struct BruteForceOptions {
  std::size_t max_spins = kDefaultBruteForceCap;
  /// Ground states beyond this count are counted but not stored.
  std::size_t max_stored_ground = std::size_t{1} << 20;
};

struct GroundReport {
  double e0 = 0.0;
  /// First excited level minus e0; +inf when every state is degenerate.
  double gap = std::numeric_limits<double>::infinity();
  std::vector<SpinState> ground;  // sorted by mask
  std::uint64_t ground_count = 0;
  bool truncated = false;
};

/// Exhaustive ground-state search. Splits the 2^n range across OpenMP threads
/// and walks each chunk in Gray-code order with incremental energy updates.
GroundReport brute_force_ground(const IsingModel& model, const BruteForceOptions& opts = {});

/// Serial reference: plain loop calling energy() on every state.
GroundReport brute_force_ground_serial(const IsingModel& model,
                                       const BruteForceOptions& opts = {});

}  // namespace qaf
