#pragma once

// Chip-capacity arithmetic for tiling multiplier unit cells.
//
// Units per side = floor((chip edge - 2 * margin) / unit dimension), taken
// separately for width and height; a chip holds min(side_w, side_h)^2 units.
// An m x m multiplier array needs m^2 units, so the largest array over all
// chips has floor(sqrt(chips * units per chip)) bits per side.

#include <cstdint>
#include <string>

namespace qaf {

struct CapacityInput {
  double unit_width_um = 515.0;
  double unit_height_um = 530.0;
  double chip_edge_mm = 19.0;
  double margin_um = 200.0;  // per edge
  std::uint64_t chips = 100;
  std::uint64_t qubits_per_unit = 12;  // 6 functional + 6 interconnect

  void validate() const;
};

struct CapacityResult {
  std::uint64_t side_w = 0;
  std::uint64_t side_h = 0;
  std::uint64_t units_per_side = 0;
  std::uint64_t units_per_chip = 0;
  std::uint64_t total_units = 0;
  std::uint64_t max_bits = 0;
  std::uint64_t total_qubits = 0;

  std::string to_text() const;
};

/// Throws Error(Range) for non-positive dimensions or a margin that leaves no
/// usable area. A unit larger than the usable area yields zero units.
CapacityResult estimate_capacity(const CapacityInput& in);

/// floor(sqrt(v)) computed exactly in integers.
std::uint64_t isqrt(std::uint64_t v);

}  // namespace qaf
