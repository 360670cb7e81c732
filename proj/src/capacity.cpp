#include "qafactor/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qafactor/error.hpp"
#include "qafactor/model_io.hpp"

namespace qaf {

void CapacityInput::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error(ErrorKind::Range, std::string(what) + " must be positive (got " + format_double(v) + ")");
  };
  positive(unit_width_um, "unit width");
  positive(unit_height_um, "unit height");
  positive(chip_edge_mm, "chip edge");
  if (!(margin_um >= 0.0) || !std::isfinite(margin_um)) throw Error(ErrorKind::Range, "margin must be >= 0");
  if (chips < 1) throw Error(ErrorKind::Range, "need at least one chip");
  if (chip_edge_mm * 1000.0 - 2.0 * margin_um <= 0.0)
    throw Error(ErrorKind::Range, "margins of " + format_double(margin_um) + " um leave no usable area on a " +
                                      format_double(chip_edge_mm) + " mm chip");
}

std::uint64_t isqrt(std::uint64_t v) {
  // Start from the floating-point estimate, capped so r * r cannot overflow,
  // then correct by comparing through division.
  auto r = std::min<std::uint64_t>(static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v))), 0xFFFFFFFFULL);
  while (r > 0 && r > v / r) --r;
  while (r < 0xFFFFFFFFULL && (r + 1) <= v / (r + 1)) ++r;
  return r;
}

CapacityResult estimate_capacity(const CapacityInput& in) {
  in.validate();
  const double usable_um = in.chip_edge_mm * 1000.0 - 2.0 * in.margin_um;
  // Nudge by a relative epsilon so exact fits such as 18600 / 465 are not
  // lost to rounding in the division.
  auto fit = [&](double unit) { return static_cast<std::uint64_t>(std::floor(usable_um / unit * (1.0 + 1e-12))); };
  CapacityResult r;
  r.side_w = fit(in.unit_width_um);
  r.side_h = fit(in.unit_height_um);
  r.units_per_side = std::min(r.side_w, r.side_h);
  r.units_per_chip = r.units_per_side * r.units_per_side;
  r.total_units = r.units_per_chip * in.chips;
  r.max_bits = isqrt(r.total_units);
  r.total_qubits = r.total_units * in.qubits_per_unit;
  return r;
}

std::string CapacityResult::to_text() const {
  std::ostringstream os;
  os << "units_per_side_w " << side_w << '\n';
  os << "units_per_side_h " << side_h << '\n';
  os << "units_per_chip " << units_per_side << 'x' << units_per_side << " = " << units_per_chip << '\n';
  os << "total_units " << total_units << '\n';
  os << "max_bits " << max_bits << '\n';
  os << "total_qubits " << total_qubits << '\n';
  return os.str();
}

}  // namespace qaf
