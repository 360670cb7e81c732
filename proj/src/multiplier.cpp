#include "qafactor/multiplier.hpp"

#include <algorithm>
#include <map>

namespace qaf {

MultiplierNetwork build_multiplier(std::size_t n1, std::size_t n2, const NetworkOptions& options) {
  if (n1 < 1 || n2 < 1) throw Error(ErrorKind::Range, "multiplier widths must be at least 1");
  if (n1 + n2 > 63) throw Error(ErrorKind::Range, "product wider than 63 bits");

  const GateTemplate& unit = multiplier_unit();
  MultiplierNetwork net;
  net.n1 = n1;
  net.n2 = n2;
  net.options = options;

  IsingBuilder b;
  for (std::size_t j = 0; j < n2; ++j) {
    for (std::size_t i = 0; i < n1; ++i) {
      const SpinIndex base = b.append(unit.model);
      auto p = [&](const char* name) { return base + unit.ports.at(name); };
      net.cells.push_back({p("a"), p("b"), p("c"), p("d"), p("carry"), p("sum")});
    }
  }

  for (std::size_t j = 0; j < n2; ++j) {
    for (std::size_t i = 0; i < n1; ++i) {
      const CellSpins& c = net.cell(i, j);
      if (j > 0) net.wires.push_back({net.cell(i, j - 1).a, c.a});
      if (i > 0) net.wires.push_back({net.cell(i - 1, j).b, c.b});
      if (j == 0) {
        net.boundary_zero[c.c] = 0;
      } else if (i + 1 < n1) {
        net.wires.push_back({net.cell(i + 1, j - 1).sum, c.c});
      } else {
        net.wires.push_back({net.cell(n1 - 1, j - 1).carry, c.c});
      }
      if (i == 0) {
        net.boundary_zero[c.d] = 0;
      } else {
        net.wires.push_back({net.cell(i - 1, j).carry, c.d});
      }
    }
  }

  const double wire_j = -options.chain_strength;
  for (const Wire& w : net.wires) {
    if (options.interconnect_chains) {
      const SpinIndex mid = b.add_spin();
      b.add_coupling(w.from, mid, wire_j);
      b.add_coupling(mid, w.to, wire_j);
      ++net.chain_qubits;
      net.coupler_count += 2;
    } else {
      b.add_coupling(w.from, w.to, wire_j);
      ++net.coupler_count;
    }
  }
  net.model = b.build();

  net.roles.assign(net.model.size(), Role{});
  for (std::size_t k = 0; k < n1; ++k) net.roles[net.factor_a_spin(k)] = {RoleKind::FactorA, k};
  for (std::size_t k = 0; k < n2; ++k) net.roles[net.factor_b_spin(k)] = {RoleKind::FactorB, k};
  for (std::size_t k = 0; k < n1 + n2; ++k) net.roles[net.product_spin(k)] = {RoleKind::Product, k};

  net.cell_e0 = verify_gate(unit).e0;
  net.expected_e0 = expected_ground_energy(net);
  return net;
}

SpinIndex MultiplierNetwork::factor_a_spin(std::size_t k) const { return cell(k, 0).a; }

SpinIndex MultiplierNetwork::factor_b_spin(std::size_t k) const { return cell(0, k).b; }

SpinIndex MultiplierNetwork::product_spin(std::size_t k) const {
  if (k < n2) return cell(0, k).sum;
  if (k < n1 + n2 - 1) return cell(k - n2 + 1, n2 - 1).sum;
  if (k == n1 + n2 - 1) return cell(n1 - 1, n2 - 1).carry;
  throw Error(ErrorKind::Range, "product bit " + std::to_string(k) + " out of range");
}

std::vector<RoleEntry> MultiplierNetwork::role_entries() const {
  std::vector<RoleEntry> out;
  for (std::size_t k = 0; k < n1; ++k) out.push_back({'A', k, factor_a_spin(k)});
  for (std::size_t k = 0; k < n2; ++k) out.push_back({'B', k, factor_b_spin(k)});
  for (std::size_t k = 0; k < n1 + n2; ++k) out.push_back({'P', k, product_spin(k)});
  return out;
}

double expected_ground_energy(const MultiplierNetwork& net) {
  return static_cast<double>(net.cells.size()) * net.cell_e0 -
         static_cast<double>(net.coupler_count) * net.options.chain_strength;
}

namespace {

ClampedProblem fold_with(const MultiplierNetwork& net, ClampAssignment clamps) {
  for (const auto& [i, bit] : net.boundary_zero) clamps[i] = bit;
  ClampedProblem out;
  out.fold = clamp_fold(net.model, clamps);
  out.model = out.fold.reduced;
  out.reference_e0 = net.expected_e0 - out.fold.offset;
  return out;
}

}  // namespace

ClampedProblem free_problem(const MultiplierNetwork& net) { return fold_with(net, {}); }

ClampedProblem clamp_factors(const MultiplierNetwork& net, std::uint64_t m, std::uint64_t n) {
  if (m >> net.n1) throw Error(ErrorKind::Range, "factor M=" + std::to_string(m) + " does not fit in " +
                                                     std::to_string(net.n1) + " bits");
  if (n >> net.n2) throw Error(ErrorKind::Range, "factor N=" + std::to_string(n) + " does not fit in " +
                                                     std::to_string(net.n2) + " bits");
  ClampAssignment clamps;
  for (std::size_t k = 0; k < net.n1; ++k) clamps[net.factor_a_spin(k)] = (m >> k) & 1U;
  for (std::size_t k = 0; k < net.n2; ++k) clamps[net.factor_b_spin(k)] = (n >> k) & 1U;
  return fold_with(net, std::move(clamps));
}

ClampedProblem clamp_product(const MultiplierNetwork& net, std::uint64_t p, ProductClamp method,
                             double bias_strength) {
  const std::size_t bits = net.product_bits();
  if (p >> bits)
    throw Error(ErrorKind::Range, "product P=" + std::to_string(p) + " does not fit in " + std::to_string(bits) +
                                      " bits");
  if (method == ProductClamp::Fold) {
    ClampAssignment clamps;
    for (std::size_t k = 0; k < bits; ++k) clamps[net.product_spin(k)] = (p >> k) & 1U;
    return fold_with(net, std::move(clamps));
  }

  ClampedProblem out = fold_with(net, {});
  std::vector<SpinIndex> full_to_free(net.model.size(), net.model.size());
  for (std::size_t r = 0; r < out.fold.free_to_full.size(); ++r) full_to_free[out.fold.free_to_full[r]] = r;
  std::vector<double> h(out.model.biases().begin(), out.model.biases().end());
  for (std::size_t k = 0; k < bits; ++k) {
    const SpinIndex r = full_to_free[net.product_spin(k)];
    h[r] += ((p >> k) & 1U) ? -bias_strength : bias_strength;
  }
  const std::size_t n_free = h.size();
  out.model = IsingModel(n_free, std::move(h), out.model.couplings());
  out.reference_e0 -= bias_strength * static_cast<double>(bits);
  return out;
}

FactorOutcome decode(const MultiplierNetwork& net, const SpinState& full_state) {
  if (full_state.size() != net.model.size())
    throw Error(ErrorKind::Dimension, "state has " + std::to_string(full_state.size()) + " spins, network has " +
                                          std::to_string(net.model.size()));
  FactorOutcome o;
  for (std::size_t s = 0; s < full_state.size(); ++s) {
    if (full_state[s] < 0) continue;
    const Role& r = net.roles[s];
    switch (r.kind) {
      case RoleKind::FactorA: o.m |= std::uint64_t{1} << r.bit; break;
      case RoleKind::FactorB: o.n |= std::uint64_t{1} << r.bit; break;
      case RoleKind::Product: o.p |= std::uint64_t{1} << r.bit; break;
      case RoleKind::Internal: break;
    }
  }
  o.energy = energy(net.model, full_state);
  o.is_ground = o.energy <= net.expected_e0 + kDegeneracyTol;
  return o;
}

std::vector<RoleEntry> reindex_roles(const std::vector<RoleEntry>& roles, const FoldResult& fold) {
  std::map<SpinIndex, SpinIndex> full_to_free;
  for (std::size_t r = 0; r < fold.free_to_full.size(); ++r) full_to_free[fold.free_to_full[r]] = r;
  std::vector<RoleEntry> out;
  for (const RoleEntry& e : roles) {
    const auto it = full_to_free.find(e.spin);
    if (it != full_to_free.end()) out.push_back({e.kind, e.bit, it->second});
  }
  return out;
}

FactorOutcome decode_roles(const std::vector<RoleEntry>& roles, const SpinState& state) {
  FactorOutcome o;
  for (const RoleEntry& e : roles) {
    if (e.spin >= state.size())
      throw Error(ErrorKind::Dimension, "role spin " + std::to_string(e.spin) + " outside a " +
                                            std::to_string(state.size()) + "-spin state");
    if (e.bit >= 64) throw Error(ErrorKind::Range, "role bit index " + std::to_string(e.bit) + " too large");
    if (state[e.spin] < 0) continue;
    const std::uint64_t bit = std::uint64_t{1} << e.bit;
    switch (e.kind) {
      case 'A': o.m |= bit; break;
      case 'B': o.n |= bit; break;
      case 'P': o.p |= bit; break;
      default: throw Error(ErrorKind::Parse, std::string("unknown role kind '") + e.kind + "'");
    }
  }
  return o;
}

}  // namespace qaf
