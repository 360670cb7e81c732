#include "qafactor/ising.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace qaf {

// ---------------------------------------------------------------------------
// SpinState

SpinState::SpinState(std::size_t n, std::int8_t fill) : spins_(n, fill) {
  if (fill != 1 && fill != -1) throw Error(ErrorKind::Range, "spin value must be -1 or +1");
}

SpinState::SpinState(std::vector<std::int8_t> spins) : spins_(std::move(spins)) {
  for (auto s : spins_)
    if (s != 1 && s != -1) throw Error(ErrorKind::Range, "spin value must be -1 or +1");
}

SpinState SpinState::from_bits(std::span<const std::uint8_t> bits) {
  std::vector<std::int8_t> s(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) throw Error(ErrorKind::Range, "bit value must be 0 or 1");
    s[i] = bit_to_spin(bits[i]);
  }
  return SpinState(std::move(s));
}

SpinState SpinState::from_mask(std::uint64_t mask, std::size_t n) {
  std::vector<std::int8_t> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = ((mask >> i) & 1U) ? 1 : -1;
  return SpinState(std::move(s));
}

std::vector<std::uint8_t> SpinState::bits() const {
  std::vector<std::uint8_t> b(spins_.size());
  for (std::size_t i = 0; i < spins_.size(); ++i) b[i] = spin_to_bit(spins_[i]);
  return b;
}

std::uint64_t SpinState::mask() const {
  if (spins_.size() > 64) throw Error(ErrorKind::Size, "mask() needs at most 64 spins");
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < spins_.size(); ++i)
    if (spins_[i] > 0) m |= std::uint64_t{1} << i;
  return m;
}

void SpinState::set(std::size_t i, std::int8_t s) {
  if (s != 1 && s != -1) throw Error(ErrorKind::Range, "spin value must be -1 or +1");
  spins_.at(i) = s;
}

SpinState bits_to_spins(std::span<const std::uint8_t> bits) { return SpinState::from_bits(bits); }

std::vector<std::uint8_t> spins_to_bits(const SpinState& state) { return state.bits(); }

// ---------------------------------------------------------------------------
// IsingModel

SpinPair canonical_pair(SpinIndex i, SpinIndex j) {
  if (i == j) throw Error(ErrorKind::Range, "self-coupling (" + std::to_string(i) + "," +
                                                std::to_string(i) + ") is not allowed");
  return i < j ? SpinPair{i, j} : SpinPair{j, i};
}

IsingModel::IsingModel(std::size_t n, std::vector<double> h, CouplingMap J)
    : h_(std::move(h)), J_(std::move(J)) {
  if (h_.size() != n)
    throw Error(ErrorKind::Dimension, "bias vector has " + std::to_string(h_.size()) +
                                          " entries, expected " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(h_[i]))
      throw Error(ErrorKind::Range, "non-finite bias on spin " + std::to_string(i));

  // Zero couplings carry no energy; dropping them keeps one canonical form.
  std::erase_if(J_, [](const auto& kv) { return kv.second == 0.0; });
  std::vector<std::size_t> degree(n, 0);
  for (const auto& [key, v] : J_) {
    auto [i, j] = key;
    if (i >= j) throw Error(ErrorKind::Range, "coupling key must satisfy i < j");
    if (j >= n) throw Error(ErrorKind::Range, "coupling index " + std::to_string(j) + " out of range");
    if (!std::isfinite(v)) throw Error(ErrorKind::Range, "non-finite coupling");
    ++degree[i];
    ++degree[j];
  }

  adj_.offset.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) adj_.offset[i + 1] = adj_.offset[i] + degree[i];
  adj_.nbr.resize(adj_.offset[n]);
  adj_.weight.resize(adj_.offset[n]);
  std::vector<std::size_t> fill(adj_.offset.begin(), adj_.offset.end() - 1);
  for (const auto& [key, v] : J_) {
    auto [i, j] = key;
    adj_.nbr[fill[i]] = j;
    adj_.weight[fill[i]++] = v;
    adj_.nbr[fill[j]] = i;
    adj_.weight[fill[j]++] = v;
  }
}

double IsingModel::coupling(SpinIndex i, SpinIndex j) const {
  if (i >= size() || j >= size()) throw Error(ErrorKind::Range, "coupling index out of range");
  if (i == j) return 0.0;
  auto it = J_.find(canonical_pair(i, j));
  return it == J_.end() ? 0.0 : it->second;
}

IsingModel IsingModel::scaled(double c) const {
  std::vector<double> h = h_;
  for (auto& v : h) v *= c;
  CouplingMap J = J_;
  for (auto& [k, v] : J) v *= c;
  const std::size_t n = h.size();
  return IsingModel(n, std::move(h), std::move(J));
}

SpinIndex IsingBuilder::add_spin(double h) {
  h_.push_back(h);
  return h_.size() - 1;
}

void IsingBuilder::add_bias(SpinIndex i, double v) {
  if (i >= h_.size()) throw Error(ErrorKind::Range, "bias index " + std::to_string(i) + " out of range");
  h_[i] += v;
}

void IsingBuilder::add_coupling(SpinIndex i, SpinIndex j, double v) {
  if (i >= h_.size() || j >= h_.size())
    throw Error(ErrorKind::Range, "coupling index out of range");
  J_[canonical_pair(i, j)] += v;
}

SpinIndex IsingBuilder::append(const IsingModel& block) {
  const SpinIndex base = h_.size();
  for (double v : block.biases()) h_.push_back(v);
  for (const auto& [key, v] : block.couplings()) J_[{key.first + base, key.second + base}] += v;
  return base;
}

IsingModel IsingBuilder::build() const { return IsingModel(h_.size(), h_, J_); }

// ---------------------------------------------------------------------------
// Energy and clamping

double energy(const IsingModel& model, const SpinState& state) {
  if (state.size() != model.size())
    throw Error(ErrorKind::Dimension, "state has " + std::to_string(state.size()) +
                                          " spins, model has " + std::to_string(model.size()));
  double e = 0.0;
  const auto h = model.biases();
  for (std::size_t i = 0; i < h.size(); ++i) e += h[i] * state[i];
  for (const auto& [key, v] : model.couplings()) e += v * state[key.first] * state[key.second];
  return e;
}

SpinState FoldResult::expand(const SpinState& reduced_state) const {
  if (reduced_state.size() != free_to_full.size())
    throw Error(ErrorKind::Dimension, "reduced state has wrong size");
  std::vector<std::int8_t> full(full_size, -1);
  for (const auto& [i, bit] : clamps) full[i] = bit_to_spin(bit);
  for (std::size_t r = 0; r < free_to_full.size(); ++r) full[free_to_full[r]] = reduced_state[r];
  return SpinState(std::move(full));
}

FoldResult clamp_fold(const IsingModel& model, const ClampAssignment& clamps) {
  const std::size_t n = model.size();
  for (const auto& [i, bit] : clamps) {
    if (i >= n)
      throw Error(ErrorKind::Range, "clamp index " + std::to_string(i) + " out of range for " +
                                        std::to_string(n) + " spins");
    if (bit > 1) throw Error(ErrorKind::Range, "clamp value must be 0 or 1");
  }

  FoldResult out;
  out.clamps = clamps;
  out.full_size = n;
  std::vector<std::size_t> full_to_free(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!clamps.contains(i)) {
      full_to_free[i] = out.free_to_full.size();
      out.free_to_full.push_back(i);
    }
  }

  std::vector<double> h(out.free_to_full.size(), 0.0);
  for (std::size_t r = 0; r < h.size(); ++r) h[r] = model.bias(out.free_to_full[r]);
  for (const auto& [i, bit] : clamps) out.offset += model.bias(i) * bit_to_spin(bit);

  CouplingMap J;
  for (const auto& [key, v] : model.couplings()) {
    auto [i, j] = key;
    const bool ci = clamps.contains(i), cj = clamps.contains(j);
    if (ci && cj) {
      out.offset += v * bit_to_spin(clamps.at(i)) * bit_to_spin(clamps.at(j));
    } else if (ci) {
      h[full_to_free[j]] += v * bit_to_spin(clamps.at(i));
    } else if (cj) {
      h[full_to_free[i]] += v * bit_to_spin(clamps.at(j));
    } else {
      J[{full_to_free[i], full_to_free[j]}] = v;  // order preserved: i<j => free(i)<free(j)
    }
  }
  const std::size_t n_free = h.size();
  out.reduced = IsingModel(n_free, std::move(h), std::move(J));
  return out;
}

// ---------------------------------------------------------------------------
// Brute force

namespace {

struct LevelTracker {
  double e0 = std::numeric_limits<double>::infinity();
  double second = std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> masks;
  std::uint64_t count = 0;
  std::size_t max_store = 0;
  bool truncated = false;

  void observe(double e, std::uint64_t mask) {
    if (e < e0 - kDegeneracyTol) {
      if (std::isfinite(e0)) second = std::min(second, e0);
      e0 = e;
      masks.clear();
      truncated = false;
      count = 0;
      push(mask);
    } else if (e <= e0 + kDegeneracyTol) {
      push(mask);
    } else {
      second = std::min(second, e);
    }
  }

  void push(std::uint64_t mask) {
    ++count;
    if (masks.size() < max_store)
      masks.push_back(mask);
    else
      truncated = true;
  }
};

void check_cap(const IsingModel& model, const BruteForceOptions& opts) {
  if (model.size() > opts.max_spins || model.size() > 62)
    throw Error(ErrorKind::Size, "brute force refused: " + std::to_string(model.size()) +
                                     " spins exceeds cap of " + std::to_string(opts.max_spins));
}

GroundReport finish(const std::vector<LevelTracker>& parts, std::size_t n, std::size_t max_store) {
  GroundReport r;
  double e0 = std::numeric_limits<double>::infinity();
  for (const auto& p : parts) e0 = std::min(e0, p.e0);
  double second = std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> masks;
  for (const auto& p : parts) {
    if (!std::isfinite(p.e0)) continue;
    if (p.e0 <= e0 + kDegeneracyTol) {
      r.ground_count += p.count;
      r.truncated = r.truncated || p.truncated;
      masks.insert(masks.end(), p.masks.begin(), p.masks.end());
    } else {
      second = std::min(second, p.e0);
    }
    second = std::min(second, p.second);
  }
  std::sort(masks.begin(), masks.end());
  if (masks.size() > max_store) {
    masks.resize(max_store);
    r.truncated = true;
  }
  r.e0 = e0;
  r.gap = second - e0;
  r.ground.reserve(masks.size());
  for (auto m : masks) r.ground.push_back(SpinState::from_mask(m, n));
  return r;
}

}  // namespace

GroundReport brute_force_ground(const IsingModel& model, const BruteForceOptions& opts) {
  check_cap(model, opts);
  const std::size_t n = model.size();
  const std::uint64_t total = std::uint64_t{1} << n;
  // Fixed chunk count so the result never depends on the thread count.
  const std::uint64_t chunks = std::min<std::uint64_t>(total, 256);
  const std::uint64_t per_chunk = total / chunks;
  const auto& adj = model.adjacency();
  const auto h = model.biases();

  std::vector<LevelTracker> parts(chunks);
  for (auto& p : parts) p.max_store = opts.max_stored_ground;

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    LevelTracker& tr = parts[c];
    const std::uint64_t lo = static_cast<std::uint64_t>(c) * per_chunk;
    const std::uint64_t hi = lo + per_chunk;

    std::uint64_t gray = lo ^ (lo >> 1);
    std::vector<std::int8_t> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = ((gray >> i) & 1U) ? 1 : -1;
    // local field f_i = h_i + sum_j J_ij s_j
    std::vector<double> field(n);
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double f = h[i];
      for (std::size_t k = adj.offset[i]; k < adj.offset[i + 1]; ++k) f += adj.weight[k] * s[adj.nbr[k]];
      field[i] = f;
      e += h[i] * s[i];
    }
    for (const auto& [key, v] : model.couplings()) e += v * s[key.first] * s[key.second];
    tr.observe(e, gray);

    for (std::uint64_t k = lo + 1; k < hi; ++k) {
      const auto i = static_cast<std::size_t>(std::countr_zero(k));
      e -= 2.0 * s[i] * field[i];
      s[i] = static_cast<std::int8_t>(-s[i]);
      const double two_s = 2.0 * s[i];
      for (std::size_t q = adj.offset[i]; q < adj.offset[i + 1]; ++q)
        field[adj.nbr[q]] += adj.weight[q] * two_s;
      gray ^= std::uint64_t{1} << i;
      tr.observe(e, gray);
    }
  }
  return finish(parts, n, opts.max_stored_ground);
}

GroundReport brute_force_ground_serial(const IsingModel& model, const BruteForceOptions& opts) {
  check_cap(model, opts);
  const std::size_t n = model.size();
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<LevelTracker> parts(1);
  parts[0].max_store = opts.max_stored_ground;
  for (std::uint64_t m = 0; m < total; ++m) parts[0].observe(energy(model, SpinState::from_mask(m, n)), m);
  return finish(parts, n, opts.max_stored_ground);
}

}  // namespace qaf
