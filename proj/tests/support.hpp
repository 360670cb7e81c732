#pragma once

// Shared helpers for the unit tests: seeded random models and a dense
// reference energy that does not use the library's adjacency structures.

#include <random>
#include <vector>

#include "qafactor/ising.hpp"

namespace qaf::test {

/// Random model with coefficients on a 1/4 grid in [-2, 2] and roughly
/// `density` of all pairs coupled.
inline IsingModel random_model(std::size_t n, std::uint64_t seed, double density = 0.5) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> q(-8, 8);
  std::bernoulli_distribution keep(density);
  std::vector<double> h(n);
  for (auto& v : h) v = q(rng) / 4.0;
  CouplingMap J;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (keep(rng)) J[{i, j}] = q(rng) / 4.0;
  return IsingModel(n, std::move(h), std::move(J));
}

/// sum_i h_i s_i + sum_{i<j} J_ij s_i s_j over a dense matrix.
inline double dense_energy(const IsingModel& m, const SpinState& s) {
  const std::size_t n = m.size();
  std::vector<double> J(n * n, 0.0);
  for (const auto& [key, v] : m.couplings()) J[key.first * n + key.second] = v;
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    e += m.bias(i) * s[i];
    for (std::size_t j = i + 1; j < n; ++j) e += J[i * n + j] * s[i] * s[j];
  }
  return e;
}

}  // namespace qaf::test
