#pragma once

// Classical simulated annealing over an IsingModel.
//
// One shot: random +-1 start, then `sweeps` passes of single-spin Metropolis
// in index order, temperature following the schedule. Shots are independent
// and seeded through derive_seed, so a run is reproducible for any thread
// count.

#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qafactor/ising.hpp"

namespace qaf {

enum class ScheduleKind { Geometric, Linear };

struct Schedule {
  ScheduleKind kind = ScheduleKind::Geometric;
  double t_hot = 3.0;
  double t_cold = 0.05;
  std::size_t sweeps = 2000;

  /// Throws Error(Range) unless t_hot >= t_cold > 0 and sweeps >= 1.
  void validate() const;
  /// Temperature of sweep k (0-based). The first sweep runs at t_hot and the
  /// last at t_cold; a one-sweep schedule runs at t_cold.
  double temperature(std::size_t k) const;
};

std::string to_string(ScheduleKind kind);
ScheduleKind parse_schedule_kind(const std::string& s);

/// Metropolis rule with a supplied uniform draw u in [0, 1).
inline bool metropolis_accept(double dE, double T, double u) {
  if (dE <= 0.0) return true;
  return u < std::exp(-dE / T);
}

struct ShotResult {
  SpinState state;
  double energy = 0.0;  // energy(model, state), recomputed at the end
  std::size_t shot = 0;
  std::uint64_t seed = 0;
};

ShotResult anneal_shot(const IsingModel& model, const Schedule& schedule, std::uint64_t seed);

/// Histogram key: by default the state's bits, spin 0 first.
using OutcomeKey = std::function<std::string(const SpinState&)>;
std::string bit_string(const SpinState& state);

struct RunOptions {
  std::size_t shots = 100;
  std::uint64_t master_seed = 1;
  /// Reference ground energy in the same coordinates as the model.
  std::optional<double> reference_e0;
  /// Worker threads; 0 uses the OpenMP default.
  int threads = 0;
  OutcomeKey key;
};

struct RunSummary {
  std::size_t shots = 0;
  std::uint64_t master_seed = 0;
  Schedule schedule;
  double best_energy = 0.0;
  std::optional<double> reference_e0;
  std::size_t ground_hits = 0;
  std::map<std::string, std::uint64_t> histogram;
  std::vector<ShotResult> results;  // in shot order

  bool is_ground(const ShotResult& r) const {
    return reference_e0 && r.energy <= *reference_e0 + kDegeneracyTol;
  }
  double ground_rate() const { return shots ? static_cast<double>(ground_hits) / static_cast<double>(shots) : 0.0; }

  /// Line-oriented `key value` text; histogram entries as `count <key> <n>`.
  std::string to_text() const;
};

/// Shots in parallel over OpenMP threads.
RunSummary run_shots(const IsingModel& model, const Schedule& schedule, const RunOptions& opts);
/// Serial reference with identical output.
RunSummary run_shots_serial(const IsingModel& model, const Schedule& schedule, const RunOptions& opts);

/// Table text: one row per key, one count column per entry of `columns`.
/// Keys are the union of all histograms, in the given order when `row_order`
/// is non-empty (unlisted keys follow, sorted).
struct TableColumn {
  std::string label;
  std::map<std::string, std::uint64_t> counts;
};
std::string summarize_table(const std::string& row_header, const std::vector<TableColumn>& columns,
                            const std::vector<std::string>& row_order = {});
std::string summarize_table(const RunSummary& summary, const std::string& row_header = "outcome",
                            const std::string& column_label = "count");

/// Per-shot CSV `shot,energy,ground_hit,state_bits[,extra...]`. `extra`
/// returns the already comma-joined trailing fields for a shot.
void write_shot_csv(std::ostream& os, const RunSummary& summary, const std::string& extra_header = {},
                    const std::function<std::string(const ShotResult&)>& extra = {});

}  // namespace qaf
