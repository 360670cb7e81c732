#include "qafactor/annealer.hpp"

#include <omp.h>

#include <algorithm>
#include <ostream>
#include <set>
#include <sstream>

#include "qafactor/model_io.hpp"
#include "qafactor/rng.hpp"

namespace qaf {

void Schedule::validate() const {
  if (!(t_cold > 0.0) || !std::isfinite(t_hot) || t_hot < t_cold)
    throw Error(ErrorKind::Range, "schedule needs t_hot >= t_cold > 0 (got t_hot=" + format_double(t_hot) +
                                      ", t_cold=" + format_double(t_cold) + ")");
  if (sweeps < 1) throw Error(ErrorKind::Range, "schedule needs at least one sweep");
}

double Schedule::temperature(std::size_t k) const {
  if (sweeps <= 1) return t_cold;
  const double f = static_cast<double>(std::min(k, sweeps - 1)) / static_cast<double>(sweeps - 1);
  if (kind == ScheduleKind::Linear) return t_hot + (t_cold - t_hot) * f;
  return t_hot * std::pow(t_cold / t_hot, f);
}

std::string to_string(ScheduleKind kind) { return kind == ScheduleKind::Linear ? "linear" : "geometric"; }

ScheduleKind parse_schedule_kind(const std::string& s) {
  if (s == "geometric") return ScheduleKind::Geometric;
  if (s == "linear") return ScheduleKind::Linear;
  throw Error(ErrorKind::Parse, "unknown schedule '" + s + "' (expected geometric or linear)");
}

ShotResult anneal_shot(const IsingModel& model, const Schedule& schedule, std::uint64_t seed) {
  schedule.validate();
  const std::size_t n = model.size();
  if (n == 0) throw Error(ErrorKind::Size, "cannot anneal an empty model");

  ShotRng rng(seed);
  std::vector<std::int8_t> s(n);
  for (auto& v : s) v = (rng() >> 63) ? 1 : -1;

  const auto h = model.biases();
  const auto& adj = model.adjacency();
  // field[i] = h_i + sum_j J_ij s_j; flipping i changes the energy by -2 s_i field[i].
  std::vector<double> field(h.begin(), h.end());
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = adj.offset[i]; k < adj.offset[i + 1]; ++k) field[i] += adj.weight[k] * s[adj.nbr[k]];
    e += s[i] * (h[i] + 0.5 * (field[i] - h[i]));
  }

  for (std::size_t sweep = 0; sweep < schedule.sweeps; ++sweep) {
    const double T = schedule.temperature(sweep);
    for (std::size_t i = 0; i < n; ++i) {
      const double dE = -2.0 * s[i] * field[i];
      if (!metropolis_accept(dE, T, dE <= 0.0 ? 0.0 : uniform01(rng))) continue;
      s[i] = static_cast<std::int8_t>(-s[i]);
      e += dE;
      const double delta = 2.0 * s[i];
      for (std::size_t k = adj.offset[i]; k < adj.offset[i + 1]; ++k) field[adj.nbr[k]] += adj.weight[k] * delta;
    }
  }

  ShotResult out;
  out.state = SpinState(std::move(s));
  out.energy = energy(model, out.state);
  out.seed = seed;
  if (std::abs(out.energy - e) > 1e-6)
    throw Error(ErrorKind::Instability, "incremental energy drifted: tracked " + format_double(e) + ", exact " +
                                            format_double(out.energy));
  return out;
}

std::string bit_string(const SpinState& state) {
  std::string s(state.size(), '0');
  for (std::size_t i = 0; i < state.size(); ++i)
    if (state[i] > 0) s[i] = '1';
  return s;
}

namespace {

RunSummary aggregate(std::vector<ShotResult> results, const Schedule& schedule, const RunOptions& opts) {
  RunSummary sum;
  sum.shots = results.size();
  sum.master_seed = opts.master_seed;
  sum.schedule = schedule;
  sum.reference_e0 = opts.reference_e0;
  sum.best_energy = std::numeric_limits<double>::infinity();
  for (const auto& r : results) {
    sum.best_energy = std::min(sum.best_energy, r.energy);
    if (sum.is_ground(r)) ++sum.ground_hits;
    ++sum.histogram[opts.key ? opts.key(r.state) : bit_string(r.state)];
  }
  sum.results = std::move(results);
  return sum;
}

void check_run(const Schedule& schedule, const RunOptions& opts) {
  schedule.validate();
  if (opts.shots < 1) throw Error(ErrorKind::Range, "need at least one shot");
}

}  // namespace

RunSummary run_shots(const IsingModel& model, const Schedule& schedule, const RunOptions& opts) {
  check_run(schedule, opts);
  std::vector<ShotResult> results(opts.shots);
  const int threads = opts.threads > 0 ? opts.threads : omp_get_max_threads();
  // Exceptions may not cross the parallel region; keep the lowest-index one.
  std::vector<std::string> errors(opts.shots);
  std::vector<ErrorKind> kinds(opts.shots, ErrorKind::Instability);
  const auto n = static_cast<std::ptrdiff_t>(opts.shots);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto shot = static_cast<std::size_t>(k);
    try {
      results[shot] = anneal_shot(model, schedule, derive_seed(opts.master_seed, shot));
      results[shot].shot = shot;
    } catch (const Error& e) {
      errors[shot] = std::string("shot ") + std::to_string(shot) + ": " + e.what();
      kinds[shot] = e.kind();
    }
  }
  for (std::size_t k = 0; k < opts.shots; ++k)
    if (!errors[k].empty()) throw Error(kinds[k], errors[k]);
  return aggregate(std::move(results), schedule, opts);
}

RunSummary run_shots_serial(const IsingModel& model, const Schedule& schedule, const RunOptions& opts) {
  check_run(schedule, opts);
  std::vector<ShotResult> results;
  results.reserve(opts.shots);
  for (std::size_t k = 0; k < opts.shots; ++k) {
    results.push_back(anneal_shot(model, schedule, derive_seed(opts.master_seed, k)));
    results.back().shot = k;
  }
  return aggregate(std::move(results), schedule, opts);
}

std::string RunSummary::to_text() const {
  std::ostringstream os;
  os << "shots " << shots << '\n';
  os << "master_seed " << master_seed << '\n';
  os << "schedule " << to_string(schedule.kind) << '\n';
  os << "t_hot " << format_double(schedule.t_hot) << '\n';
  os << "t_cold " << format_double(schedule.t_cold) << '\n';
  os << "sweeps " << schedule.sweeps << '\n';
  os << "best_energy " << format_double(best_energy) << '\n';
  if (reference_e0) {
    os << "reference_e0 " << format_double(*reference_e0) << '\n';
    os << "ground_hits " << ground_hits << '\n';
    os << "ground_rate " << format_double(ground_rate()) << '\n';
  }
  for (const auto& [key, n] : histogram) os << "count " << key << ' ' << n << '\n';
  return os.str();
}

std::string summarize_table(const std::string& row_header, const std::vector<TableColumn>& columns,
                            const std::vector<std::string>& row_order) {
  std::vector<std::string> rows;
  std::set<std::string> seen;
  std::set<std::string> present;
  for (const auto& c : columns)
    for (const auto& [key, n] : c.counts) present.insert(key);
  for (const auto& key : row_order)
    if (seen.insert(key).second) rows.push_back(key);
  for (const auto& key : present)
    if (seen.insert(key).second) rows.push_back(key);
  if (present.empty()) rows.clear();

  std::size_t w0 = row_header.size();
  for (const auto& r : rows) w0 = std::max(w0, r.size());
  std::vector<std::size_t> w;
  for (const auto& c : columns) {
    std::size_t wc = c.label.size();
    for (const auto& [key, n] : c.counts) wc = std::max(wc, std::to_string(n).size());
    w.push_back(wc);
  }

  std::ostringstream os;
  auto pad = [&](const std::string& s, std::size_t width, bool right) {
    if (right) os << std::string(width - s.size(), ' ') << s;
    else os << s << std::string(width - s.size(), ' ');
  };
  pad(row_header, w0, false);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    os << "  ";
    pad(columns[c].label, w[c], true);
  }
  os << '\n';
  for (const auto& r : rows) {
    pad(r, w0, false);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const auto it = columns[c].counts.find(r);
      os << "  ";
      pad(std::to_string(it == columns[c].counts.end() ? 0 : it->second), w[c], true);
    }
    os << '\n';
  }
  return os.str();
}

std::string summarize_table(const RunSummary& summary, const std::string& row_header,
                            const std::string& column_label) {
  return summarize_table(row_header, {TableColumn{column_label, summary.histogram}});
}

void write_shot_csv(std::ostream& os, const RunSummary& summary, const std::string& extra_header,
                    const std::function<std::string(const ShotResult&)>& extra) {
  os << "shot,energy,ground_hit,state_bits";
  if (!extra_header.empty()) os << ',' << extra_header;
  os << '\n';
  for (const auto& r : summary.results) {
    os << r.shot << ',' << format_double(r.energy) << ',' << (summary.is_ground(r) ? 1 : 0) << ','
       << bit_string(r.state);
    if (extra) os << ',' << extra(r);
    os << '\n';
  }
}

}  // namespace qaf
