#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <bit>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include "qafactor/annealer.hpp"
#include "qafactor/capacity.hpp"
#include "qafactor/flux_sim.hpp"
#include "qafactor/gates.hpp"
#include "qafactor/model_io.hpp"
#include "qafactor/multiplier.hpp"
#include "qafactor/rng.hpp"

namespace qaf::cli {

namespace {

struct AnnealFlags {
  std::size_t shots = 200;
  std::optional<std::uint64_t> seed;
  std::size_t sweeps = 2000;
  double t_hot = 3.0;
  double t_cold = 0.05;
  std::string schedule = "geometric";
  int threads = 0;
  std::string csv;

  void add_to(CLI::App& app) {
    app.add_option("--shots", shots, "Number of independent shots")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "Master seed (random if omitted)");
    app.add_option("--sweeps", sweeps, "Metropolis sweeps per shot")->check(CLI::PositiveNumber);
    app.add_option("--t-hot", t_hot, "Initial temperature");
    app.add_option("--t-cold", t_cold, "Final temperature");
    app.add_option("--schedule", schedule, "geometric or linear")->check(CLI::IsMember({"geometric", "linear"}));
    app.add_option("--threads", threads, "Worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
    app.add_option("--csv", csv, "Write the per-shot log to this file");
  }

  Schedule make_schedule() const {
    Schedule s;
    s.kind = parse_schedule_kind(schedule);
    s.t_hot = t_hot;
    s.t_cold = t_cold;
    s.sweeps = sweeps;
    s.validate();
    return s;
  }
};

std::uint64_t effective_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::Parse, "cannot open '" + path + "' for reading");
  return is;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::Parse, "cannot open '" + path + "' for writing");
  return os;
}

std::size_t bit_length(std::uint64_t v) { return v == 0 ? 1 : static_cast<std::size_t>(std::bit_width(v)); }

std::string outcome_label(const FactorOutcome& o) {
  return std::to_string(o.m) + "," + std::to_string(o.n) + "," + std::to_string(o.p);
}

void write_csv_file(const std::string& path, const RunSummary& summary,
                    const std::function<FactorOutcome(const SpinState&)>& decoder) {
  if (path.empty()) return;
  auto os = open_out(path);
  if (decoder) {
    write_shot_csv(os, summary, "M,N,P", [&](const ShotResult& r) {
      const FactorOutcome o = decoder(r.state);
      return std::to_string(o.m) + "," + std::to_string(o.n) + "," + std::to_string(o.p);
    });
  } else {
    write_shot_csv(os, summary);
  }
}

// Ground-hit shots re-keyed by (M, N).
std::string ground_hit_table(const RunSummary& summary, const std::function<FactorOutcome(const SpinState&)>& decoder) {
  TableColumn col{"ground_hits", {}};
  for (const auto& r : summary.results) {
    if (!summary.is_ground(r)) continue;
    const FactorOutcome o = decoder(r.state);
    ++col.counts["(" + std::to_string(o.m) + "," + std::to_string(o.n) + ")"];
  }
  return summarize_table("(M,N)", {col});
}

// ---------------------------------------------------------------------------
// gates emit

struct EmitResult {
  IsingModel model;
  PortMap ports;
  std::optional<GateReport> report;
};

EmitResult emit_gate(const std::string& kind) {
  if (kind == "nor" || kind == "and" || kind == "mult-unit") {
    const GateTemplate g = kind == "nor" ? nor_gate() : kind == "and" ? and_gate() : multiplier_unit();
    return {g.model, g.ports, verify_gate(g)};
  }
  if (kind == "half-adder") {
    const ComposedCircuit c = half_adder();
    return {c.model, c.ports, std::nullopt};
  }
  throw CLI::ValidationError("gates emit", "unknown gate kind '" + kind + "'");
}

int cmd_gates_emit(const std::string& kind, const std::string& prefix, std::ostream& out) {
  const EmitResult r = emit_gate(kind);
  if (prefix.empty()) {
    write_model(out, r.model);
    for (const auto& [name, idx] : r.ports) out << "# port " << name << ' ' << idx << '\n';
  } else {
    auto ms = open_out(prefix + ".model");
    write_model(ms, r.model);
    auto ps = open_out(prefix + ".ports");
    write_ports(ps, r.ports);
    out << "wrote " << prefix << ".model and " << prefix << ".ports\n";
  }
  if (r.report) {
    out << "# verify " << (r.report->pass ? "pass" : "FAIL") << " e0 " << format_double(r.report->e0) << " gap "
        << format_double(r.report->achieved_gap) << '\n';
    if (!r.report->pass) return kExitVerify;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// synth mult

int cmd_synth_mult(std::size_t n1, std::size_t n2, bool chains, double strength, const std::string& prefix,
                   std::ostream& out) {
  const MultiplierNetwork net = build_multiplier(n1, n2, {chains, strength});
  const ClampedProblem fp = free_problem(net);
  const auto roles = reindex_roles(net.role_entries(), fp.fold);
  std::ostringstream head;
  head << "# multiplier " << n1 << "x" << n2 << (chains ? " with interconnect chains" : "") << '\n';
  head << "# cells " << net.cells.size() << " chain_qubits " << net.chain_qubits << " couplers "
       << net.coupler_count << '\n';
  head << "# spins " << fp.model.size() << " (boundary inputs folded) expected_e0 "
       << format_double(fp.reference_e0) << '\n';
  if (prefix.empty()) {
    out << head.str();
    write_model(out, fp.model);
    std::ostringstream rs;
    write_roles(rs, roles);
    std::istringstream lines(rs.str());
    for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
  } else {
    auto ms = open_out(prefix + ".model");
    ms << head.str();
    write_model(ms, fp.model);
    auto rs = open_out(prefix + ".roles");
    write_roles(rs, roles);
    out << head.str() << "wrote " << prefix << ".model and " << prefix << ".roles\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// anneal

ClampAssignment parse_clamps(const std::vector<std::string>& specs) {
  ClampAssignment clamps;
  for (const auto& s : specs) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq + 2 != s.size() || (s.back() != '0' && s.back() != '1'))
      throw CLI::ValidationError("--clamp", "expected SPIN=0 or SPIN=1, got '" + s + "'");
    std::size_t idx = 0;
    try {
      idx = std::stoul(s.substr(0, eq));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--clamp", "bad spin index in '" + s + "'");
    }
    clamps[idx] = static_cast<std::uint8_t>(s.back() - '0');
  }
  return clamps;
}

int cmd_anneal(const std::string& model_path, const std::string& roles_path, const std::vector<std::string>& clamp_specs,
               std::optional<double> reference, bool exact_reference, const AnnealFlags& f, std::ostream& out) {
  const IsingModel model = load_model_file(model_path);
  std::vector<RoleEntry> roles;
  if (!roles_path.empty()) {
    auto rs = open_in(roles_path);
    roles = read_roles(rs);
  }
  const FoldResult fold = clamp_fold(model, parse_clamps(clamp_specs));
  if (fold.reduced.size() == 0) throw Error(ErrorKind::Size, "every spin is clamped; nothing to anneal");

  RunOptions opts;
  opts.shots = f.shots;
  opts.master_seed = effective_seed(f.seed);
  opts.threads = f.threads;
  if (exact_reference) {
    opts.reference_e0 = brute_force_ground(fold.reduced).e0;
  } else if (reference) {
    opts.reference_e0 = *reference - fold.offset;
  }
  std::function<FactorOutcome(const SpinState&)> decoder;
  if (!roles.empty()) {
    decoder = [&](const SpinState& s) { return decode_roles(roles, fold.expand(s)); };
    opts.key = [&](const SpinState& s) { return outcome_label(decoder(s)); };
  } else {
    opts.key = [&](const SpinState& s) { return bit_string(fold.expand(s)); };
  }

  out << "seed " << opts.master_seed << '\n';
  out << "free_spins " << fold.reduced.size() << " clamp_offset " << format_double(fold.offset) << '\n';
  const RunSummary summary = run_shots(fold.reduced, f.make_schedule(), opts);
  out << summary.to_text();
  write_csv_file(f.csv, summary, decoder);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// factor / multiply

int cmd_factor(std::uint64_t p, std::optional<std::size_t> bits_a, std::optional<std::size_t> bits_b,
               const std::string& method, double bias, bool chains, const AnnealFlags& f, std::ostream& out) {
  const std::size_t n1 = bits_a.value_or(bit_length(p));
  const std::size_t n2 = bits_b.value_or(bit_length(p));
  const MultiplierNetwork net = build_multiplier(n1, n2, {chains, 1.0});
  const ProductClamp how = method == "bias" ? ProductClamp::Bias : ProductClamp::Fold;
  const ClampedProblem cp = clamp_product(net, p, how, bias);

  RunOptions opts;
  opts.shots = f.shots;
  opts.master_seed = effective_seed(f.seed);
  opts.threads = f.threads;
  opts.reference_e0 = cp.reference_e0;
  const auto decoder = [&](const SpinState& s) { return decode(net, cp.expand(s)); };
  opts.key = [&](const SpinState& s) { return outcome_label(decoder(s)); };

  out << "seed " << opts.master_seed << '\n';
  out << "network " << n1 << "x" << n2 << " spins " << net.model.size() << " free " << cp.model.size() << " clamp "
      << method << '\n';
  const RunSummary summary = run_shots(cp.model, f.make_schedule(), opts);
  out << summary.to_text();
  out << ground_hit_table(summary, decoder);
  write_csv_file(f.csv, summary, decoder);
  return kExitOk;
}

int cmd_multiply(std::uint64_t m, std::uint64_t n, std::optional<std::size_t> bits_a,
                 std::optional<std::size_t> bits_b, bool chains, const AnnealFlags& f, std::ostream& out) {
  const std::size_t n1 = bits_a.value_or(bit_length(m));
  const std::size_t n2 = bits_b.value_or(bit_length(n));
  const MultiplierNetwork net = build_multiplier(n1, n2, {chains, 1.0});
  const ClampedProblem cp = clamp_factors(net, m, n);

  RunOptions opts;
  opts.shots = f.shots;
  opts.master_seed = effective_seed(f.seed);
  opts.threads = f.threads;
  opts.reference_e0 = cp.reference_e0;
  const auto decoder = [&](const SpinState& s) { return decode(net, cp.expand(s)); };
  opts.key = [&](const SpinState& s) { return std::to_string(decoder(s).p); };

  out << "seed " << opts.master_seed << '\n';
  out << "network " << n1 << "x" << n2 << " spins " << net.model.size() << " free " << cp.model.size() << '\n';
  const RunSummary summary = run_shots(cp.model, f.make_schedule(), opts);
  const auto best = std::min_element(summary.results.begin(), summary.results.end(),
                                     [](const ShotResult& a, const ShotResult& b) { return a.energy < b.energy; });
  const FactorOutcome o = decoder(best->state);
  out << "product " << o.p << '\n';
  out << "ground_reached " << (o.is_ground ? 1 : 0) << '\n';
  out << summary.to_text();
  write_csv_file(f.csv, summary, decoder);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const std::string& model_path, const std::string& ports_path, const std::string& expect,
               std::size_t max_spins, std::ostream& out) {
  const IsingModel model = load_model_file(model_path);
  BruteForceOptions bf;
  bf.max_spins = max_spins;
  const GroundReport g = brute_force_ground(model, bf);
  out << "spins " << model.size() << '\n';
  out << "e0 " << format_double(g.e0) << '\n';
  out << "gap " << (std::isfinite(g.gap) ? format_double(g.gap) : std::string("inf")) << '\n';
  out << "ground_count " << g.ground_count << '\n';
  const std::size_t shown = std::min<std::size_t>(g.ground.size(), 64);
  for (std::size_t k = 0; k < shown; ++k) out << "ground " << bit_string(g.ground[k]) << '\n';
  if (shown < g.ground_count) out << "# " << (g.ground_count - shown) << " more ground states not listed\n";
  if (expect.empty()) return kExitOk;

  TruthTable table = expect == "nor"         ? nor_table()
                     : expect == "and"       ? and_table()
                     : expect == "mult-unit" ? multiplier_unit_table()
                                             : throw CLI::ValidationError("--expect", "unknown table '" + expect + "'");
  const std::vector<std::string> names = expect == "mult-unit"
                                             ? std::vector<std::string>{"a", "b", "c", "d", "carry", "sum"}
                                             : std::vector<std::string>{"in_a", "in_b", "out"};
  std::vector<SpinIndex> vars;
  if (ports_path.empty()) {
    for (std::size_t k = 0; k < names.size(); ++k) vars.push_back(k);
  } else {
    auto ps = open_in(ports_path);
    const PortMap ports = read_ports(ps);
    for (const auto& name : names) {
      const auto it = ports.find(name);
      if (it == ports.end()) throw Error(ErrorKind::Parse, "ports file lacks '" + name + "'");
      vars.push_back(it->second);
    }
  }
  for (SpinIndex v : vars)
    if (v >= model.size()) throw Error(ErrorKind::Dimension, "port spin " + std::to_string(v) + " out of range");
  const bool match = ground_rows(model, vars) == table.rows();
  out << "expect " << expect << ' ' << (match ? "pass" : "FAIL") << '\n';
  return match ? kExitOk : kExitVerify;
}

// ---------------------------------------------------------------------------
// circuit nor-inverse

struct CircuitFlags {
  std::string clamp = "0";
  std::string mode = "control";
  std::size_t shots = 200;
  std::optional<std::uint64_t> seed;
  double ramp_ns = 2.0;
  double hold_ns = 0.2;
  double dt_fs = 50.0;
  double noise_sigma_ua = 0.13;
  double noise_rate_thz = 2.0;
  int threads = 0;
  std::string trace;
  std::size_t decimate = 10;
};

std::string pair_label(const std::string& bits) {
  auto spin = [](char c) { return c == '1' ? std::string("+1") : std::string("-1"); };
  return "(" + spin(bits[0]) + "," + spin(bits[1]) + ")";
}

int cmd_circuit_nor_inverse(const CircuitFlags& f, std::ostream& out) {
  using namespace flux;
  std::vector<std::uint8_t> clamps;
  if (f.clamp == "both") clamps = {0, 1};
  else clamps = {static_cast<std::uint8_t>(f.clamp == "1" ? 1 : 0)};
  const ClampMode mode = f.mode == "direct" ? ClampMode::DirectBias : ClampMode::ControlQubit;

  NoiseSpec noise;
  noise.sigma = f.noise_sigma_ua * 1e-6;
  noise.sample_rate = f.noise_rate_thz * 1e12;
  RampSpec ramp;
  ramp.ramp = f.ramp_ns * 1e-9;
  ramp.hold = f.hold_ns * 1e-9;
  ramp.dt = f.dt_fs * 1e-15;
  const std::uint64_t seed = effective_seed(f.seed);
  out << "seed " << seed << '\n';
  out << "mode " << f.mode << " shots " << f.shots << " ramp_ns " << format_double(f.ramp_ns) << " dt_fs "
      << format_double(f.dt_fs) << " noise_sigma_uA " << format_double(f.noise_sigma_ua) << '\n';

  std::vector<TableColumn> columns;
  bool all_valid = true;
  for (std::uint8_t c : clamps) {
    const NetworkLayout layout = logical_to_physical(inverse_nor_model(c, mode));
    const EnsembleResult e = run_ensemble(layout, noise, ramp, f.shots, seed, f.threads);
    TableColumn col{"Q3=" + std::to_string(c), {}};
    std::uint64_t invalid = 0, clamp_miss = 0;
    for (const auto& bits : e.bits) {
      const bool nor = !(bits[0] || bits[1]);
      if (bits[2] != c) ++clamp_miss;
      if (static_cast<std::uint8_t>(nor) != bits[2]) ++invalid;
      ++col.counts[pair_label(std::string{char('0' + bits[0]), char('0' + bits[1])})];
    }
    out << "clamp " << int(c) << " nor_violations " << invalid << " output_off_clamp " << clamp_miss << '\n';
    for (const auto& [key, n] : e.counts) out << "clamp " << int(c) << " count " << key << ' ' << n << '\n';
    all_valid = all_valid && invalid == 0;
    columns.push_back(std::move(col));

    if (!f.trace.empty()) {
      TraceOptions topt{true, f.decimate};
      for (std::size_t k = 0; k < f.shots; ++k) {
        const TraceSet t = simulate_shot(layout, noise, ramp, derive_seed(seed, k), topt);
        const std::string path = f.trace + "_q" + std::to_string(c) + "_" + std::to_string(k) + ".csv";
        auto os = open_out(path);
        os << 't';
        for (std::size_t q = 0; q < layout.size(); ++q) os << ",Iq_" << (q + 1);
        os << '\n';
        for (std::size_t s = 0; s < t.time.size(); ++s) {
          os << format_double(t.time[s]);
          for (std::size_t q = 0; q < layout.size(); ++q) os << ',' << format_double(t.iq[q][s]);
          os << '\n';
        }
      }
      out << "traces " << f.trace << "_q" << int(c) << "_<shot>.csv\n";
    }
  }
  out << summarize_table("(s1,s2)", columns, {"(-1,-1)", "(-1,+1)", "(+1,-1)", "(+1,+1)"});
  return all_valid ? kExitOk : kExitVerify;
}

// ---------------------------------------------------------------------------

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Instability: return kExitInstability;
    case ErrorKind::Synthesis: return kExitVerify;
    default: return kExitData;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ising-model factoring toolkit: gate models, multiplier networks, annealing, flux-qubit circuits"};
  app.name("qafactor");
  app.require_subcommand(1);
  std::function<int()> action;

  // gates emit
  auto* gates = app.add_subcommand("gates", "Gate penalty models");
  gates->require_subcommand(1);
  auto* emit = gates->add_subcommand("emit", "Write a gate model and its ports");
  std::string gate_kind, emit_prefix;
  emit->add_option("kind", gate_kind, "nor | and | half-adder | mult-unit")->required();
  emit->add_option("-o,--out", emit_prefix, "Write PREFIX.model and PREFIX.ports instead of stdout");
  emit->callback([&] { action = [&] { return cmd_gates_emit(gate_kind, emit_prefix, out); }; });

  // synth mult
  auto* synth = app.add_subcommand("synth", "Network synthesis");
  synth->require_subcommand(1);
  auto* mult = synth->add_subcommand("mult", "Array multiplier network");
  std::size_t sa = 2, sb = 2;
  bool s_chains = false;
  double s_strength = 1.0;
  std::string synth_prefix;
  mult->add_option("--bits-a", sa, "Width of factor A")->required()->check(CLI::PositiveNumber);
  mult->add_option("--bits-b", sb, "Width of factor B")->required()->check(CLI::PositiveNumber);
  mult->add_flag("--chains", s_chains, "Insert a chain qubit into every inter-cell wire");
  mult->add_option("--chain-strength", s_strength, "|J| of inter-cell wires")->check(CLI::PositiveNumber);
  mult->add_option("-o,--out", synth_prefix, "Write PREFIX.model and PREFIX.roles instead of stdout");
  mult->callback([&] { action = [&] { return cmd_synth_mult(sa, sb, s_chains, s_strength, synth_prefix, out); }; });

  // anneal
  auto* anneal = app.add_subcommand("anneal", "Anneal a model file");
  std::string a_model, a_roles;
  std::vector<std::string> a_clamps;
  std::optional<double> a_ref;
  bool a_exact = false;
  AnnealFlags a_flags;
  anneal->add_option("model", a_model, "Model file")->required();
  anneal->add_option("--roles", a_roles, "Role sidecar; histogram keyed by M,N,P");
  anneal->add_option("--clamp", a_clamps, "Fold-clamp SPIN=BIT (repeatable)");
  anneal->add_option("--reference-e0", a_ref, "Ground energy of the unclamped model's clamped sector");
  anneal->add_flag("--exact-reference", a_exact, "Brute-force the reference energy");
  a_flags.add_to(*anneal);
  anneal->callback(
      [&] { action = [&] { return cmd_anneal(a_model, a_roles, a_clamps, a_ref, a_exact, a_flags, out); }; });

  // factor
  auto* factor = app.add_subcommand("factor", "Factor P by annealing a multiplier with the product clamped");
  std::uint64_t f_p = 0;
  std::optional<std::size_t> f_a, f_b;
  std::string f_method = "fold";
  double f_bias = kDefaultProductBias;
  bool f_chains = false;
  AnnealFlags f_flags;
  factor->add_option("P", f_p, "Integer to factor")->required();
  factor->add_option("--bits-a", f_a, "Width of factor A (default: bit length of P)")->check(CLI::PositiveNumber);
  factor->add_option("--bits-b", f_b, "Width of factor B (default: bit length of P)")->check(CLI::PositiveNumber);
  factor->add_option("--clamp-method", f_method, "fold or bias")->check(CLI::IsMember({"fold", "bias"}));
  factor->add_option("--bias", f_bias, "Product bias strength for --clamp-method bias")->check(CLI::PositiveNumber);
  factor->add_flag("--chains", f_chains, "Insert interconnect chain qubits");
  f_flags.add_to(*factor);
  factor->callback(
      [&] { action = [&] { return cmd_factor(f_p, f_a, f_b, f_method, f_bias, f_chains, f_flags, out); }; });

  // multiply
  auto* multiply = app.add_subcommand("multiply", "Multiply M by N with both factors clamped");
  std::uint64_t m_m = 0, m_n = 0;
  std::optional<std::size_t> m_a, m_b;
  bool m_chains = false;
  AnnealFlags m_flags;
  multiply->add_option("M", m_m, "First factor")->required();
  multiply->add_option("N", m_n, "Second factor")->required();
  multiply->add_option("--bits-a", m_a, "Width of M (default: its bit length)")->check(CLI::PositiveNumber);
  multiply->add_option("--bits-b", m_b, "Width of N (default: its bit length)")->check(CLI::PositiveNumber);
  multiply->add_flag("--chains", m_chains, "Insert interconnect chain qubits");
  m_flags.add_to(*multiply);
  multiply->callback(
      [&] { action = [&] { return cmd_multiply(m_m, m_n, m_a, m_b, m_chains, m_flags, out); }; });

  // verify
  auto* verify = app.add_subcommand("verify", "Exhaustive ground-state report for a model file");
  std::string v_model, v_ports, v_expect;
  std::size_t v_cap = kDefaultBruteForceCap;
  verify->add_option("model", v_model, "Model file")->required();
  verify->add_option("--ports", v_ports, "Ports sidecar used with --expect");
  verify->add_option("--expect", v_expect, "Check the ground manifold: nor | and | mult-unit");
  verify->add_option("--max-spins", v_cap, "Brute-force size cap");
  verify->callback([&] { action = [&] { return cmd_verify(v_model, v_ports, v_expect, v_cap, out); }; });

  // circuit nor-inverse
  auto* circuit = app.add_subcommand("circuit", "Circuit-level flux-qubit simulations");
  circuit->require_subcommand(1);
  auto* norinv = circuit->add_subcommand("nor-inverse", "Inverse-NOR ensemble with the output clamped");
  CircuitFlags c_flags;
  norinv->add_option("--clamp", c_flags.clamp, "Output bit: 0, 1 or both")->check(CLI::IsMember({"0", "1", "both"}));
  norinv->add_option("--mode", c_flags.mode, "control (extra qubit) or direct (bias on Q3)")
      ->check(CLI::IsMember({"control", "direct"}));
  norinv->add_option("--shots", c_flags.shots, "Shots per clamp setting")->check(CLI::PositiveNumber);
  norinv->add_option("--seed", c_flags.seed, "Master seed (random if omitted)");
  norinv->add_option("--ramp-ns", c_flags.ramp_ns, "Transverse-flux ramp duration")->check(CLI::NonNegativeNumber);
  norinv->add_option("--hold-ns", c_flags.hold_ns, "Hold after the ramp")->check(CLI::NonNegativeNumber);
  norinv->add_option("--dt-fs", c_flags.dt_fs, "Integrator step")->check(CLI::PositiveNumber);
  norinv->add_option("--noise-sigma", c_flags.noise_sigma_ua, "Noise current std in uA")
      ->check(CLI::NonNegativeNumber);
  norinv->add_option("--noise-rate-thz", c_flags.noise_rate_thz, "Noise sample rate; each value is held 1/rate")
      ->check(CLI::PositiveNumber);
  norinv->add_option("--threads", c_flags.threads, "Worker threads (0 = OpenMP default)")
      ->check(CLI::NonNegativeNumber);
  norinv->add_option("--trace", c_flags.trace, "Write per-shot waveforms to PREFIX_q<clamp>_<shot>.csv");
  norinv->add_option("--decimate", c_flags.decimate, "Keep every k-th integrator step in traces")
      ->check(CLI::PositiveNumber);
  norinv->callback([&] { action = [&] { return cmd_circuit_nor_inverse(c_flags, out); }; });

  // capacity
  auto* capacity = app.add_subcommand("capacity", "Units per chip and largest multiplier over many chips");
  CapacityInput cap;
  capacity->add_option("--unit-width-um", cap.unit_width_um, "Unit cell width");
  capacity->add_option("--unit-height-um", cap.unit_height_um, "Unit cell height");
  capacity->add_option("--chip-mm", cap.chip_edge_mm, "Chip edge length");
  capacity->add_option("--margin-um", cap.margin_um, "Unused margin per chip edge");
  capacity->add_option("--chips", cap.chips, "Number of chips");
  capacity->add_option("--qubits-per-unit", cap.qubits_per_unit, "Qubits per unit cell");
  capacity->callback([&] {
    action = [&] {
      out << estimate_capacity(cap).to_text();
      return static_cast<int>(kExitOk);
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace qaf::cli
