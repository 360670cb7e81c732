#include "qafactor/flux_sim.hpp"

#include <omp.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "qafactor/gates.hpp"
#include "qafactor/model_io.hpp"
#include "qafactor/rng.hpp"

namespace qaf::flux {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw Error(ErrorKind::Range, std::string(what) + " must be positive and finite (got " + format_double(v) + ")");
}

}  // namespace

void QubitCircuitParams::validate() const {
  require_positive(Ic, "Ic");
  require_positive(R, "R");
  require_positive(C, "C");
  require_positive(L_t, "L_t");
  require_positive(L_q, "L_q");
  require_positive(L_x, "L_x");
  require_positive(M_t, "M_t");
  require_positive(M_x, "M_x");
}

double johnson_sigma(double R, double T, double bandwidth) {
  require_positive(R, "resistance");
  require_positive(T, "temperature");
  if (!(bandwidth >= 0.0) || !std::isfinite(bandwidth))
    throw Error(ErrorKind::Range, "bandwidth must be non-negative and finite");
  return std::sqrt(4.0 * kBoltzmann * T * bandwidth / R);
}

double mccumber_beta(double Ic, double R, double C) {
  require_positive(Ic, "Ic");
  require_positive(R, "R");
  require_positive(C, "C");
  return 2.0 * kPi * Ic * R * R * C / kPhi0;
}

double plasma_frequency(double Ic, double C) {
  require_positive(Ic, "Ic");
  require_positive(C, "C");
  return std::sqrt(2.0 * kPi * Ic / (kPhi0 * C)) / (2.0 * kPi);
}

// ---------------------------------------------------------------------------
// Layout

double NetworkLayout::coupler_inductance(std::size_t i) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < size(); ++j)
    if (j != i) sum += std::abs(mutual_at(i, j));
  return sum;
}

double NetworkLayout::trimmed_L_q(std::size_t i) const {
  return kMainLoopInductance - qubits[i].L_x - coupler_inductance(i);
}

double NetworkLayout::main_loop_inductance(std::size_t i) const {
  return trimmed_L_q(i) + qubits[i].L_x + coupler_inductance(i);
}

void NetworkLayout::validate() const {
  const std::size_t n = size();
  if (n == 0) throw Error(ErrorKind::Size, "layout has no qubits");
  if (bias_current.size() != n)
    throw Error(ErrorKind::Dimension, "layout has " + std::to_string(n) + " qubits but " +
                                          std::to_string(bias_current.size()) + " bias currents");
  if (mutual.size() != n * n) throw Error(ErrorKind::Dimension, "mutual matrix must be n*n");
  if (clockwise_sign != 1 && clockwise_sign != -1) throw Error(ErrorKind::Range, "clockwise_sign must be +1 or -1");
  for (std::size_t i = 0; i < n; ++i) {
    qubits[i].validate();
    if (!std::isfinite(bias_current[i])) throw Error(ErrorKind::Range, "non-finite bias current");
    if (mutual_at(i, i) != 0.0) throw Error(ErrorKind::Range, "mutual matrix diagonal must be zero");
    for (std::size_t j = 0; j < n; ++j)
      if (mutual_at(i, j) != mutual_at(j, i)) throw Error(ErrorKind::Range, "mutual matrix must be symmetric");
    if (!(trimmed_L_q(i) > 0.0))
      throw Error(ErrorKind::Range, "qubit " + std::to_string(i) + ": transformers exceed the 260 pH loop budget");
  }
}

NetworkLayout logical_to_physical(const IsingModel& model, const QubitCircuitParams& params) {
  params.validate();
  const std::size_t n = model.size();
  NetworkLayout out;
  out.qubits.assign(n, params);
  out.bias_current.resize(n);
  out.mutual.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double h = model.bias(i);
    if (std::abs(h) > kMaxAbsH)
      throw Error(ErrorKind::Range, "h[" + std::to_string(i) + "] = " + format_double(h) + " outside [-2, 2]");
    out.bias_current[i] = h * kBiasCurrentPerUnitH;
  }
  for (const auto& [key, v] : model.couplings()) {
    if (std::abs(v) > kMaxAbsJ)
      throw Error(ErrorKind::Range, "J[" + std::to_string(key.first) + "," + std::to_string(key.second) +
                                        "] = " + format_double(v) + " outside [-1, 1]");
    const double m = kMutualSign * v * kMutualPerUnitJ;
    out.mutual[key.first * n + key.second] = m;
    out.mutual[key.second * n + key.first] = m;
  }
  out.validate();
  return out;
}

IsingModel inverse_nor_model(std::uint8_t clamp_bit, ClampMode mode) {
  if (clamp_bit > 1) throw Error(ErrorKind::Range, "clamp bit must be 0 or 1");
  IsingBuilder b;
  b.append(nor_gate().model);
  if (mode == ClampMode::ControlQubit) {
    const SpinIndex q4 = b.add_spin(clamp_bit ? -kControlBias : kControlBias);
    b.add_coupling(2, q4, -1.0);
  } else {
    // Field of a frozen control spin (sigma4 = +-1) through J34 = -1.
    b.add_bias(2, clamp_bit ? -1.0 : 1.0);
  }
  return b.build();
}

// ---------------------------------------------------------------------------
// Noise and ramp

void NoiseSpec::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw Error(ErrorKind::Range, "noise sigma must be >= 0");
  require_positive(sample_rate, "noise sample rate");
}

double RampSpec::phi_t(double t) const {
  const double f = ramp > 0.0 ? std::clamp(t / ramp, 0.0, 1.0) : 1.0;
  return kPhi0 * (phi_t_start + (phi_t_end - phi_t_start) * f);
}

void RampSpec::validate(const NoiseSpec& noise) const {
  require_positive(dt, "integrator step");
  if (!(ramp >= 0.0) || !(hold >= 0.0) || !(duration() > 0.0))
    throw Error(ErrorKind::Range, "ramp and hold must be non-negative with a positive total");
  if (phi_t_start < 0.0 || phi_t_start > 0.5 || phi_t_end < 0.0 || phi_t_end > 0.5)
    throw Error(ErrorKind::Range, "transverse flux must stay within [0, Phi0/2]");
  const double sub = noise.hold() / dt;
  if (sub < 1.0 - 1e-9)
    throw Error(ErrorKind::Range, "integrator step " + format_double(dt) + " s exceeds the noise hold " +
                                      format_double(noise.hold()) + " s");
  if (std::abs(sub - std::round(sub)) > 1e-6)
    throw Error(ErrorKind::Range, "noise hold must be a whole number of integrator steps");
}

namespace {

class NoiseSource {
 public:
  NoiseSource(double sigma, std::uint64_t seed) : rng_(seed), sigma_(sigma) {}
  double next() { return sigma_ > 0.0 ? sigma_ * dist_(rng_) : 0.0; }

 private:
  ShotRng rng_;
  std::normal_distribution<double> dist_{0.0, 1.0};
  double sigma_;
};

}  // namespace

std::vector<double> noise_stream(const NoiseSpec& noise, std::uint64_t shot_seed, std::size_t junction,
                                 std::size_t count) {
  noise.validate();
  NoiseSource src(noise.sigma, derive_seed(shot_seed, junction));
  std::vector<double> out(count);
  for (auto& v : out) v = src.next();
  return out;
}

// ---------------------------------------------------------------------------
// Integration

TraceSet simulate_shot(const NetworkLayout& layout, const NoiseSpec& noise, const RampSpec& ramp,
                       std::uint64_t seed, const TraceOptions& trace) {
  layout.validate();
  noise.validate();
  ramp.validate(noise);
  if (trace.record && trace.decimate < 1) throw Error(ErrorKind::Range, "decimate must be >= 1");

  const std::size_t n = layout.size();
  const double p0 = kReducedPhi0;

  Eigen::MatrixXd K(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      K(i, j) = i == j ? layout.main_loop_inductance(i) + layout.qubits[i].L_t / 2.0 : -layout.mutual_at(i, j);
  const Eigen::MatrixXd Kinv = K.inverse();
  if (!Kinv.allFinite()) throw Error(ErrorKind::Instability, "inductance matrix is singular");

  Eigen::VectorXd drive(n);  // Phi_b + Phi0/2
  for (std::size_t i = 0; i < n; ++i) drive(i) = layout.flux_bias(i) + kPhi0 / 2.0;

  // Start at the single-well minimum of the fully suppressed barrier.
  Eigen::VectorXd pp = drive / p0, pm = Eigen::VectorXd::Constant(n, kPi * ramp.phi_t_start);
  Eigen::VectorXd vp = Eigen::VectorXd::Zero(n), vm = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd iq(n);

  std::vector<NoiseSource> sources;
  sources.reserve(2 * n);
  for (std::size_t k = 0; k < 2 * n; ++k) sources.emplace_back(noise.sigma, derive_seed(seed, k));
  std::vector<double> inoise(2 * n, 0.0);

  const double dt = ramp.dt;
  const auto substeps = static_cast<std::size_t>(std::llround(noise.hold() / dt));
  const auto steps = static_cast<std::size_t>(std::llround(ramp.duration() / dt));
  double vmax = 0.0;
  for (const auto& q : layout.qubits) vmax = std::max(vmax, 10.0 * 2.0 * kPi * q.Ic * q.R / kPhi0);

  TraceSet out;
  out.seed = seed;
  auto record = [&](double t) {
    out.time.push_back(t);
    for (std::size_t i = 0; i < n; ++i) {
      out.iq[i].push_back(iq(i));
      out.phase[2 * i].push_back(pp(i) + pm(i));
      out.phase[2 * i + 1].push_back(pp(i) - pm(i));
    }
  };
  if (trace.record) {
    out.iq.assign(n, {});
    out.phase.assign(2 * n, {});
  }

  for (std::size_t s = 0; s < steps; ++s) {
    const double t = static_cast<double>(s) * dt;
    if (s % substeps == 0) {
      for (std::size_t k = 0; k < 2 * n; ++k) inoise[k] = sources[k].next();
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(pp(i)) || !std::isfinite(pm(i)) || std::abs(vp(i)) + std::abs(vm(i)) > vmax)
          throw Error(ErrorKind::Instability, "integration diverged at t=" + format_double(t) + " s, step " +
                                                  std::to_string(s) + ", qubit " + std::to_string(i) +
                                                  " (dt=" + format_double(dt) + " s)");
      }
    }
    iq.noalias() = Kinv * (drive - p0 * pp);
    if (trace.record && s % trace.decimate == 0) record(t);

    const double phit = ramp.phi_t(t);
    for (std::size_t i = 0; i < n; ++i) {
      const QubitCircuitParams& q = layout.qubits[i];
      const double icirc = (phit - 2.0 * p0 * pm(i)) / (2.0 * q.L_t);
      const double i1 = 0.5 * iq(i) + icirc + inoise[2 * i] - q.Ic * std::sin(pp(i) + pm(i));
      const double i2 = 0.5 * iq(i) - icirc + inoise[2 * i + 1] - q.Ic * std::sin(pp(i) - pm(i));
      double v1 = vp(i) + vm(i), v2 = vp(i) - vm(i);
      v1 += dt * (i1 - p0 / q.R * v1) / (q.C * p0);
      v2 += dt * (i2 - p0 / q.R * v2) / (q.C * p0);
      vp(i) = 0.5 * (v1 + v2);
      vm(i) = 0.5 * (v1 - v2);
    }
    pp += dt * vp;
    pm += dt * vm;
  }

  iq.noalias() = Kinv * (drive - p0 * pp);
  if (!iq.allFinite()) throw Error(ErrorKind::Instability, "non-finite loop current at read-out");
  if (trace.record) record(static_cast<double>(steps) * dt);
  out.final_iq.assign(iq.data(), iq.data() + n);
  for (std::size_t i = 0; i < n; ++i) {
    out.final_phase.push_back(pp(i) + pm(i));
    out.final_phase.push_back(pp(i) - pm(i));
    out.bits.push_back(layout.clockwise_sign * iq(i) > 0.0 ? 1 : 0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ensembles

namespace {

std::string bits_key(const std::vector<std::uint8_t>& bits) {
  std::string s;
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

EnsembleResult collect(std::vector<TraceSet>& shots, std::uint64_t master_seed) {
  EnsembleResult r;
  r.shots = shots.size();
  r.master_seed = master_seed;
  for (auto& t : shots) {
    ++r.counts[bits_key(t.bits)];
    r.bits.push_back(std::move(t.bits));
    r.final_iq.push_back(std::move(t.final_iq));
  }
  return r;
}

void check_shots(std::size_t shots) {
  if (shots < 1) throw Error(ErrorKind::Range, "need at least one shot");
}

}  // namespace

EnsembleResult run_ensemble(const NetworkLayout& layout, const NoiseSpec& noise, const RampSpec& ramp,
                            std::size_t shots, std::uint64_t master_seed, int threads) {
  check_shots(shots);
  layout.validate();
  noise.validate();
  ramp.validate(noise);
  std::vector<TraceSet> results(shots);
  std::vector<std::string> errors(shots);
  const int nt = threads > 0 ? threads : omp_get_max_threads();
  const auto n = static_cast<std::ptrdiff_t>(shots);
#pragma omp parallel for schedule(dynamic) num_threads(nt)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto shot = static_cast<std::size_t>(k);
    try {
      results[shot] = simulate_shot(layout, noise, ramp, derive_seed(master_seed, shot));
    } catch (const Error& e) {
      errors[shot] = "shot " + std::to_string(shot) + ": " + e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw Error(ErrorKind::Instability, e);
  return collect(results, master_seed);
}

EnsembleResult run_ensemble_serial(const NetworkLayout& layout, const NoiseSpec& noise, const RampSpec& ramp,
                                   std::size_t shots, std::uint64_t master_seed) {
  check_shots(shots);
  std::vector<TraceSet> results;
  results.reserve(shots);
  for (std::size_t k = 0; k < shots; ++k) results.push_back(simulate_shot(layout, noise, ramp, derive_seed(master_seed, k)));
  return collect(results, master_seed);
}

std::string EnsembleResult::to_text() const {
  std::ostringstream os;
  os << "shots " << shots << '\n';
  os << "master_seed " << master_seed << '\n';
  for (const auto& [key, n] : counts) os << "count " << key << ' ' << n << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Static potential

StaticPotential static_potential(const NetworkLayout& layout, std::size_t qubit, double phi_t, double phi_x,
                                 std::size_t samples) {
  layout.validate();
  if (qubit >= layout.size()) throw Error(ErrorKind::Range, "qubit index " + std::to_string(qubit) + " out of range");
  if (samples < 3) throw Error(ErrorKind::Range, "need at least 3 samples");
  const QubitCircuitParams& q = layout.qubits[qubit];
  const double p0 = kReducedPhi0;
  const double leff = layout.main_loop_inductance(qubit) + q.L_t / 2.0;
  const double drive = phi_x + kPhi0 / 2.0;
  const double center = drive / p0;

  StaticPotential out;
  double pm = phi_t / (2.0 * p0);
  for (std::size_t k = 0; k < samples; ++k) {
    const double pp = center - 3.0 * kPi + 6.0 * kPi * static_cast<double>(k) / static_cast<double>(samples - 1);
    const double cp = std::cos(pp);
    // The SQUID term is strictly convex in p- (2 phi0 / L_t >> 2 Ic), so Newton
    // from the previous sample converges to the unique minimum.
    for (int it = 0; it < 50; ++it) {
      const double g = -p0 * (phi_t - 2.0 * p0 * pm) / q.L_t + 2.0 * p0 * q.Ic * cp * std::sin(pm);
      const double hss = 2.0 * p0 * p0 / q.L_t + 2.0 * p0 * q.Ic * cp * std::cos(pm);
      const double step = g / hss;
      pm -= step;
      if (std::abs(step) < 1e-14) break;
    }
    const double loop = drive - p0 * pp;
    const double circ = phi_t - 2.0 * p0 * pm;
    out.loop_flux.push_back(p0 * pp);
    out.energy.push_back(loop * loop / (2.0 * leff) + circ * circ / (4.0 * q.L_t) -
                         2.0 * p0 * q.Ic * cp * std::cos(pm));
  }
  // Strict local minima, with a relative tolerance so a flat single well does
  // not register rounding ripples as extra equilibria.
  double scale = 0.0;
  for (double e : out.energy) scale = std::max(scale, std::abs(e));
  const double tol = 1e-12 * scale;
  for (std::size_t k = 1; k + 1 < samples; ++k) {
    if (out.energy[k] < out.energy[k - 1] - tol && out.energy[k] < out.energy[k + 1] - tol) {
      out.minima_iq.push_back((drive - out.loop_flux[k]) / leff);
      out.minima_energy.push_back(out.energy[k]);
    }
  }
  out.equilibria = out.minima_iq.size();
  if (out.equilibria > 0) {
    const auto best = static_cast<std::size_t>(
        std::min_element(out.minima_energy.begin(), out.minima_energy.end()) - out.minima_energy.begin());
    out.dominant_iq = out.minima_iq[best];
    double next = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < out.equilibria; ++k)
      if (k != best) next = std::min(next, out.minima_energy[k]);
    out.dominant_margin = std::isfinite(next) ? next - out.minima_energy[best] : 0.0;
  }
  return out;
}

}  // namespace qaf::flux
