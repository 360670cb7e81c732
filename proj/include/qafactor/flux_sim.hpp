#pragma once

// Transient simulation of coupled compound-junction flux qubits with
// classical Johnson-noise current sources across every junction.
//
// Each qubit is a main loop (L_q + L_x plus attached coupling transformers,
// 260 pH in total) closed by a two-junction SQUID whose arms carry L_t each.
// With junction phases p1, p2 and phi0 = Phi0 / 2pi we use
//   p+ = (p1 + p2) / 2   (main-loop flux coordinate)
//   p- = (p1 - p2) / 2   (SQUID circulating coordinate)
// and, for the qubit vector,
//   K I_q = Phi_b + Phi0/2 - phi0 p+,      K = (L_loop + L_t/2) 1 - M
//   I_c   = (Phi_t - 2 phi0 p-) / (2 L_t)
//   arm currents I_1,2 = I_q/2 +- I_c.
// Each junction obeys C phi0 p'' + (phi0/R) p' + Ic sin p = I_arm + I_noise.
// Phi_b is the logical flux bias M_x I_x measured from the built-in Phi0/2
// degeneracy point, and Phi_t is the transverse (barrier) flux M_t I_t.
// Phi_t = Phi0/2 cancels the Josephson term (single well); Phi_t = 0 gives
// a double well with I_q = +-I*.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qafactor/ising.hpp"

namespace qaf::flux {

inline constexpr double kPhi0 = 2.067833848e-15;     // Wb
inline constexpr double kBoltzmann = 1.380649e-23;   // J/K
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kReducedPhi0 = kPhi0 / (2.0 * kPi);

inline constexpr double kMainLoopInductance = 260e-12;  // H, held for every qubit
inline constexpr double kBiasCurrentPerUnitH = 10.5e-6;  // A per unit of h
inline constexpr double kMutualPerUnitJ = 8e-12;          // H per unit of |J|
/// M_ij = kMutualSign * J_ij * kMutualPerUnitJ. Fixed by a two-qubit
/// calibration run: positive mutual anti-aligns the circulating currents.
inline constexpr double kMutualSign = +1.0;
inline constexpr double kMaxAbsH = 2.0;
inline constexpr double kMaxAbsJ = 1.0;

struct QubitCircuitParams {
  double Ic = 4e-6;
  double R = 3.2e3;
  double C = 17e-15;
  double L_t = 5e-12;
  double L_q = 250e-12;
  double L_x = 10e-12;
  double M_t = 2e-12;
  double M_x = 4e-12;

  void validate() const;
};

double johnson_sigma(double R, double T, double bandwidth);
/// 2 pi Ic R^2 C / Phi0.
double mccumber_beta(double Ic, double R, double C);
/// sqrt(2 pi Ic / (Phi0 C)) / 2 pi, in Hz.
double plasma_frequency(double Ic, double C);

struct NetworkLayout {
  std::vector<QubitCircuitParams> qubits;
  std::vector<double> bias_current;  // I_x per qubit (A)
  std::vector<double> mutual;        // n*n row-major, symmetric, zero diagonal (H)
  /// Read-out bit is 1 iff clockwise_sign * I_q > 0.
  int clockwise_sign = +1;

  std::size_t size() const { return qubits.size(); }
  double mutual_at(std::size_t i, std::size_t j) const { return mutual[i * size() + j]; }
  double flux_bias(std::size_t i) const { return qubits[i].M_x * bias_current[i]; }
  /// Sum of |M_ij| over attached coupling transformers.
  double coupler_inductance(std::size_t i) const;
  /// L_q after trimming for the transformers so the loop total is 260 pH.
  double trimmed_L_q(std::size_t i) const;
  /// Always kMainLoopInductance; computed from the trimmed parts.
  double main_loop_inductance(std::size_t i) const;

  void validate() const;
};

/// h -> I_x and J -> M_ij with the unit magnitudes above. Throws Range for
/// |h| > 2 or |J| > 1.
NetworkLayout logical_to_physical(const IsingModel& model, const QubitCircuitParams& params = {});

enum class ClampMode {
  ControlQubit,  // extra qubit Q4 with h4 = +-1.1, J34 = -1
  DirectBias,    // Q3 bias shifted by the frozen control qubit's field
};
inline constexpr double kControlBias = 1.1;

/// Logical model of the inverse NOR: Q1..Q3 form the NOR block and the
/// output Q3 is held at `clamp_bit`.
IsingModel inverse_nor_model(std::uint8_t clamp_bit, ClampMode mode = ClampMode::ControlQubit);

struct NoiseSpec {
  double sigma = 0.13e-6;       // A per sample
  double sample_rate = 2e12;    // Hz; each value is held for 1 / sample_rate
  double temperature = 1.0;     // K, provenance for sigma
  double bandwidth = 1e12;      // Hz, provenance for sigma

  double hold() const { return 1.0 / sample_rate; }
  void validate() const;
};

struct RampSpec {
  double ramp = 2e-9;        // s, linear Phi_t sweep
  double hold = 0.2e-9;      // s, flat tail before read-out
  double dt = 0.05e-12;      // s, integrator step
  double phi_t_start = 0.5;  // Phi_t / Phi0 at t = 0
  double phi_t_end = 0.0;    // Phi_t / Phi0 after the ramp

  double duration() const { return ramp + hold; }
  /// Transverse flux (Wb) at time t.
  double phi_t(double t) const;
  void validate(const NoiseSpec& noise) const;
};

struct TraceOptions {
  bool record = false;
  std::size_t decimate = 10;  // keep every k-th integrator step
};

struct TraceSet {
  std::vector<double> time;                // s, recorded samples
  std::vector<std::vector<double>> iq;     // [qubit][sample], A
  std::vector<std::vector<double>> phase;  // [junction][sample], rad; junctions 2q, 2q+1
  std::vector<double> final_iq;
  std::vector<double> final_phase;
  std::vector<std::uint8_t> bits;
  std::uint64_t seed = 0;
};

/// Integrate one shot. Noise for junction k comes from its own stream seeded
/// by derive_seed(seed, k). Throws Error(Instability) on divergence.
TraceSet simulate_shot(const NetworkLayout& layout, const NoiseSpec& noise, const RampSpec& ramp,
                       std::uint64_t seed, const TraceOptions& trace = {});

/// Held noise samples of one junction over `count` intervals.
std::vector<double> noise_stream(const NoiseSpec& noise, std::uint64_t shot_seed, std::size_t junction,
                                 std::size_t count);

struct EnsembleResult {
  std::size_t shots = 0;
  std::uint64_t master_seed = 0;
  std::map<std::string, std::uint64_t> counts;  // key: bits of every qubit, Q1 first
  std::vector<std::vector<std::uint8_t>> bits;  // per shot
  std::vector<std::vector<double>> final_iq;    // per shot

  std::string to_text() const;
};

EnsembleResult run_ensemble(const NetworkLayout& layout, const NoiseSpec& noise, const RampSpec& ramp,
                            std::size_t shots, std::uint64_t master_seed, int threads = 0);
EnsembleResult run_ensemble_serial(const NetworkLayout& layout, const NoiseSpec& noise, const RampSpec& ramp,
                                   std::size_t shots, std::uint64_t master_seed);

struct StaticPotential {
  std::vector<double> loop_flux;  // phi0 * p+ (Wb), sampled
  std::vector<double> energy;     // J, minimized over p- at each sample
  std::vector<double> minima_iq;  // I_q at each local minimum (A), ascending flux
  std::vector<double> minima_energy;
  std::size_t equilibria = 0;
  /// Deepest minimum and its depth below the next-lowest one (0 if unique).
  double dominant_iq = 0.0;
  double dominant_margin = 0.0;
};

/// One qubit with neighbours frozen: the total external flux is `phi_x`
/// (measured from the degeneracy point), the transverse flux `phi_t`.
/// Samples the loop flux 1.5 flux quanta either side of the biased
/// single-well position. With the default parameters the loop is deep enough
/// (2 L Ic / phi0 ~ 6.4) that a strong bias tilts the wells rather than
/// removing one, so the bias side shows up as the dominant well.
StaticPotential static_potential(const NetworkLayout& layout, std::size_t qubit, double phi_t, double phi_x,
                                 std::size_t samples = 4001);

}  // namespace qaf::flux
