#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spinchain/spectrum.hpp"

namespace spinchain {

using cplx = std::complex<double>;

/// One rf pulse. Frequencies in units of omega0, duration dimensionless
/// (physical duration tau / omega0). The drive phase is theta = omega * s + phase
/// where s is the time elapsed since the pulse started.
struct PulseSpec {
  double omega = 0;
  double phase = 0;
  double rabi = 0;
  double tau = 0;

  void validate() const;
};

/// Interaction-picture amplitudes a_xi = C_xi exp(+i E_xi t) at the global
/// dimensionless time `time`; C_xi are the laboratory-frame amplitudes.
class StateVector {
 public:
  StateVector() = default;
  StateVector(unsigned n_qubits, Eigen::VectorXcd amplitudes, double time = 0.0);

  static StateVector basis(const BasisState& state, double time = 0.0);

  unsigned size() const { return n_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Eigen::VectorXcd& amplitudes() { return amplitudes_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  double norm() const { return amplitudes_.norm(); }
  Eigen::VectorXd populations() const { return amplitudes_.cwiseAbs2(); }
  double population(const BasisState& s) const { return std::norm(amplitudes_(s.index())); }

  /// Laboratory amplitudes C_xi given the spectrum of the chain.
  Eigen::VectorXcd lab_amplitudes(const EnergySpectrum& spectrum) const;
  static StateVector from_lab(unsigned n_qubits, const Eigen::VectorXcd& lab, const EnergySpectrum& spectrum,
                              double time);

 private:
  unsigned n_ = 0;
  Eigen::VectorXcd amplitudes_;
  double time_ = 0;
};

struct IntegratorOptions {
  /// Fixed step chosen so that max(omega_j, |omega_rf|) * h <= max_phase_step.
  double max_phase_step = 0.05;
  /// Explicit step override (dimensionless time); wins over max_phase_step.
  std::optional<double> step;
  /// Step-doubling adaptive RK4 instead of the fixed grid.
  bool adaptive = false;
  double tolerance = 1e-11;
  double min_step = 1e-12;

  double step_for(const ChainSpec& chain, const PulseSpec& pulse) const;
};

/// Populations on a uniform time grid over one pulse.
struct TraceRecord {
  std::vector<double> tau;
  std::vector<BasisState> labels;
  Eigen::MatrixXd populations;  // rows: samples, columns: labels

  void write_csv(std::ostream& os) const;
};

struct Evolution {
  StateVector state;
  std::optional<TraceRecord> trace;
  std::size_t steps = 0;
  double max_norm_deviation = 0;  // largest | ||a|| - 1 | over accepted steps
  std::vector<std::string> warnings;
};

/// Integrates i da_d/dt = sum_x a_x exp(i (E_d - E_x) t) W_dx(t) over one pulse,
/// with W coupling each state to its N single-flip neighbours. With `samples`
/// set, records all populations at `samples` evenly spaced times including both ends.
Evolution evolve(const ChainSpec& chain, const PulseSpec& pulse, const StateVector& psi0,
                 const IntegratorOptions& options = {}, std::optional<std::size_t> samples = std::nullopt);

/// Same dynamics in the laboratory frame (i dC/dt = (H0 + W(t)) C), integrated by
/// a symmetric split-operator scheme composed to fourth order. Returns
/// interaction-picture amplitudes for comparison with evolve().
StateVector evolve_schrodinger(const ChainSpec& chain, const PulseSpec& pulse, const StateVector& psi0,
                               const IntegratorOptions& options = {});

/// Left fold of evolve(); each pulse starts where the previous one ended.
StateVector apply_pulse_sequence(const ChainSpec& chain, std::span<const PulseSpec> pulses,
                                 const StateVector& psi0, const IntegratorOptions& options = {});

/// Sense of rotation of the drive phase in the hand-written two-qubit system.
enum class DriveSense {
  AsPrinted,   // phases exp(-+i(theta + dE t)) on lowering/raising terms
  CoRotating,  // phases exp(+-i theta -+ i dE t), the sense evolve() uses
};

struct TwoQubitParams {
  double omega1 = 0;
  double omega2 = 0;
  double j = 0;
  double rabi = 0;
  double omega = 0;
  double phase = 0;
  DriveSense sense = DriveSense::CoRotating;
};

/// The explicit four-amplitude system for |00>, |01>, |10>, |11> with its own
/// energies and integrator. Used to cross-check the general engine.
std::array<cplx, 4> evolve_two_qubit_explicit(const TwoQubitParams& params, const std::array<cplx, 4>& a0,
                                              double tau, double step = 1e-3);

}  // namespace spinchain
