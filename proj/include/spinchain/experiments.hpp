#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinchain/gates.hpp"

namespace spinchain {

inline constexpr const char* kCodeVersion = "spinchain 1.0.0";

/// Laboratory parameters plus the model-level knobs that are not derived from them.
struct Scenario {
  PhysicalParams physics;
  std::size_t n_qubits = 2;
  double j2 = 0.0;
  /// Drive strength in units of omega0; when unset it follows physics.b_rf.
  std::optional<double> rabi;

  ChainSpec chain() const { return make_chain(physics, n_qubits, j2); }
  double rabi_w0() const { return rabi ? *rabi : rabi_frequency(physics.b_rf, physics); }

  /// Two qubits at B0 = 0.5 T, xi = 1 (J ~ 0.12), f = 0.05, driven at
  /// Omega = 0.0693 so the detuned control-0 transition completes a full cycle.
  static Scenario cnot_reference();
  /// The design point: xi = 3, b_rf = 0.00608 T.
  static Scenario design_point();

  nlohmann::json to_json() const;
};

struct RunOptions {
  IntegratorOptions integrator;
  unsigned jobs = 1;
  std::optional<CnotConvention> convention;  // unset: calibrate
};

/// Uniform grid [min, max] with count points.
struct Grid {
  double min = 0;
  double max = 0;
  std::size_t count = 0;

  std::vector<double> values() const;
};

/// Convention from the options, or a calibration run on the scenario.
ConventionCalibration resolve_convention(const Scenario& scenario, const RunOptions& options);

struct TraceRun {
  TraceRecord trace;
  GateOutcome outcome;
  ConventionCalibration calibration;
};

/// Populations of all four states over one CNOT pi pulse starting from |10>.
TraceRun trace_cnot(const Scenario& scenario, const RunOptions& options, std::size_t samples = 401);

struct SweepSpec {
  Scenario scenario = Scenario::cnot_reference();
  std::vector<double> grid;  // swept values, strictly increasing
  std::vector<double> f_values{0.01, 0.05, 0.1, 0.2};
  std::vector<double> b0_values{0.1, 0.5};
  BasisState initial = BasisState::from_label("10");
  BasisState ideal = BasisState::from_label("11");

  void validate() const;
};

struct SweepResult {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json metadata;

  std::vector<double> column(const std::string& name) const;
  void write_csv(std::ostream& os) const;
};

SweepSpec default_rabi_sweep();
SweepSpec default_separation_sweep();

/// CNOT fidelity at the end of a pi pulse against Omega, one curve per (B0, f).
/// Columns: b0_tesla, f, omega_rabi_w0, fidelity.
SweepResult sweep_rabi(const SweepSpec& spec, const RunOptions& options);

/// CNOT fidelity against the separation factor with fields held fixed.
/// Columns: xi, j_w0, gradient_t_per_m, fidelity.
SweepResult sweep_separation(const SweepSpec& spec, const RunOptions& options);

/// Strict interior local maxima of a sampled curve.
std::size_t count_local_maxima(const std::vector<double>& values);

}  // namespace spinchain
