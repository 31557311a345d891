#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinchain/dynamics.hpp"

namespace spinchain {

/// Two candidate CNOT drive frequencies: omega_1 - J/2, or the |10>-|11>
/// energy gap of the diagonal spectrum (omega_1 + J/2).
enum class CnotConvention { PaperEq26, SpectrumGap };

std::string to_string(CnotConvention c);
CnotConvention convention_from_string(const std::string& text);

/// NOT (pi rotation) on one site, resonant with its bare Larmor frequency.
/// Sites are 1-based.
PulseSpec not_pulse(const ChainSpec& chain, unsigned site, double rabi, double phase = 0.0);

/// Pi pulse on the |10> <-> |11> transition of a two-qubit chain.
PulseSpec cnot_pulse(const ChainSpec& chain, CnotConvention convention, double rabi, double phase = 0.0);

/// |<ideal|real>|^2, clamped to [0, 1] against rounding.
double fidelity(const StateVector& real, const StateVector& ideal);
double fidelity(const StateVector& real, const BasisState& ideal);

struct GateOutcome {
  StateVector final_state;
  double fidelity = 0;
  PulseSpec pulse_used;
  BasisState target;
  std::optional<CnotConvention> convention;

  nlohmann::json to_json() const;
};

GateOutcome run_gate(const ChainSpec& chain, const PulseSpec& pulse, const BasisState& initial,
                     const BasisState& ideal, const IntegratorOptions& options = {});

struct ScanPoint {
  double omega = 0;
  double fidelity = 0;
};

struct ResonanceScan {
  std::vector<ScanPoint> points;
  std::size_t argmax = 0;

  const ScanPoint& best() const { return points.at(argmax); }
  double grid_step() const;
};

/// Fidelity at the end of a pi pulse (tau = pi / rabi) for each drive
/// frequency on a uniform grid over [omega_min, omega_max].
ResonanceScan resonance_scan(const ChainSpec& chain, double omega_min, double omega_max, std::size_t steps,
                             double rabi, const BasisState& initial, const BasisState& target,
                             const IntegratorOptions& options = {}, double phase = 0.0, unsigned jobs = 1);

struct ConventionCalibration {
  CnotConvention chosen = CnotConvention::SpectrumGap;
  double fidelity_paper = 0;
  double fidelity_spectrum = 0;

  nlohmann::json to_json() const;
};

/// Runs the |10> -> |11> CNOT under both conventions and keeps the better
/// one. Ties go to SpectrumGap.
ConventionCalibration calibrate_cnot_convention(const ChainSpec& chain, double rabi,
                                                const IntegratorOptions& options = {});

}  // namespace spinchain
