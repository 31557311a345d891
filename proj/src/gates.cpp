#include "spinchain/gates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spinchain/parallel.hpp"

namespace spinchain {

namespace {

double pi_duration(double rabi) {
  if (!(rabi > 0)) throw std::invalid_argument("a pi pulse needs a positive Rabi frequency");
  return constants::pi / rabi;
}

}  // namespace

std::string to_string(CnotConvention c) { return c == CnotConvention::PaperEq26 ? "paper" : "spectrum"; }

CnotConvention convention_from_string(const std::string& text) {
  if (text == "paper") return CnotConvention::PaperEq26;
  if (text == "spectrum") return CnotConvention::SpectrumGap;
  throw std::invalid_argument("unknown CNOT convention '" + text + "' (expected paper or spectrum)");
}

PulseSpec not_pulse(const ChainSpec& chain, unsigned site, double rabi, double phase) {
  if (site < 1 || site > chain.size()) throw std::out_of_range("NOT target site out of range");
  return PulseSpec{chain.omega(site - 1), phase, rabi, pi_duration(rabi)};
}

PulseSpec cnot_pulse(const ChainSpec& chain, CnotConvention convention, double rabi, double phase) {
  if (chain.size() != 2) throw std::invalid_argument("CNOT pulse is defined for two-qubit chains only");
  if (chain.j1 == 0) throw std::invalid_argument("CNOT needs a non-zero coupling J");
  if (chain.j2 != 0) throw std::invalid_argument("CNOT pulse assumes J' = 0");
  const double omega = convention == CnotConvention::PaperEq26
                           ? chain.omega(0) - chain.j1 / 2
                           : transition_frequency(BasisState::from_label("10"), BasisState::from_label("11"), chain);
  return PulseSpec{omega, phase, rabi, pi_duration(rabi)};
}

double fidelity(const StateVector& real, const StateVector& ideal) {
  if (real.dim() != ideal.dim()) throw std::invalid_argument("fidelity between states of different size");
  const double f = std::norm(ideal.amplitudes().dot(real.amplitudes()));
  return std::clamp(f, 0.0, 1.0);
}

double fidelity(const StateVector& real, const BasisState& ideal) {
  if (real.size() != ideal.size()) throw std::invalid_argument("fidelity between states of different size");
  return std::clamp(real.population(ideal), 0.0, 1.0);
}

GateOutcome run_gate(const ChainSpec& chain, const PulseSpec& pulse, const BasisState& initial,
                     const BasisState& ideal, const IntegratorOptions& options) {
  GateOutcome out;
  out.final_state = evolve(chain, pulse, StateVector::basis(initial), options).state;
  out.fidelity = fidelity(out.final_state, ideal);
  out.pulse_used = pulse;
  out.target = ideal;
  return out;
}

nlohmann::json GateOutcome::to_json() const {
  nlohmann::json j;
  j["fidelity"] = fidelity;
  j["target"] = target.label();
  j["pulse"] = {{"omega_w0", pulse_used.omega},
                {"phase_rad", pulse_used.phase},
                {"rabi_w0", pulse_used.rabi},
                {"tau", pulse_used.tau}};
  j["convention"] = convention ? nlohmann::json(to_string(*convention)) : nlohmann::json(nullptr);
  nlohmann::json pops = nlohmann::json::object();
  const Eigen::VectorXd p = final_state.populations();
  for (Eigen::Index i = 0; i < p.size(); ++i)
    pops[BasisState(final_state.size(), static_cast<std::uint32_t>(i)).label()] = p(i);
  j["populations"] = pops;
  return j;
}

double ResonanceScan::grid_step() const {
  return points.size() < 2 ? 0.0 : points[1].omega - points[0].omega;
}

ResonanceScan resonance_scan(const ChainSpec& chain, double omega_min, double omega_max, std::size_t steps,
                             double rabi, const BasisState& initial, const BasisState& target,
                             const IntegratorOptions& options, double phase, unsigned jobs) {
  if (steps < 2) throw std::invalid_argument("resonance scan needs at least two grid points");
  if (!(omega_max > omega_min)) throw std::invalid_argument("resonance scan range is empty");
  const double tau = pi_duration(rabi);
  ResonanceScan scan;
  scan.points.resize(steps);
  const double dw = (omega_max - omega_min) / static_cast<double>(steps - 1);
  parallel_for(steps, jobs, [&](std::size_t i) {
    const double w = omega_min + dw * static_cast<double>(i);
    const PulseSpec pulse{w, phase, rabi, tau};
    scan.points[i] = {w, run_gate(chain, pulse, initial, target, options).fidelity};
  });
  const auto best = std::max_element(scan.points.begin(), scan.points.end(),
                                     [](const ScanPoint& a, const ScanPoint& b) { return a.fidelity < b.fidelity; });
  scan.argmax = static_cast<std::size_t>(best - scan.points.begin());
  return scan;
}

nlohmann::json ConventionCalibration::to_json() const {
  return {{"chosen", to_string(chosen)}, {"fidelity_paper", fidelity_paper}, {"fidelity_spectrum", fidelity_spectrum}};
}

ConventionCalibration calibrate_cnot_convention(const ChainSpec& chain, double rabi, const IntegratorOptions& options) {
  const auto from = BasisState::from_label("10");
  const auto to = BasisState::from_label("11");
  ConventionCalibration cal;
  cal.fidelity_paper = run_gate(chain, cnot_pulse(chain, CnotConvention::PaperEq26, rabi), from, to, options).fidelity;
  cal.fidelity_spectrum =
      run_gate(chain, cnot_pulse(chain, CnotConvention::SpectrumGap, rabi), from, to, options).fidelity;
  cal.chosen = cal.fidelity_paper > cal.fidelity_spectrum ? CnotConvention::PaperEq26 : CnotConvention::SpectrumGap;
  return cal;
}

}  // namespace spinchain
