#include "spinchain/experiments.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "spinchain/parallel.hpp"

namespace spinchain {

namespace {

nlohmann::json integrator_json(const IntegratorOptions& o) {
  nlohmann::json j;
  j["scheme"] = o.adaptive ? "rk4-step-doubling" : "rk4-fixed";
  j["max_phase_step"] = o.max_phase_step;
  j["step"] = o.step ? nlohmann::json(*o.step) : nlohmann::json(nullptr);
  if (o.adaptive) j["tolerance"] = o.tolerance;
  return j;
}

nlohmann::json base_metadata(const std::string& kind, const SweepSpec& spec, const RunOptions& options,
                             const ConventionCalibration& cal, bool calibrated) {
  nlohmann::json m;
  m["kind"] = kind;
  m["code_version"] = kCodeVersion;
  m["convention"] = to_string(cal.chosen);
  m["convention_source"] = calibrated ? "calibrated" : "fixed";
  if (calibrated) m["calibration"] = cal.to_json();
  m["integrator"] = integrator_json(options.integrator);
  m["scenario"] = spec.scenario.to_json();
  m["initial"] = spec.initial.label();
  m["ideal"] = spec.ideal.label();
  return m;
}

}  // namespace

Scenario Scenario::cnot_reference() {
  Scenario s;
  s.physics.b0 = 0.5;
  s.physics.xi = 1.0;
  s.physics.f = 0.05;
  s.n_qubits = 2;
  s.rabi = 0.0693;
  return s;
}

Scenario Scenario::design_point() {
  Scenario s;
  s.physics.b0 = 0.5;
  s.physics.xi = 3.0;
  s.physics.f = 0.05;
  s.physics.b_rf = 0.00608;
  s.n_qubits = 2;
  return s;
}

nlohmann::json Scenario::to_json() const {
  return {{"gamma", physics.gamma},
          {"b0_tesla", physics.b0},
          {"b_rf_tesla", physics.b_rf},
          {"xi", physics.xi},
          {"f", physics.f},
          {"alignment", to_string(physics.alignment)},
          {"omega0", physics.omega0},
          {"n_qubits", n_qubits},
          {"j2_w0", j2},
          {"rabi_w0", rabi_w0()}};
}

std::vector<double> Grid::values() const {
  if (count < 2) throw std::invalid_argument("grid needs at least two points");
  if (!(max > min)) throw std::invalid_argument("grid must be strictly increasing");
  std::vector<double> v(count);
  const double step = (max - min) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) v[i] = min + step * static_cast<double>(i);
  v.back() = max;
  return v;
}

ConventionCalibration resolve_convention(const Scenario& scenario, const RunOptions& options) {
  if (options.convention) {
    ConventionCalibration fixed;
    fixed.chosen = *options.convention;
    return fixed;
  }
  if (!(scenario.rabi_w0() > 0)) return ConventionCalibration{};
  return calibrate_cnot_convention(scenario.chain(), scenario.rabi_w0(), options.integrator);
}

TraceRun trace_cnot(const Scenario& scenario, const RunOptions& options, std::size_t samples) {
  if (scenario.n_qubits != 2) throw std::invalid_argument("CNOT trace needs a two-qubit scenario");
  const ChainSpec chain = scenario.chain();
  const double rabi = scenario.rabi_w0();
  TraceRun run;
  run.calibration = resolve_convention(scenario, options);

  PulseSpec pulse;
  if (rabi > 0) {
    pulse = cnot_pulse(chain, run.calibration.chosen, rabi);
  } else {
    // No drive: keep the pi-pulse frequency of the chosen convention and
    // span the same window a unit-area pulse would.
    pulse = cnot_pulse(chain, run.calibration.chosen, 1.0);
    pulse.rabi = 0.0;
  }
  const auto from = BasisState::from_label("10");
  const auto to = BasisState::from_label("11");
  Evolution ev = evolve(chain, pulse, StateVector::basis(from), options.integrator, samples);
  run.trace = std::move(*ev.trace);
  run.outcome.final_state = ev.state;
  run.outcome.fidelity = fidelity(ev.state, to);
  run.outcome.pulse_used = pulse;
  run.outcome.target = to;
  run.outcome.convention = run.calibration.chosen;
  return run;
}

void SweepSpec::validate() const {
  if (grid.size() < 2) throw std::invalid_argument("sweep grid needs at least two points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("sweep grid must be strictly increasing");
  if (initial.size() != scenario.n_qubits || ideal.size() != scenario.n_qubits)
    throw std::invalid_argument("sweep labels do not match the scenario size");
}

std::vector<double> SweepResult::column(const std::string& name) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] != name) continue;
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[c]);
    return out;
  }
  throw std::out_of_range("no column named '" + name + "'");
}

void SweepResult::write_csv(std::ostream& os) const {
  const auto old_precision = os.precision(12);
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << r[c];
    os << '\n';
  }
  os.precision(old_precision);
}

SweepSpec default_rabi_sweep() {
  SweepSpec spec;
  spec.grid = Grid{0.02, 0.5, 100}.values();
  return spec;
}

SweepSpec default_separation_sweep() {
  SweepSpec spec;
  spec.grid = Grid{1.0, 4.0, 31}.values();
  return spec;
}

SweepResult sweep_rabi(const SweepSpec& spec, const RunOptions& options) {
  spec.validate();
  if (spec.f_values.empty() || spec.b0_values.empty()) throw std::invalid_argument("rabi sweep needs f and B0 values");
  const ConventionCalibration cal = resolve_convention(spec.scenario, options);

  const std::size_t per_curve = spec.grid.size();
  const std::size_t curves = spec.b0_values.size() * spec.f_values.size();
  SweepResult result;
  result.columns = {"b0_tesla", "f", "omega_rabi_w0", "fidelity"};
  result.rows.resize(curves * per_curve);

  parallel_for(result.rows.size(), options.jobs, [&](std::size_t i) {
    const std::size_t curve = i / per_curve;
    const double b0 = spec.b0_values[curve / spec.f_values.size()];
    const double f = spec.f_values[curve % spec.f_values.size()];
    const double rabi = spec.grid[i % per_curve];
    Scenario s = spec.scenario;
    s.physics.b0 = b0;
    s.physics.f = f;
    const ChainSpec chain = s.chain();
    const double F = run_gate(chain, cnot_pulse(chain, cal.chosen, rabi), spec.initial, spec.ideal,
                              options.integrator).fidelity;
    result.rows[i] = {b0, f, rabi, F};
  });

  result.metadata = base_metadata("rabi", spec, options, cal, !options.convention);
  result.metadata["b0_values"] = spec.b0_values;
  result.metadata["f_values"] = spec.f_values;
  result.metadata["grid"] = {{"min", spec.grid.front()}, {"max", spec.grid.back()}, {"count", spec.grid.size()}};
  return result;
}

SweepResult sweep_separation(const SweepSpec& spec, const RunOptions& options) {
  spec.validate();
  for (double xi : spec.grid)
    if (!(xi > 0)) throw std::domain_error("separation factor must be positive");
  const ConventionCalibration cal = resolve_convention(spec.scenario, options);
  const double rabi = spec.scenario.rabi_w0();

  SweepResult result;
  result.columns = {"xi", "j_w0", "gradient_t_per_m", "fidelity"};
  result.rows.resize(spec.grid.size());
  parallel_for(spec.grid.size(), options.jobs, [&](std::size_t i) {
    Scenario s = spec.scenario;
    s.physics.xi = spec.grid[i];
    const ChainSpec chain = s.chain();
    const double F = run_gate(chain, cnot_pulse(chain, cal.chosen, rabi), spec.initial, spec.ideal,
                              options.integrator).fidelity;
    result.rows[i] = {s.physics.xi, coupling_constant(s.physics), field_gradient(s.physics), F};
  });

  result.metadata = base_metadata("separation", spec, options, cal, !options.convention);
  result.metadata["grid"] = {{"min", spec.grid.front()}, {"max", spec.grid.back()}, {"count", spec.grid.size()}};
  return result;
}

std::size_t count_local_maxima(const std::vector<double>& values) {
  std::size_t n = 0;
  for (std::size_t i = 1; i + 1 < values.size(); ++i)
    if (values[i] > values[i - 1] && values[i] > values[i + 1]) ++n;
  return n;
}

}  // namespace spinchain
