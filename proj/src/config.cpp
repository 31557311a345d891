#include "spinchain/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>

#include <CLI11.hpp>

#include "spinchain/parallel.hpp"

namespace spinchain {

namespace {

using nlohmann::json;

void expect_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double number(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

std::size_t count(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(where + "." + key + ": expected a count");
  return v.get<std::size_t>();
}

std::string text(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

Grid parse_grid(const json& j, const std::string& where) {
  expect_object(j, where);
  reject_unknown(j, {"min", "max", "count"}, where);
  for (const char* k : {"min", "max", "count"})
    if (!j.contains(k)) throw ConfigError(where + ": missing '" + k + "'");
  Grid g{number(j, "min", where), number(j, "max", where), count(j, "count", where)};
  if (g.count < 2) throw ConfigError(where + ": count must be at least 2");
  if (!(g.max > g.min)) throw ConfigError(where + ": max must exceed min");
  return g;
}

std::vector<double> parse_list(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError(where + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string validate_label(const std::string& label, const std::string& where) {
  try {
    BasisState::from_label(label);
  } catch (const std::exception&) {
    throw ConfigError(where + ": '" + label + "' is not a bit string");
  }
  return label;
}

std::optional<CnotConvention> parse_convention(const std::string& c) {
  if (c == "auto") return std::nullopt;
  try {
    return convention_from_string(c);
  } catch (const std::invalid_argument&) {
    throw ConfigError("convention must be paper, spectrum or auto (got '" + c + "')");
  }
}

std::filesystem::path prepare_out_dir(const RunConfig& cfg) {
  std::filesystem::path dir = ".";
  if (cfg.out_dir) {
    dir = *cfg.out_dir;
  } else if (const char* env = std::getenv("SPINCHAIN_OUT"); env && *env) {
    dir = env;
  }
  std::filesystem::create_directories(dir);
  return dir;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << std::setw(2) << j << '\n';
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  writer(os);
}

int cmd_design(const RunConfig& cfg, std::ostream& out) {
  const Scenario scenario = cfg.scenario_from(Scenario::design_point());
  DesignReport report = design_report(scenario.physics, scenario.n_qubits);
  report.rabi_w0 = scenario.rabi_w0();

  // The CNOT convention is decided on the two-qubit reference run, where the
  // two candidate frequencies are resolvable.
  const RunOptions options = cfg.run_options();
  const ConventionCalibration cal = resolve_convention(Scenario::cnot_reference(), options);
  report.cnot_convention = to_string(cal.chosen);

  json j = report.to_json();
  j["cnot_convention_source"] = options.convention ? "fixed" : "calibrated";
  if (!options.convention) j["cnot_calibration"] = cal.to_json();
  j["code_version"] = kCodeVersion;
  const auto path = prepare_out_dir(cfg) / "design_report.json";
  write_json(path, j);
  out << std::setw(2) << j << '\n';
  return 0;
}

int cmd_trace(const RunConfig& cfg, std::ostream& out) {
  const Scenario scenario = cfg.scenario_from(Scenario::cnot_reference());
  const RunOptions options = cfg.run_options();
  const TraceRun run = trace_cnot(scenario, options, cfg.trace_samples);
  const auto dir = prepare_out_dir(cfg);
  write_file(dir / "cnot_trace.csv", [&](std::ostream& os) { run.trace.write_csv(os); });
  json meta;
  meta["kind"] = "trace";
  meta["code_version"] = kCodeVersion;
  meta["scenario"] = scenario.to_json();
  meta["convention"] = to_string(run.calibration.chosen);
  meta["convention_source"] = options.convention ? "fixed" : "calibrated";
  if (!options.convention) meta["calibration"] = run.calibration.to_json();
  meta["outcome"] = run.outcome.to_json();
  meta["integrator"] = {{"max_phase_step", options.integrator.max_phase_step},
                        {"step", options.integrator.step ? json(*options.integrator.step) : json(nullptr)}};
  write_json(dir / "cnot_trace.json", meta);
  out << "fidelity " << std::setprecision(10) << run.outcome.fidelity << '\n';
  return 0;
}

int cmd_sweep(const RunConfig& cfg, const std::string& which, std::ostream& out) {
  const Scenario scenario = cfg.scenario_from(Scenario::cnot_reference());
  const RunOptions options = cfg.run_options();
  SweepSpec spec;
  SweepResult result;
  std::string name;
  if (which == "rabi") {
    spec = default_rabi_sweep();
    spec.scenario = scenario;
    if (cfg.rabi_grid) spec.grid = cfg.rabi_grid->values();
    if (cfg.f_values) spec.f_values = *cfg.f_values;
    if (cfg.b0_values) spec.b0_values = *cfg.b0_values;
    result = sweep_rabi(spec, options);
    name = "rabi_sweep";
  } else if (which == "separation") {
    spec = default_separation_sweep();
    spec.scenario = scenario;
    if (cfg.xi_grid) spec.grid = cfg.xi_grid->values();
    result = sweep_separation(spec, options);
    name = "separation_sweep";
  } else {
    throw ConfigError("sweep kind must be rabi or separation (got '" + which + "')");
  }
  const auto dir = prepare_out_dir(cfg);
  write_file(dir / (name + ".csv"), [&](std::ostream& os) { result.write_csv(os); });
  write_json(dir / (name + ".json"), result.metadata);
  out << name << ".csv: " << result.rows.size() << " rows, convention " << result.metadata["convention"].get<std::string>()
      << '\n';
  return 0;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out) {
  const Scenario scenario = cfg.scenario_from(Scenario::cnot_reference());
  const RunOptions options = cfg.run_options();
  const ChainSpec chain = scenario.chain();
  const unsigned n = chain.size();
  const double w1 = chain.omega(0);
  const double lo = cfg.scan_min.value_or(w1 - 0.2);
  const double hi = cfg.scan_max.value_or(w1 + 0.2);
  if (!(hi > lo)) throw ConfigError("scan range is empty");

  std::string initial_label, target_label;
  if (n == 2) {
    initial_label = "10";
    target_label = "11";
  } else {
    initial_label = std::string(n, '0');
    target_label = std::string(n - 1, '0') + "1";
  }
  const auto initial = BasisState::from_label(cfg.scan_initial.value_or(initial_label));
  const auto target = BasisState::from_label(cfg.scan_target.value_or(target_label));
  if (initial.size() != n || target.size() != n) throw ConfigError("scan labels do not match the qubit count");

  const ResonanceScan scan = resonance_scan(chain, lo, hi, cfg.scan_steps, scenario.rabi_w0(), initial, target,
                                            options.integrator, 0.0, options.jobs);

  out << "omega_w0,fidelity\n" << std::setprecision(10);
  for (const auto& p : scan.points) out << p.omega << ',' << p.fidelity << '\n';

  const double best = scan.best().omega;
  const double step = scan.grid_step();
  std::string label = "none";
  json candidates = json::object();
  if (n == 1) {
    candidates["larmor"] = w1;
  } else if (n == 2 && chain.j1 != 0) {
    candidates["paper"] = cnot_pulse(chain, CnotConvention::PaperEq26, 1.0).omega;
    candidates["spectrum"] = cnot_pulse(chain, CnotConvention::SpectrumGap, 1.0).omega;
  }
  double closest = std::numeric_limits<double>::infinity();
  for (const auto& [name, value] : candidates.items()) {
    const double d = std::abs(value.get<double>() - best);
    if (d <= step * (1 + 1e-9) && d < closest) {
      closest = d;
      label = name;
    }
  }
  out << "argmax " << best << " fidelity " << scan.best().fidelity << " convention " << label << '\n';

  json meta;
  meta["kind"] = "scan";
  meta["code_version"] = kCodeVersion;
  meta["scenario"] = scenario.to_json();
  meta["initial"] = initial.label();
  meta["target"] = target.label();
  meta["grid"] = {{"min", lo}, {"max", hi}, {"count", cfg.scan_steps}};
  meta["argmax_omega_w0"] = best;
  meta["argmax_fidelity"] = scan.best().fidelity;
  meta["candidates"] = candidates;
  meta["matched_convention"] = label;
  write_json(prepare_out_dir(cfg) / "resonance_scan.json", meta);
  return 0;
}

}  // namespace

RunConfig RunConfig::from_json(const json& doc) {
  expect_object(doc, "config");
  reject_unknown(doc, {"scenario", "trace", "sweep", "scan", "integrator", "convention", "out", "jobs"}, "config");
  RunConfig cfg;

  if (doc.contains("scenario")) {
    const auto& s = doc["scenario"];
    expect_object(s, "scenario");
    reject_unknown(s, {"gamma", "b0_tesla", "b_rf_tesla", "xi", "f", "alignment", "omega0", "n_qubits", "j2_w0",
                       "rabi_w0"},
                   "scenario");
    for (const auto& [key, value] : s.items()) {
      if (key == "alignment") {
        try {
          alignment_from_string(text(s, key, "scenario"));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(std::string("scenario.alignment: ") + e.what());
        }
      } else if (key == "n_qubits") {
        const auto n = count(s, key, "scenario");
        if (n < 1 || n > kMaxQubits) throw ConfigError("scenario.n_qubits out of range");
      } else {
        number(s, key, "scenario");
      }
    }
    cfg.scenario = s;
    // Surface range errors now rather than at dispatch.
    try {
      Scenario probe = cfg.scenario_from(Scenario::cnot_reference());
      probe.physics.validate();
      if (probe.rabi && *probe.rabi < 0) throw ConfigError("scenario.rabi_w0 must be non-negative");
    } catch (const std::domain_error& e) {
      throw ConfigError(std::string("scenario: ") + e.what());
    }
  }

  if (doc.contains("trace")) {
    const auto& t = doc["trace"];
    expect_object(t, "trace");
    reject_unknown(t, {"samples"}, "trace");
    if (t.contains("samples")) {
      cfg.trace_samples = count(t, "samples", "trace");
      if (cfg.trace_samples < 2) throw ConfigError("trace.samples must be at least 2");
    }
  }

  if (doc.contains("sweep")) {
    const auto& s = doc["sweep"];
    expect_object(s, "sweep");
    reject_unknown(s, {"rabi_grid", "xi_grid", "f_values", "b0_values"}, "sweep");
    if (s.contains("rabi_grid")) cfg.rabi_grid = parse_grid(s["rabi_grid"], "sweep.rabi_grid");
    if (s.contains("xi_grid")) cfg.xi_grid = parse_grid(s["xi_grid"], "sweep.xi_grid");
    if (s.contains("f_values")) cfg.f_values = parse_list(s["f_values"], "sweep.f_values");
    if (s.contains("b0_values")) cfg.b0_values = parse_list(s["b0_values"], "sweep.b0_values");
  }

  if (doc.contains("scan")) {
    const auto& s = doc["scan"];
    expect_object(s, "scan");
    reject_unknown(s, {"omega_min", "omega_max", "steps", "initial", "target"}, "scan");
    if (s.contains("omega_min")) cfg.scan_min = number(s, "omega_min", "scan");
    if (s.contains("omega_max")) cfg.scan_max = number(s, "omega_max", "scan");
    if (s.contains("steps")) cfg.scan_steps = count(s, "steps", "scan");
    if (cfg.scan_steps < 2) throw ConfigError("scan.steps must be at least 2");
    if (cfg.scan_min && cfg.scan_max && !(*cfg.scan_max > *cfg.scan_min))
      throw ConfigError("scan: omega_max must exceed omega_min");
    if (s.contains("initial")) cfg.scan_initial = validate_label(text(s, "initial", "scan"), "scan.initial");
    if (s.contains("target")) cfg.scan_target = validate_label(text(s, "target", "scan"), "scan.target");
  }

  if (doc.contains("integrator")) {
    const auto& i = doc["integrator"];
    expect_object(i, "integrator");
    reject_unknown(i, {"max_phase_step", "step", "adaptive", "tolerance"}, "integrator");
    if (i.contains("max_phase_step")) cfg.integrator.max_phase_step = number(i, "max_phase_step", "integrator");
    if (i.contains("step")) cfg.integrator.step = number(i, "step", "integrator");
    if (i.contains("tolerance")) cfg.integrator.tolerance = number(i, "tolerance", "integrator");
    if (i.contains("adaptive")) {
      if (!i["adaptive"].is_boolean()) throw ConfigError("integrator.adaptive: expected a boolean");
      cfg.integrator.adaptive = i["adaptive"].get<bool>();
    }
    if (!(cfg.integrator.max_phase_step > 0) || (cfg.integrator.step && !(*cfg.integrator.step > 0)) ||
        !(cfg.integrator.tolerance > 0))
      throw ConfigError("integrator: step sizes and tolerance must be positive");
  }

  if (doc.contains("convention")) {
    cfg.convention = text(doc, "convention", "config");
    parse_convention(cfg.convention);
  }
  if (doc.contains("out")) cfg.out_dir = text(doc, "out", "config");
  if (doc.contains("jobs")) {
    const auto j = count(doc, "jobs", "config");
    if (j < 1) throw ConfigError("jobs must be at least 1");
    cfg.jobs = static_cast<unsigned>(j);
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(doc);
}

Scenario RunConfig::scenario_from(Scenario preset) const {
  const auto& s = scenario;
  auto num = [&](const char* key) { return s.at(key).get<double>(); };
  if (s.contains("gamma")) preset.physics.gamma = num("gamma");
  if (s.contains("b0_tesla")) preset.physics.b0 = num("b0_tesla");
  if (s.contains("b_rf_tesla")) {
    preset.physics.b_rf = num("b_rf_tesla");
    preset.rabi.reset();  // an explicit rf amplitude defines the drive
  }
  if (s.contains("xi")) preset.physics.xi = num("xi");
  if (s.contains("f")) preset.physics.f = num("f");
  if (s.contains("alignment")) preset.physics.alignment = alignment_from_string(s.at("alignment").get<std::string>());
  if (s.contains("omega0")) preset.physics.omega0 = num("omega0");
  if (s.contains("n_qubits")) preset.n_qubits = s.at("n_qubits").get<std::size_t>();
  if (s.contains("j2_w0")) preset.j2 = num("j2_w0");
  if (s.contains("rabi_w0")) preset.rabi = num("rabi_w0");
  return preset;
}

RunOptions RunConfig::run_options() const {
  RunOptions o;
  o.integrator = integrator;
  o.jobs = jobs.value_or(default_jobs());
  o.convention = parse_convention(convention);
  return o;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ising-coupled nuclear spin chain simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<unsigned> jobs;
  std::optional<double> step;
  std::optional<std::string> convention;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_dir, "output directory (default $SPINCHAIN_OUT or .)");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--step", step, "fixed integrator step (dimensionless time)")->check(CLI::PositiveNumber);
  app.add_option("--convention", convention, "CNOT frequency convention")
      ->check(CLI::IsMember({"paper", "spectrum", "auto"}));

  auto* design = app.add_subcommand("design", "derive model parameters and write design_report.json");
  auto* trace = app.add_subcommand("trace", "CNOT population trace, writes cnot_trace.csv");
  auto* sweep = app.add_subcommand("sweep", "fidelity sweeps, writes rabi_sweep.csv or separation_sweep.csv");
  std::string which;
  sweep->add_option("which", which, "rabi | separation")->required()->check(CLI::IsMember({"rabi", "separation"}));
  auto* scan = app.add_subcommand("scan", "drive-frequency resonance scan");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return 2;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = RunConfig::load(config_path);
    if (out_dir) cfg.out_dir = *out_dir;
    if (jobs) cfg.jobs = *jobs;
    if (step) cfg.integrator.step = *step;
    if (convention) cfg.convention = *convention;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (design->parsed()) return cmd_design(cfg, out);
    if (trace->parsed()) return cmd_trace(cfg, out);
    if (sweep->parsed()) return cmd_sweep(cfg, which, out);
    if (scan->parsed()) return cmd_scan(cfg, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    err << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    err << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

}  // namespace spinchain
