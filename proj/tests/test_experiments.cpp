#include <doctest.h>

#include <cmath>
#include <sstream>

#include "spinchain/experiments.hpp"

using namespace spinchain;

namespace {

RunOptions serial() {
  RunOptions o;
  o.jobs = 1;
  return o;
}

std::string csv(const SweepResult& r) {
  std::ostringstream os;
  r.write_csv(os);
  return os.str();
}

}  // namespace

TEST_CASE("CNOT trace at the reference scenario") {
  const TraceRun run = trace_cnot(Scenario::cnot_reference(), serial(), 201);
  const TraceRecord& t = run.trace;
  CHECK(t.tau.size() == 201);
  const Eigen::Index last = t.populations.rows() - 1;
  CHECK(t.populations(last, 3) >= 0.99);  // p_11
  CHECK(t.populations(last, 2) <= 0.01);  // p_10
  CHECK(t.populations(last, 3) == doctest::Approx(0.9975967808).epsilon(1e-8));
  CHECK(t.populations(0, 2) == 1.0);
  for (Eigen::Index r = 0; r <= last; ++r) CHECK(std::abs(t.populations.row(r).sum() - 1.0) < 1e-9);
  CHECK(run.calibration.chosen == CnotConvention::SpectrumGap);
  CHECK(run.outcome.fidelity == doctest::Approx(t.populations(last, 3)).epsilon(1e-12));
}

TEST_CASE("undriven trace stays put") {
  Scenario s = Scenario::cnot_reference();
  s.rabi = 0.0;
  const TraceRun run = trace_cnot(s, serial(), 21);
  for (Eigen::Index r = 0; r < run.trace.populations.rows(); ++r)
    CHECK(run.trace.populations.row(r) == run.trace.populations.row(0));
}

TEST_CASE("trace needs two qubits") {
  Scenario s = Scenario::cnot_reference();
  s.n_qubits = 3;
  CHECK_THROWS_AS(trace_cnot(s, serial()), std::invalid_argument);
}

TEST_CASE("Rabi sweep shape and determinism") {
  SweepSpec spec;
  spec.grid = Grid{0.1, 0.5, 5}.values();
  spec.f_values = {0.05, 0.2};
  spec.b0_values = {0.1, 0.5};
  RunOptions fixed = serial();
  fixed.convention = CnotConvention::SpectrumGap;
  const SweepResult a = sweep_rabi(spec, fixed);
  CHECK(a.rows.size() == 20);
  CHECK(a.columns == std::vector<std::string>{"b0_tesla", "f", "omega_rabi_w0", "fidelity"});
  for (double f : a.column("fidelity")) {
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
  }
  CHECK(a.rows[0][0] == 0.1);
  CHECK(a.rows[0][1] == 0.05);
  CHECK(a.rows[19][0] == 0.5);
  CHECK(a.rows[19][1] == 0.2);
  CHECK(a.metadata["convention_source"] == "fixed");

  RunOptions threaded = fixed;
  threaded.jobs = 4;
  CHECK(csv(a) == csv(sweep_rabi(spec, fixed)));
  CHECK(csv(a) == csv(sweep_rabi(spec, threaded)));
}

TEST_CASE("Rabi sweep records a calibrated convention") {
  SweepSpec spec;
  spec.grid = {0.05, 0.1};
  spec.f_values = {0.05};
  spec.b0_values = {0.5};
  const SweepResult r = sweep_rabi(spec, serial());
  CHECK(r.metadata["convention"] == "spectrum");
  CHECK(r.metadata["convention_source"] == "calibrated");
  CHECK(r.metadata.contains("integrator"));
  CHECK(r.metadata["code_version"] == kCodeVersion);
}

TEST_CASE("separation sweep") {
  SweepSpec spec;
  spec.grid = Grid{1.0, 4.0, 7}.values();  // includes xi = 1 and 3
  const SweepResult r = sweep_separation(spec, serial());
  CHECK(r.rows.size() == 7);
  const auto xi = r.column("xi");
  const auto j = r.column("j_w0");
  CHECK(j[0] == doctest::Approx(0.12).epsilon(0.01));
  CHECK(j[4] == doctest::Approx(0.00445).epsilon(0.01));
  for (std::size_t i = 0; i < j.size(); ++i) CHECK(std::abs(j[i] * std::pow(xi[i], 3) / j[0] - 1) < 1e-12);
  const auto g = r.column("gradient_t_per_m");
  CHECK(g[0] == doctest::Approx(0.05 * 0.5 / 1e-10));
  for (double f : r.column("fidelity")) CHECK(f > 0.99);
}

TEST_CASE("sweep validation") {
  SweepSpec spec;
  spec.grid = {0.1};
  CHECK_THROWS_AS(sweep_rabi(spec, serial()), std::invalid_argument);
  spec.grid = {0.2, 0.1};
  CHECK_THROWS_AS(sweep_rabi(spec, serial()), std::invalid_argument);
  spec.grid = {-1.0, 1.0};
  CHECK_THROWS_AS(sweep_separation(spec, serial()), std::domain_error);
  CHECK_THROWS(Grid{0.0, 1.0, 1}.values());
  CHECK_THROWS(Grid{1.0, 1.0, 3}.values());
  CHECK(default_rabi_sweep().grid.size() == 100);
  CHECK(default_separation_sweep().grid.size() == 31);
}

TEST_CASE("local maxima counting") {
  CHECK(count_local_maxima({}) == 0);
  CHECK(count_local_maxima({1, 2, 1, 2, 1}) == 2);
  CHECK(count_local_maxima({1, 2, 2, 1}) == 0);
  CHECK(count_local_maxima({3, 2, 1}) == 0);
}

TEST_CASE("scenario presets") {
  const Scenario ref = Scenario::cnot_reference();
  CHECK(ref.chain().j1 == doctest::Approx(0.12).epsilon(0.01));
  CHECK(ref.rabi_w0() == 0.0693);
  const Scenario design = Scenario::design_point();
  CHECK(design.rabi_w0() == doctest::Approx(0.259).epsilon(0.01));
  CHECK(design.chain().j1 == doctest::Approx(0.00445).epsilon(0.01));
}
