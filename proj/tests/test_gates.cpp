#include <doctest.h>

#include <cmath>
#include <random>

#include "spinchain/gates.hpp"

using namespace spinchain;

namespace {

const double kPi = constants::pi;
constexpr double kReferenceRabi = 0.0693;

ChainSpec reference_chain() {
  PhysicalParams p;
  p.xi = 1.0;
  return make_chain(p, 2);
}

ChainSpec rounded_chain() {
  ChainSpec c;
  c.omega = Eigen::Vector2d(21.287, 21.287 * 1.05);
  c.j1 = 0.12;
  return c;
}

ChainSpec single_spin(double w = 21.287) {
  ChainSpec c;
  c.omega = Eigen::VectorXd::Constant(1, w);
  return c;
}

BasisState label(const char* s) { return BasisState::from_label(s); }

}  // namespace

TEST_CASE("NOT pulse construction and action") {
  const ChainSpec c = single_spin();
  const PulseSpec p = not_pulse(c, 1, 0.1);
  CHECK(p.omega == 21.287);
  CHECK(p.tau == doctest::Approx(10 * kPi));
  CHECK(p.phase == 0.0);
  CHECK(run_gate(c, p, label("0"), label("1")).fidelity >= 1 - 1e-4);

  PulseSpec half = p;
  half.tau = kPi / (2 * 0.1);
  CHECK(run_gate(c, half, label("0"), label("1")).fidelity == doctest::Approx(0.5).epsilon(1e-3));

  CHECK_THROWS_AS(not_pulse(c, 0, 0.1), std::out_of_range);
  CHECK_THROWS_AS(not_pulse(c, 2, 0.1), std::out_of_range);
  CHECK_THROWS_AS(not_pulse(c, 1, 0.0), std::invalid_argument);
}

TEST_CASE("CNOT pulse frequencies") {
  const ChainSpec c = rounded_chain();
  CHECK(cnot_pulse(c, CnotConvention::PaperEq26, 0.1).omega == doctest::Approx(21.227).epsilon(1e-12));
  CHECK(cnot_pulse(c, CnotConvention::SpectrumGap, 0.1).omega == doctest::Approx(21.347).epsilon(1e-12));
  CHECK(cnot_pulse(c, CnotConvention::SpectrumGap, 0.1).tau == doctest::Approx(10 * kPi));

  ChainSpec uncoupled = c;
  uncoupled.j1 = 0;
  CHECK_THROWS_AS(cnot_pulse(uncoupled, CnotConvention::PaperEq26, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(cnot_pulse(single_spin(), CnotConvention::PaperEq26, 0.1), std::invalid_argument);
  ChainSpec second = c;
  second.j2 = 0.01;
  CHECK_THROWS_AS(cnot_pulse(second, CnotConvention::SpectrumGap, 0.1), std::invalid_argument);
}

TEST_CASE("CNOT outcomes at the reference scenario") {
  const ChainSpec c = reference_chain();
  const PulseSpec pulse = cnot_pulse(c, CnotConvention::SpectrumGap, kReferenceRabi);

  const GateOutcome flip = run_gate(c, pulse, label("10"), label("11"));
  CHECK(flip.fidelity >= 0.99);
  // frozen from the explicit two-qubit system
  const TwoQubitParams q{c.omega(0), c.omega(1), c.j1, kReferenceRabi, pulse.omega, 0.0, DriveSense::CoRotating};
  const double oracle = std::norm(evolve_two_qubit_explicit(q, {0, 0, 1, 0}, pulse.tau)[3]);
  CHECK(flip.fidelity == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(flip.fidelity == doctest::Approx(0.9975967808).epsilon(1e-8));
  CHECK(flip.fidelity == doctest::Approx(fidelity(flip.final_state, flip.target)).epsilon(1e-12));

  CHECK(run_gate(c, pulse, label("00"), label("00")).fidelity >= 0.99);

  const PulseSpec idle{21.3, 0.0, 0.0, 10.0};
  CHECK(run_gate(c, idle, label("01"), label("01")).fidelity == 1.0);
}

TEST_CASE("CNOT truth table at the better convention") {
  const ChainSpec c = reference_chain();
  const ConventionCalibration cal = calibrate_cnot_convention(c, kReferenceRabi);
  CHECK(cal.chosen == CnotConvention::SpectrumGap);
  CHECK(cal.fidelity_spectrum > 0.99);
  CHECK(cal.fidelity_paper < 0.01);
  CHECK(calibrate_cnot_convention(c, kReferenceRabi).chosen == cal.chosen);

  const PulseSpec pulse = cnot_pulse(c, cal.chosen, kReferenceRabi);
  const std::pair<const char*, const char*> table[] = {{"00", "00"}, {"01", "01"}, {"10", "11"}, {"11", "10"}};
  for (const auto& [in, out] : table) {
    CAPTURE(in);
    CHECK(run_gate(c, pulse, label(in), label(out)).fidelity >= 0.95);
  }
}

TEST_CASE("fidelity bounds") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXcd a(8), b(8);
    for (auto& x : a) x = cplx(g(rng), g(rng));
    for (auto& x : b) x = cplx(g(rng), g(rng));
    const StateVector u(3, a.normalized()), v(3, b.normalized());
    const double f = fidelity(u, v);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    CHECK(fidelity(u, u) == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK_THROWS(fidelity(StateVector::basis(label("0")), StateVector::basis(label("00"))));
}

TEST_CASE("resonance scan locates a CNOT candidate") {
  const ChainSpec c = rounded_chain();
  const ResonanceScan scan = resonance_scan(c, 21.1, 21.5, 81, kReferenceRabi, label("10"), label("11"));
  CHECK(scan.points.size() == 81);
  const double step = scan.grid_step();
  const double best = scan.best().omega;
  const bool near_paper = std::abs(best - 21.227) <= step;
  const bool near_gap = std::abs(best - 21.347) <= step;
  CHECK((near_paper || near_gap));
  CHECK(near_gap);

  ResonanceScan shifted = resonance_scan(c, 21.1, 21.5, 81, kReferenceRabi, label("10"), label("11"), {}, 2.1);
  CHECK(shifted.argmax == scan.argmax);

  const ResonanceScan far = resonance_scan(c, 30.0, 31.0, 21, kReferenceRabi, label("10"), label("11"));
  CHECK(far.best().fidelity <= 0.05);

  const ChainSpec one = single_spin(4.2574);
  const ResonanceScan larmor = resonance_scan(one, 4.0574, 4.4574, 41, 0.1, label("0"), label("1"));
  CHECK(larmor.best().omega == doctest::Approx(4.2574).epsilon(1e-9));
}

TEST_CASE("resonance scan runs the same on several workers") {
  const ChainSpec c = rounded_chain();
  const auto serial = resonance_scan(c, 21.2, 21.4, 9, 0.2, label("10"), label("11"));
  const auto threaded = resonance_scan(c, 21.2, 21.4, 9, 0.2, label("10"), label("11"), {}, 0.0, 4);
  for (std::size_t i = 0; i < serial.points.size(); ++i) CHECK(serial.points[i].fidelity == threaded.points[i].fidelity);
}

TEST_CASE("resonance scan input errors") {
  const ChainSpec c = rounded_chain();
  CHECK_THROWS_AS(resonance_scan(c, 21.5, 21.1, 10, 0.1, label("10"), label("11")), std::invalid_argument);
  CHECK_THROWS_AS(resonance_scan(c, 21.1, 21.5, 1, 0.1, label("10"), label("11")), std::invalid_argument);
}

TEST_CASE("gate outcome serialization") {
  const ChainSpec c = reference_chain();
  GateOutcome o = run_gate(c, cnot_pulse(c, CnotConvention::SpectrumGap, 0.2), label("10"), label("11"));
  o.convention = CnotConvention::SpectrumGap;
  const auto j = o.to_json();
  CHECK(j["convention"] == "spectrum");
  CHECK(j["target"] == "11");
  CHECK(j["populations"].size() == 4);
  CHECK(j["fidelity"].get<double>() == o.fidelity);
  CHECK(convention_from_string(to_string(CnotConvention::PaperEq26)) == CnotConvention::PaperEq26);
  CHECK_THROWS(convention_from_string("auto"));
}
