#include "spinchain/physics.hpp"

#include <cmath>
#include <stdexcept>

namespace spinchain {

std::string to_string(Alignment alignment) {
  return alignment == Alignment::XAxis ? "x" : "z";
}

Alignment alignment_from_string(const std::string& text) {
  if (text == "x" || text == "X" || text == "xaxis") return Alignment::XAxis;
  if (text == "z" || text == "Z" || text == "zaxis") return Alignment::ZAxis;
  throw std::invalid_argument("unknown alignment '" + text + "' (expected x or z)");
}

void PhysicalParams::validate() const {
  if (!(gamma > 0)) throw std::domain_error("gamma must be positive");
  if (!(xi > 0)) throw std::domain_error("separation factor xi must be positive");
  if (!(b0 >= 0)) throw std::domain_error("longitudinal field b0 must be non-negative");
  if (!(b_rf >= 0)) throw std::domain_error("rf amplitude b_rf must be non-negative");
  if (!(omega0 > 0)) throw std::domain_error("reference frequency omega0 must be positive");
  if (!std::isfinite(f)) throw std::domain_error("relative offset f must be finite");
}

double coupling_constant(const PhysicalParams& p) {
  p.validate();
  const double a = p.separation();
  // mu0 gamma^2 hbar / (4 pi a^3) is already an angular frequency.
  const double j_rad_per_s = constants::mu0_over_4pi * p.gamma * p.gamma * constants::hbar / (a * a * a);
  const double j = j_rad_per_s / p.omega0;
  return p.alignment == Alignment::XAxis ? j : -2.0 * j;
}

double larmor_frequency(double field_tesla, const PhysicalParams& p) {
  if (field_tesla < 0) throw std::domain_error("field must be non-negative");
  return p.gamma * field_tesla / p.omega0;
}

double rabi_frequency(double rf_tesla, const PhysicalParams& p) {
  if (rf_tesla < 0) throw std::domain_error("rf amplitude must be non-negative");
  return p.gamma * rf_tesla / p.omega0;
}

double rf_amplitude(double rabi, const PhysicalParams& p) {
  if (rabi < 0) throw std::domain_error("Rabi frequency must be non-negative");
  return rabi * p.omega0 / p.gamma;
}

double field_gradient(const PhysicalParams& p) {
  p.validate();
  const double delta_omega = p.f * p.gamma * p.b0;
  return delta_omega / (p.gamma * p.separation());
}

std::vector<double> larmor_ladder(const PhysicalParams& p, std::size_t n_qubits) {
  const double omega1 = larmor_frequency(p.b0, p);
  std::vector<double> ladder(n_qubits);
  for (std::size_t j = 0; j < n_qubits; ++j) {
    ladder[j] = omega1 * std::pow(1.0 + p.f, static_cast<double>(j));
  }
  return ladder;
}

DesignReport design_report(const PhysicalParams& p, std::size_t n_qubits) {
  if (n_qubits < 1) throw std::domain_error("design report needs at least one qubit");
  p.validate();
  DesignReport r;
  r.params = p;
  r.n_qubits = n_qubits;
  r.separation_m = p.separation();
  r.coupling_w0 = coupling_constant(p);
  r.gradient_t_per_m = field_gradient(p);
  r.rabi_w0 = rabi_frequency(p.b_rf, p);
  r.larmor_w0 = larmor_ladder(p, n_qubits);
  r.gradient_note =
      "gradient_t_per_m = f*b0/a evaluated directly; at xi=3, f=0.05, b0=0.5 T this is "
      "8.33e7 T/m, about 100x the 0.83e6 T/m design figure often quoted for this setup";
  return r;
}

nlohmann::json DesignReport::to_json() const {
  nlohmann::json j;
  j["n_qubits"] = n_qubits;
  j["alignment"] = to_string(params.alignment);
  j["xi"] = params.xi;
  j["f"] = params.f;
  j["gamma_si"] = params.gamma;
  j["omega0_si"] = params.omega0;
  j["separation_si"] = separation_m;
  j["b0_si"] = params.b0;
  j["b_rf_si"] = params.b_rf;
  j["gradient_si"] = gradient_t_per_m;
  j["coupling_w0"] = coupling_w0;
  j["rabi_w0"] = rabi_w0;
  j["larmor_w0"] = larmor_w0;
  j["gradient_comment"] = gradient_note;
  if (cnot_convention) j["cnot_convention"] = *cnot_convention;
  return j;
}

}  // namespace spinchain
