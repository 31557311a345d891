#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace spinchain {

namespace constants {
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double mu0_over_4pi = 1.0e-7;  // T·m/A
inline constexpr double hbar = 1.0546e-34;      // J·s
inline constexpr double proton_gamma = 2.675e8; // rad/(T·s)
inline constexpr double angstrom = 1.0e-10;     // m
inline constexpr double default_omega0 = 2.0 * pi * 1.0e6;
}  // namespace constants

enum class Alignment { XAxis, ZAxis };

std::string to_string(Alignment alignment);
Alignment alignment_from_string(const std::string& text);

/// Laboratory-frame description of a chain. Fields in tesla, lengths via the
/// separation factor xi (a = xi * 1e-10 m), frequencies in rad/s.
struct PhysicalParams {
  double gamma = constants::proton_gamma;
  double b0 = 0.5;       // longitudinal field at site 1
  double b_rf = 0.00608; // transverse rf amplitude
  double xi = 3.0;
  double f = 0.05;       // relative Larmor offset between neighbours
  Alignment alignment = Alignment::XAxis;
  double omega0 = constants::default_omega0;

  /// Throws std::domain_error when a field is out of range.
  void validate() const;

  double separation() const { return xi * constants::angstrom; }
};

/// Ising coupling between nearest neighbours in units of omega0. Alignment
/// along the longitudinal field flips the sign and doubles the magnitude.
double coupling_constant(const PhysicalParams& p);

double larmor_frequency(double field_tesla, const PhysicalParams& p);
double rabi_frequency(double rf_tesla, const PhysicalParams& p);
/// Inverse of rabi_frequency: rf amplitude in tesla for a dimensionless Rabi frequency.
double rf_amplitude(double rabi, const PhysicalParams& p);

/// Longitudinal field gradient (T/m) needed for a relative Larmor offset f
/// between sites one separation apart.
double field_gradient(const PhysicalParams& p);

/// omega_j = omega_1 (1 + f)^(j-1), j = 1..n, in units of omega0.
std::vector<double> larmor_ladder(const PhysicalParams& p, std::size_t n_qubits);

struct DesignReport {
  PhysicalParams params;
  std::size_t n_qubits = 0;
  double separation_m = 0;
  double coupling_w0 = 0;
  double gradient_t_per_m = 0;
  double rabi_w0 = 0;
  std::vector<double> larmor_w0;
  std::string gradient_note;
  std::optional<std::string> cnot_convention;

  nlohmann::json to_json() const;
};

DesignReport design_report(const PhysicalParams& p, std::size_t n_qubits);

}  // namespace spinchain
