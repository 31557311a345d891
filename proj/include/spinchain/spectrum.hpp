#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spinchain/physics.hpp"

namespace spinchain {

inline constexpr unsigned kMaxQubits = 20;

/// Computational basis label |xi_N ... xi_1>. Site 1 is the least significant bit.
class BasisState {
 public:
  BasisState() = default;
  BasisState(unsigned n_qubits, std::uint32_t index);

  /// Parses a bit string written most-significant (site N) first, e.g. "10".
  static BasisState from_label(const std::string& label);

  unsigned size() const { return n_; }
  std::uint32_t index() const { return index_; }
  /// Bit of site j, 1 <= j <= N.
  int bit(unsigned site) const;
  BasisState flipped(unsigned site) const;
  std::string label() const;

  friend bool operator==(const BasisState&, const BasisState&) = default;

 private:
  unsigned n_ = 0;
  std::uint32_t index_ = 0;
};

/// Dimensionless N-spin Ising chain; all frequencies in units of omega0.
template <typename Scalar>
struct BasicChainSpec {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector omega;   // Larmor frequency per site
  Scalar j1 = 0;  // nearest-neighbour coupling
  Scalar j2 = 0;  // next-nearest-neighbour coupling

  unsigned size() const { return static_cast<unsigned>(omega.size()); }

  /// Hard errors for malformed chains; returns soft warnings when the
  /// ordering |J'| < |J| << min(omega) does not hold.
  std::vector<std::string> validate() const {
    if (omega.size() < 1) throw std::invalid_argument("chain needs at least one site");
    if (omega.size() > static_cast<Eigen::Index>(kMaxQubits))
      throw std::invalid_argument("chain exceeds the supported qubit cap");
    if ((omega.array() <= Scalar(0)).any())
      throw std::invalid_argument("Larmor frequencies must be strictly positive");
    std::vector<std::string> warnings;
    using std::abs;
    if (j1 != Scalar(0)) {
      if (!(abs(j2) < abs(j1))) warnings.emplace_back("|J'| is not smaller than |J|");
      if (!(abs(j1) < Scalar(0.1) * omega.minCoeff()))
        warnings.emplace_back("|J| is not small compared with the Larmor frequencies");
    }
    return warnings;
  }
};

using ChainSpec = BasicChainSpec<double>;

/// Builds the Larmor ladder and coupling from laboratory parameters.
ChainSpec make_chain(const PhysicalParams& p, std::size_t n_qubits, double j2 = 0.0);

/// Diagonal energy of a basis state in units of hbar*omega0:
/// E = 1/2 [ -sum_j s_j w_j + J/2 sum_k s_k s_{k+1} + J'/2 sum_l s_l s_{l+2} ],
/// with s_j = (-1)^{xi_j}.
template <typename Scalar>
Scalar energy(const BasisState& state, const BasicChainSpec<Scalar>& chain) {
  const unsigned n = chain.size();
  if (state.size() != n) throw std::invalid_argument("basis state size does not match chain");
  auto sign = [&](unsigned site) { return state.bit(site) ? Scalar(-1) : Scalar(1); };
  Scalar zeeman = 0;
  for (unsigned j = 1; j <= n; ++j) zeeman -= sign(j) * chain.omega(j - 1);
  Scalar nearest = 0;
  for (unsigned k = 1; k + 1 <= n; ++k) nearest += sign(k) * sign(k + 1);
  Scalar next = 0;
  for (unsigned l = 1; l + 2 <= n; ++l) next += sign(l) * sign(l + 2);
  return Scalar(0.5) * (zeeman + chain.j1 / Scalar(2) * nearest + chain.j2 / Scalar(2) * next);
}

template <typename Scalar>
struct BasicEnergySpectrum {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> energies;  // indexed by basis index

  /// True when no two energies lie within tol of each other.
  bool injective(Scalar tol = Scalar(1e-9)) const {
    std::vector<Scalar> sorted(energies.data(), energies.data() + energies.size());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
      if (sorted[i] - sorted[i - 1] <= tol) return false;
    return true;
  }
};

using EnergySpectrum = BasicEnergySpectrum<double>;

/// All 2^N energies. When the chain satisfies its validation ordering the
/// ground state is |0...0> and the top state |1...1>; this is checked.
template <typename Scalar>
BasicEnergySpectrum<Scalar> full_spectrum(const BasicChainSpec<Scalar>& chain, unsigned cap = kMaxQubits) {
  const unsigned n = chain.size();
  if (n > cap) throw std::invalid_argument("qubit count exceeds spectrum cap");
  const bool ordered = chain.validate().empty();
  const std::uint32_t dim = std::uint32_t{1} << n;
  BasicEnergySpectrum<Scalar> s;
  s.energies.resize(dim);
  for (std::uint32_t i = 0; i < dim; ++i) s.energies(i) = energy(BasisState(n, i), chain);
  if (ordered) {
    Eigen::Index lo = 0, hi = 0;
    s.energies.minCoeff(&lo);
    s.energies.maxCoeff(&hi);
    if (lo != 0 || hi != static_cast<Eigen::Index>(dim - 1))
      throw std::logic_error("spectrum extremes are not |0...0> and |1...1>");
  }
  return s;
}

/// |E_a - E_b| in units of omega0.
double transition_frequency(const BasisState& a, const BasisState& b, const ChainSpec& chain);

/// Direction of a single spin flip as seen from the source state.
enum class FlipDirection {
  Excite,  // bit 0 -> 1, picks up exp(-i theta) from the drive
  Relax,   // bit 1 -> 0, picks up exp(+i theta)
};

struct DriveCoupling {
  BasisState neighbor;
  unsigned site = 0;
  FlipDirection direction = FlipDirection::Excite;
};

/// The N single-flip neighbours of a state. The rf drive couples a state only
/// to these, with matrix element -(Omega/2) exp(-+i theta).
std::vector<DriveCoupling> drive_couplings(const BasisState& state);

}  // namespace spinchain
