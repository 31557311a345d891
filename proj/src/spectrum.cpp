#include "spinchain/spectrum.hpp"

#include <cmath>

namespace spinchain {

BasisState::BasisState(unsigned n_qubits, std::uint32_t index) : n_(n_qubits), index_(index) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) throw std::invalid_argument("basis state size out of range");
  if (index >= (std::uint32_t{1} << n_qubits)) throw std::out_of_range("basis index out of range");
}

BasisState BasisState::from_label(const std::string& label) {
  if (label.empty() || label.size() > kMaxQubits) throw std::invalid_argument("bad basis label '" + label + "'");
  std::uint32_t index = 0;
  for (char c : label) {
    if (c != '0' && c != '1') throw std::invalid_argument("bad basis label '" + label + "'");
    index = (index << 1) | static_cast<std::uint32_t>(c - '0');
  }
  return BasisState(static_cast<unsigned>(label.size()), index);
}

int BasisState::bit(unsigned site) const {
  if (site < 1 || site > n_) throw std::out_of_range("site index out of range");
  return static_cast<int>((index_ >> (site - 1)) & 1u);
}

BasisState BasisState::flipped(unsigned site) const {
  if (site < 1 || site > n_) throw std::out_of_range("site index out of range");
  return BasisState(n_, index_ ^ (std::uint32_t{1} << (site - 1)));
}

std::string BasisState::label() const {
  std::string s(n_, '0');
  for (unsigned j = 1; j <= n_; ++j) s[n_ - j] = bit(j) ? '1' : '0';
  return s;
}

ChainSpec make_chain(const PhysicalParams& p, std::size_t n_qubits, double j2) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) throw std::invalid_argument("qubit count out of range");
  const auto ladder = larmor_ladder(p, n_qubits);
  ChainSpec chain;
  chain.omega = Eigen::Map<const Eigen::VectorXd>(ladder.data(), static_cast<Eigen::Index>(ladder.size()));
  chain.j1 = n_qubits > 1 ? coupling_constant(p) : 0.0;
  chain.j2 = n_qubits > 2 ? j2 : 0.0;
  return chain;
}

double transition_frequency(const BasisState& a, const BasisState& b, const ChainSpec& chain) {
  if (a == b) throw std::invalid_argument("transition between identical states");
  return std::abs(energy(a, chain) - energy(b, chain));
}

std::vector<DriveCoupling> drive_couplings(const BasisState& state) {
  std::vector<DriveCoupling> out;
  out.reserve(state.size());
  for (unsigned j = state.size(); j >= 1; --j) {
    out.push_back({state.flipped(j), j, state.bit(j) ? FlipDirection::Relax : FlipDirection::Excite});
  }
  return out;
}

}  // namespace spinchain
