#include "spinchain/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace spinchain {

namespace {

constexpr double kNormTolerance = 1e-9;

void require_normalized(const StateVector& psi) {
  if (std::abs(psi.norm() - 1.0) > kNormTolerance)
    throw std::invalid_argument("initial state is not normalized");
}

void check_dimensions(const ChainSpec& chain, const StateVector& psi) {
  if (psi.size() != chain.size()) throw std::invalid_argument("state and chain sizes differ");
}

// Right-hand side of the interaction-picture equations. `phases` holds
// exp(i E_x t) for every basis state and `drive` holds exp(i theta).
class InteractionRhs {
 public:
  InteractionRhs(unsigned n, double rabi) : n_(n), half_rabi_(0.5 * rabi), lab_(Eigen::Index{1} << n) {}

  void operator()(const Eigen::VectorXcd& a, const Eigen::VectorXcd& phases, cplx drive,
                  Eigen::VectorXcd& out) {
    lab_ = phases.conjugate().cwiseProduct(a);
    const cplx excite = std::conj(drive);
    const Eigen::Index dim = a.size();
    for (Eigen::Index d = 0; d < dim; ++d) {
      cplx sum = 0;
      for (unsigned j = 0; j < n_; ++j) {
        const Eigen::Index mask = Eigen::Index{1} << j;
        // bit set in d: the neighbour is excited into d, else it relaxes into d
        sum += ((d & mask) ? excite : drive) * lab_(d ^ mask);
      }
      out(d) = cplx(0, half_rabi_) * phases(d) * sum;
    }
  }

 private:
  unsigned n_;
  double half_rabi_;
  Eigen::VectorXcd lab_;
};

Eigen::VectorXcd phases_at(const Eigen::VectorXd& energies, double t) {
  Eigen::VectorXcd p(energies.size());
  for (Eigen::Index i = 0; i < energies.size(); ++i) p(i) = std::polar(1.0, energies(i) * t);
  return p;
}

class Rk4Stepper {
 public:
  Rk4Stepper(const ChainSpec& chain, const PulseSpec& pulse, const Eigen::VectorXd& energies, double pulse_start)
      : pulse_(pulse), energies_(energies), start_(pulse_start), rhs_(chain.size(), pulse.rabi) {
    const Eigen::Index dim = energies.size();
    k1_.resize(dim);
    k2_.resize(dim);
    k3_.resize(dim);
    k4_.resize(dim);
    tmp_.resize(dim);
  }

  cplx drive_at(double t) const { return std::polar(1.0, pulse_.omega * (t - start_) + pulse_.phase); }

  void step(Eigen::VectorXcd& a, double t, double h) {
    if (h != cached_h_) {
      half_ = phases_at(energies_, 0.5 * h);
      half_drive_ = std::polar(1.0, pulse_.omega * 0.5 * h);
      cached_h_ = h;
    }
    p0_ = phases_at(energies_, t);
    p1_ = p0_.cwiseProduct(half_);
    p2_ = p1_.cwiseProduct(half_);
    const cplx d0 = drive_at(t);
    const cplx d1 = d0 * half_drive_;
    const cplx d2 = d1 * half_drive_;

    rhs_(a, p0_, d0, k1_);
    tmp_ = a + (0.5 * h) * k1_;
    rhs_(tmp_, p1_, d1, k2_);
    tmp_ = a + (0.5 * h) * k2_;
    rhs_(tmp_, p1_, d1, k3_);
    tmp_ = a + h * k3_;
    rhs_(tmp_, p2_, d2, k4_);
    a += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

 private:
  PulseSpec pulse_;
  Eigen::VectorXd energies_;
  double start_;
  InteractionRhs rhs_;
  Eigen::VectorXcd k1_, k2_, k3_, k4_, tmp_;
  Eigen::VectorXcd p0_, p1_, p2_, half_;
  cplx half_drive_;
  double cached_h_ = -1;
};

void record_sample(TraceRecord& trace, Eigen::Index row, double tau, const Eigen::VectorXcd& a) {
  trace.tau[static_cast<std::size_t>(row)] = tau;
  trace.populations.row(row) = a.cwiseAbs2().transpose();
}

}  // namespace

void PulseSpec::validate() const {
  if (!(rabi >= 0)) throw std::invalid_argument("pulse Rabi frequency must be non-negative");
  if (!(tau >= 0)) throw std::invalid_argument("pulse duration must be non-negative");
  if (!std::isfinite(omega) || !std::isfinite(phase)) throw std::invalid_argument("pulse frequency/phase not finite");
}

StateVector::StateVector(unsigned n_qubits, Eigen::VectorXcd amplitudes, double time)
    : n_(n_qubits), amplitudes_(std::move(amplitudes)), time_(time) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) throw std::invalid_argument("qubit count out of range");
  if (amplitudes_.size() != (Eigen::Index{1} << n_qubits))
    throw std::invalid_argument("amplitude vector length is not 2^N");
}

StateVector StateVector::basis(const BasisState& state, double time) {
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(Eigen::Index{1} << state.size());
  a(state.index()) = 1.0;
  return StateVector(state.size(), std::move(a), time);
}

Eigen::VectorXcd StateVector::lab_amplitudes(const EnergySpectrum& spectrum) const {
  return phases_at(spectrum.energies, time_).conjugate().cwiseProduct(amplitudes_);
}

StateVector StateVector::from_lab(unsigned n_qubits, const Eigen::VectorXcd& lab, const EnergySpectrum& spectrum,
                                  double time) {
  return StateVector(n_qubits, phases_at(spectrum.energies, time).cwiseProduct(lab), time);
}

double IntegratorOptions::step_for(const ChainSpec& chain, const PulseSpec& pulse) const {
  if (step) {
    if (!(*step > 0)) throw std::invalid_argument("integrator step must be positive");
    return *step;
  }
  if (!(max_phase_step > 0)) throw std::invalid_argument("max phase step must be positive");
  const double fastest = std::max(chain.omega.cwiseAbs().maxCoeff(), std::abs(pulse.omega));
  return fastest > 0 ? max_phase_step / fastest : max_phase_step;
}

void TraceRecord::write_csv(std::ostream& os) const {
  const auto old_precision = os.precision(12);
  os << "tau";
  for (const auto& l : labels) os << ",p_" << l.label();
  os << '\n';
  for (std::size_t r = 0; r < tau.size(); ++r) {
    os << tau[r];
    for (Eigen::Index c = 0; c < populations.cols(); ++c) os << ',' << populations(static_cast<Eigen::Index>(r), c);
    os << '\n';
  }
  os.precision(old_precision);
}

Evolution evolve(const ChainSpec& chain, const PulseSpec& pulse, const StateVector& psi0,
                 const IntegratorOptions& options, std::optional<std::size_t> samples) {
  chain.validate();
  pulse.validate();
  check_dimensions(chain, psi0);
  require_normalized(psi0);
  if (samples && *samples < 2) throw std::invalid_argument("a trace needs at least two samples");

  const EnergySpectrum spectrum = full_spectrum(chain);
  Evolution result;
  if (!spectrum.injective()) result.warnings.emplace_back("degenerate spectrum: drive resonance is ambiguous");

  const unsigned n = chain.size();
  const double t0 = psi0.time();
  Eigen::VectorXcd a = psi0.amplitudes();

  if (samples) {
    TraceRecord trace;
    trace.tau.resize(*samples);
    for (std::uint32_t i = 0; i < (std::uint32_t{1} << n); ++i) trace.labels.emplace_back(n, i);
    trace.populations.resize(static_cast<Eigen::Index>(*samples), a.size());
    record_sample(trace, 0, 0.0, a);
    result.trace = std::move(trace);
  }

  auto track_norm = [&] {
    result.max_norm_deviation = std::max(result.max_norm_deviation, std::abs(a.norm() - 1.0));
  };

  Rk4Stepper stepper(chain, pulse, spectrum.energies, t0);
  const double h_target = options.step_for(chain, pulse);

  if (pulse.tau > 0 && !options.adaptive) {
    const std::size_t intervals = samples ? *samples - 1 : 1;
    const double interval = pulse.tau / static_cast<double>(intervals);
    const auto per_interval = static_cast<std::size_t>(std::ceil(interval / h_target - 1e-9));
    const std::size_t total = intervals * std::max<std::size_t>(per_interval, 1);
    const double h = pulse.tau / static_cast<double>(total);
    const std::size_t stride = total / intervals;
    for (std::size_t s = 0; s < total; ++s) {
      stepper.step(a, t0 + static_cast<double>(s) * h, h);
      track_norm();
      if (samples && (s + 1) % stride == 0) {
        const auto row = static_cast<Eigen::Index>((s + 1) / stride);
        record_sample(*result.trace, row, static_cast<double>(s + 1) * h, a);
      }
    }
    result.steps = total;
  } else if (pulse.tau > 0) {
    // Step doubling: compare one step of h with two of h/2.
    std::vector<double> marks;
    const std::size_t intervals = samples ? *samples - 1 : 1;
    for (std::size_t i = 1; i <= intervals; ++i)
      marks.push_back(pulse.tau * static_cast<double>(i) / static_cast<double>(intervals));
    double elapsed = 0;
    double h = h_target;
    Eigen::VectorXcd full(a.size()), halves(a.size());
    for (std::size_t m = 0; m < marks.size(); ++m) {
      while (elapsed < marks[m]) {
        const double hs = std::min(h, marks[m] - elapsed);
        if (hs < options.min_step && marks[m] - elapsed > options.min_step)
          throw std::runtime_error("adaptive step size underflow");
        full = a;
        stepper.step(full, t0 + elapsed, hs);
        halves = a;
        stepper.step(halves, t0 + elapsed, 0.5 * hs);
        stepper.step(halves, t0 + elapsed + 0.5 * hs, 0.5 * hs);
        const double err = (halves - full).norm() / 15.0;
        if (err <= options.tolerance || hs <= options.min_step) {
          a = halves;
          elapsed = (marks[m] - elapsed - hs < 1e-14) ? marks[m] : elapsed + hs;
          ++result.steps;
          track_norm();
        }
        const double factor = err > 0 ? 0.9 * std::pow(options.tolerance / err, 0.2) : 2.0;
        h = hs * std::clamp(factor, 0.2, 2.0);
      }
      if (samples) record_sample(*result.trace, static_cast<Eigen::Index>(m + 1), marks[m], a);
    }
  }

  result.state = StateVector(n, std::move(a), t0 + pulse.tau);
  return result;
}

StateVector evolve_schrodinger(const ChainSpec& chain, const PulseSpec& pulse, const StateVector& psi0,
                               const IntegratorOptions& options) {
  chain.validate();
  pulse.validate();
  check_dimensions(chain, psi0);
  require_normalized(psi0);

  const EnergySpectrum spectrum = full_spectrum(chain);
  const unsigned n = chain.size();
  const Eigen::Index dim = Eigen::Index{1} << n;
  const double t0 = psi0.time();
  Eigen::VectorXcd c = psi0.lab_amplitudes(spectrum);
  if (pulse.tau <= 0) return StateVector::from_lab(n, c, spectrum, t0);

  const auto steps = static_cast<std::size_t>(std::ceil(pulse.tau / options.step_for(chain, pulse) - 1e-9));
  const double h = pulse.tau / static_cast<double>(std::max<std::size_t>(steps, 1));

  // exp(-i H0 s) for the half steps of each sub-step.
  auto free_phase = [&](double s) {
    c = c.cwiseProduct(phases_at(spectrum.energies, -s));
  };
  // exp(-i s W(t)) factorizes into commuting single-site rotations.
  auto drive = [&](double s, double t_mid) {
    const double angle = 0.5 * pulse.rabi * s;
    const double cs = std::cos(angle);
    const cplx is = cplx(0, std::sin(angle));
    const cplx e = std::polar(1.0, pulse.omega * (t_mid - t0) + pulse.phase);
    for (unsigned j = 0; j < n; ++j) {
      const Eigen::Index mask = Eigen::Index{1} << j;
      for (Eigen::Index lo = 0; lo < dim; ++lo) {
        if (lo & mask) continue;
        const cplx x0 = c(lo);
        const cplx x1 = c(lo | mask);
        c(lo) = cs * x0 + is * e * x1;
        c(lo | mask) = is * std::conj(e) * x0 + cs * x1;
      }
    }
  };
  auto strang = [&](double t, double s) {
    free_phase(0.5 * s);
    drive(s, t + 0.5 * s);
    free_phase(0.5 * s);
  };

  const double cbrt2 = std::cbrt(2.0);
  const double g1 = 1.0 / (2.0 - cbrt2);
  const double g2 = 1.0 - 2.0 * g1;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = t0 + static_cast<double>(k) * h;
    strang(t, g1 * h);
    strang(t + g1 * h, g2 * h);
    strang(t + (g1 + g2) * h, g1 * h);
  }
  return StateVector::from_lab(n, c, spectrum, t0 + pulse.tau);
}

StateVector apply_pulse_sequence(const ChainSpec& chain, std::span<const PulseSpec> pulses, const StateVector& psi0,
                                 const IntegratorOptions& options) {
  StateVector psi = psi0;
  for (const auto& pulse : pulses) psi = evolve(chain, pulse, psi, options).state;
  return psi;
}

std::array<cplx, 4> evolve_two_qubit_explicit(const TwoQubitParams& q, const std::array<cplx, 4>& a0, double tau,
                                              double step) {
  double norm2 = 0;
  for (const auto& x : a0) norm2 += std::norm(x);
  if (std::abs(std::sqrt(norm2) - 1.0) > kNormTolerance) throw std::invalid_argument("initial state is not normalized");
  if (!(q.rabi >= 0) || !(tau >= 0)) throw std::invalid_argument("negative Rabi frequency or duration");
  if (!(step > 0)) throw std::invalid_argument("step must be positive");

  const double w1 = q.omega1, w2 = q.omega2, J = q.j;
  const double E1 = 0.5 * (-w1 - w2 + J / 2);  // |00>
  const double E2 = 0.5 * (w1 - w2 - J / 2);   // |01>
  const double E3 = 0.5 * (-w1 + w2 - J / 2);  // |10>
  const double E4 = 0.5 * (w1 + w2 + J / 2);   // |11>
  const double sense = q.sense == DriveSense::AsPrinted ? 1.0 : -1.0;
  const cplx I(0, 1);
  const double hr = 0.5 * q.rabi;

  using A = std::array<cplx, 4>;
  auto rhs = [&](double t, const A& a) {
    const double th = sense * (q.omega * t + q.phase);
    auto down = [&](double dE) { return std::exp(-I * (th + dE * t)); };
    auto up = [&](double dE) { return std::exp(+I * (th + dE * t)); };
    // i da/dt = -(Omega/2) (...)  =>  da/dt = i (Omega/2) (...)
    A d;
    d[0] = I * hr * (down(E2 - E1) * a[1] + down(E3 - E1) * a[2]);
    d[1] = I * hr * (up(E2 - E1) * a[0] + down(E4 - E2) * a[3]);
    d[2] = I * hr * (up(E3 - E1) * a[0] + down(E4 - E3) * a[3]);
    d[3] = I * hr * (up(E4 - E2) * a[1] + up(E4 - E3) * a[2]);
    return d;
  };
  auto axpy = [](const A& y, double s, const A& k) {
    A r;
    for (int i = 0; i < 4; ++i) r[i] = y[i] + s * k[i];
    return r;
  };

  A a = a0;
  if (tau <= 0) return a;
  const auto steps = static_cast<std::size_t>(std::ceil(tau / step));
  const double h = tau / static_cast<double>(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = static_cast<double>(s) * h;
    const A k1 = rhs(t, a);
    const A k2 = rhs(t + h / 2, axpy(a, h / 2, k1));
    const A k3 = rhs(t + h / 2, axpy(a, h / 2, k2));
    const A k4 = rhs(t + h, axpy(a, h, k3));
    for (int i = 0; i < 4; ++i) a[i] += h / 6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return a;
}

}  // namespace spinchain
