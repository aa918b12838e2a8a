// Copyright 2026 The dyndec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dyndec/control.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "dyndec/model.h"

namespace dyndec {

namespace {

using Gate = std::array<Complex, 4>;  // row-major 2x2 in the (up, down) basis

Gate rotation_gate(Axis axis, double angle) {
  double c = std::cos(angle / 2);
  double s = std::sin(angle / 2);
  if (angle == kPi) {
    c = 0.0;
    s = 1.0;
  }
  const Complex I(0, 1);
  switch (axis) {
    case Axis::kX:
      return {c, -I * s, -I * s, c};
    case Axis::kY:
      return {c, -s, s, c};
    case Axis::kZ:
      return {Complex(c, -s), 0.0, 0.0, Complex(c, s)};
  }
  return {1.0, 0.0, 0.0, 1.0};
}

Gate adjoint(const Gate& g) { return {std::conj(g[0]), std::conj(g[2]), std::conj(g[1]), std::conj(g[3])}; }

// Visits every index pair (b0, b1) that differs only in `mask`, b0 having the bit clear.
template <typename F>
void for_each_pair(Eigen::Index D, Eigen::Index mask, F&& f) {
  for (Eigen::Index hi = 0; hi < D; hi += 2 * mask) {
    for (Eigen::Index lo = 0; lo < mask; ++lo) f(hi + lo, hi + lo + mask);
  }
}

void gate_left(const Gate& g, int site, ComplexMatrix& M) {
  const Eigen::Index D = M.rows();
  const auto mask = static_cast<Eigen::Index>(site_mask(site));
  for (Eigen::Index c = 0; c < M.cols(); ++c) {
    Complex* col = M.col(c).data();
    for_each_pair(D, mask, [&](Eigen::Index b0, Eigen::Index b1) {
      const Complex a0 = col[b0];
      const Complex a1 = col[b1];
      col[b0] = g[0] * a0 + g[1] * a1;
      col[b1] = g[2] * a0 + g[3] * a1;
    });
  }
}

void gate_right(const Gate& g, int site, ComplexMatrix& M) {
  const auto mask = static_cast<Eigen::Index>(site_mask(site));
  for_each_pair(M.cols(), mask, [&](Eigen::Index c0, Eigen::Index c1) {
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
      const Complex a0 = M(r, c0);
      const Complex a1 = M(r, c1);
      M(r, c0) = a0 * g[0] + a1 * g[2];
      M(r, c1) = a0 * g[1] + a1 * g[3];
    }
  });
}

void gate_state(const Gate& g, int site, StateVector& psi) {
  const auto mask = static_cast<Eigen::Index>(site_mask(site));
  for_each_pair(psi.size(), mask, [&](Eigen::Index b0, Eigen::Index b1) {
    const Complex a0 = psi(b0);
    const Complex a1 = psi(b1);
    psi(b0) = g[0] * a0 + g[1] * a1;
    psi(b1) = g[2] * a0 + g[3] * a1;
  });
}

int dim_to_length(Eigen::Index D) {
  int L = 0;
  while ((Eigen::Index{1} << L) < D) ++L;
  if ((Eigen::Index{1} << L) != D) throw DomainError("dimension is not a power of two");
  return L;
}

void require_positive(double tau, const char* name) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    std::ostringstream err;
    err << name << " must be positive, got " << tau;
    throw DomainError(err.str());
  }
}

std::vector<int> merge_sites(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

Pulse pi_pulse(Axis axis, std::vector<int> sites) { return Pulse{axis, kPi, std::move(sites)}; }

// Number of half-turns, or -1 when the angle is not a multiple of pi.
long half_turns(double angle) {
  const double k = std::round(angle / kPi);
  if (std::abs(angle - k * kPi) > 1e-12) return -1;
  return static_cast<long>(k);
}

}  // namespace

void Pulse::validate(int L) const {
  if (sites.empty()) throw DomainError("pulse targets no sites");
  if (!std::isfinite(angle)) throw DomainError("pulse angle is not finite");
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i] < 1 || sites[i] > L) {
      throw DomainError("pulse site " + std::to_string(sites[i]) + " outside 1.." + std::to_string(L));
    }
    if (i > 0 && sites[i] <= sites[i - 1]) throw DomainError("pulse sites must be sorted and distinct");
  }
}

double PulseSchedule::cycle_time() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.tau;
  return t;
}

double PulseSchedule::offset(std::size_t k) const {
  double t = 0.0;
  for (std::size_t j = 0; j < k && j < segments.size(); ++j) t += segments[j].tau;
  return t;
}

void PulseSchedule::validate(int L) const {
  if (segments.empty()) throw DomainError("schedule has no segments");
  for (const auto& s : segments) {
    require_positive(s.tau, "segment duration");
    s.pulse.validate(L);
  }
}

FluidToDimer FluidToDimer::for_target(double tau1, double alpha, double alpha_w) {
  require_positive(tau1, "tau1");
  if (!(alpha > 0.0)) throw DomainError("fluid-to-dimer schedule needs alpha > 0");
  const double tau_a = tau1 * (alpha_w - alpha) / (alpha_w + 3.0 * alpha);
  if (!(tau_a > 0.0)) {
    std::ostringstream err;
    err << "alpha_w = " << alpha_w << " with alpha = " << alpha << " gives tau_a = " << tau_a << " <= 0";
    throw DomainError(err.str());
  }
  return {tau1, tau_a};
}

std::string sequence_name(const SequenceSpec& spec) {
  struct Namer {
    std::string operator()(const GlobalPiX&) const { return "global_pi_x"; }
    std::string operator()(const EightPulse&) const { return "eight_pulse"; }
    std::string operator()(const FourPulse&) const { return "four_pulse"; }
    std::string operator()(const ZTwoPulse&) const { return "z_two_pulse"; }
    std::string operator()(const FourPulseGapless&) const { return "four_pulse_gapless"; }
    std::string operator()(const FluidToDimer&) const { return "fluid_to_dimer"; }
    std::string operator()(const ZNNNFlipFlop&) const { return "z_nnn_flipflop"; }
  };
  return std::visit(Namer{}, spec);
}

std::vector<int> strided_sites(int L, int first, int step) {
  std::vector<int> out;
  for (int n = first; n <= L; n += step) out.push_back(n);
  return out;
}

PulseSchedule make_sequence(const SequenceSpec& spec, int L) {
  if (L < 1 || L > 20) throw DomainError("chain length out of range: " + std::to_string(L));
  const auto odd = strided_sites(L, 1, 2);
  const auto even = strided_sites(L, 2, 2);
  auto four_pulse = [&](double t1, double t2, double t3, double t4) {
    if (L < 2) throw DomainError("four-pulse sequences need L >= 2");
    const Pulse y_odd = pi_pulse(Axis::kY, odd);
    const Pulse x_even = pi_pulse(Axis::kX, even);
    return PulseSchedule{{{t1, y_odd}, {t2, x_even}, {t3, y_odd}, {t4, x_even}}};
  };

  PulseSchedule out = std::visit(
      [&](const auto& s) -> PulseSchedule {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GlobalPiX>) {
          require_positive(s.tau, "tau");
          const Pulse px = pi_pulse(Axis::kX, strided_sites(L, 1, 1));
          return PulseSchedule{{{s.tau, px}, {s.tau, px}}};
        } else if constexpr (std::is_same_v<T, EightPulse>) {
          require_positive(s.tau, "tau");
          if (L < 4) throw DomainError("eight-pulse sequence needs L >= 4");
          const auto r1 = strided_sites(L, 1, 4);
          const auto r2 = strided_sites(L, 2, 4);
          const auto r3 = strided_sites(L, 3, 4);
          const auto r4 = strided_sites(L, 4, 4);
          const Pulse a = pi_pulse(Axis::kX, merge_sites(r1, r2));
          const Pulse b = pi_pulse(Axis::kY, merge_sites(r3, r4));
          const Pulse c = pi_pulse(Axis::kX, merge_sites(r2, r3));
          const Pulse d = pi_pulse(Axis::kY, merge_sites(r1, r4));
          const double t = s.tau;
          return PulseSchedule{{{t, a}, {t, b}, {t, a}, {t, b}, {t, c}, {t, d}, {t, c}, {t, d}}};
        } else if constexpr (std::is_same_v<T, FourPulse>) {
          require_positive(s.tau, "tau");
          return four_pulse(s.tau, s.tau, s.tau, s.tau);
        } else if constexpr (std::is_same_v<T, ZTwoPulse>) {
          require_positive(s.tau1, "tau1");
          require_positive(s.tau2, "tau2");
          if (s.tau1 < s.tau2) throw DomainError("z two-pulse sequence needs tau1 >= tau2");
          const Pulse pz = pi_pulse(Axis::kZ, even);
          return PulseSchedule{{{s.tau1, pz}, {s.tau2, pz}}};
        } else if constexpr (std::is_same_v<T, FourPulseGapless>) {
          require_positive(s.tau1, "tau1");
          require_positive(s.tau2, "tau2");
          require_positive(s.tau3, "tau3");
          return four_pulse(s.tau1, s.tau2, s.tau3, s.tau2);
        } else if constexpr (std::is_same_v<T, FluidToDimer>) {
          require_positive(s.tau1, "tau1");
          require_positive(s.tau_a, "tau_a");
          return four_pulse(s.tau1, s.tau_a, s.tau_a, s.tau_a);
        } else {
          require_positive(s.tau, "tau");
          const Pulse pz = pi_pulse(Axis::kZ, merge_sites(strided_sites(L, 1, 4), strided_sites(L, 2, 4)));
          return PulseSchedule{{{s.tau, pz}, {s.tau, pz}}};
        }
      },
      spec);
  out.validate(L);
  return out;
}

Unitary pulse_unitary(const Pulse& p, int L) {
  p.validate(L);
  ComplexMatrix U = ComplexMatrix::Identity(hilbert_dim(L), hilbert_dim(L));
  apply_pulse(p, U);
  return U;
}

void apply_pulse(const Pulse& p, ComplexMatrix& M) {
  p.validate(dim_to_length(M.rows()));
  const Gate g = rotation_gate(p.axis, p.angle);
  for (int site : p.sites) gate_left(g, site, M);
}

void apply_pulse(const Pulse& p, StateVector& psi) {
  p.validate(dim_to_length(psi.size()));
  const Gate g = rotation_gate(p.axis, p.angle);
  for (int site : p.sites) gate_state(g, site, psi);
}

void conjugate_by_pulse(const Pulse& p, ComplexMatrix& M) {
  if (M.rows() != M.cols()) throw DomainError("conjugate_by_pulse: matrix is not square");
  p.validate(dim_to_length(M.rows()));
  const Gate g = rotation_gate(p.axis, p.angle);
  const Gate gd = adjoint(g);
  for (int site : p.sites) {
    gate_left(gd, site, M);
    gate_right(g, site, M);
  }
}

Unitary control_propagator(const PulseSchedule& schedule, int L, std::size_t k) {
  if (k > schedule.size()) throw DomainError("pulse index out of range");
  ComplexMatrix Q = ComplexMatrix::Identity(hilbert_dim(L), hilbert_dim(L));
  for (std::size_t j = 0; j < k; ++j) apply_pulse(schedule.segments[j].pulse, Q);
  return Q;
}

CyclicityReport cyclicity(const PulseSchedule& schedule, int L) {
  schedule.validate(L);
  const ComplexMatrix Q = control_propagator(schedule, L, schedule.size());
  const Complex phase = Q(0, 0);
  const double defect =
      (Q - phase * ComplexMatrix::Identity(Q.rows(), Q.cols())).cwiseAbs().maxCoeff() + std::abs(std::abs(phase) - 1.0);
  return {phase, defect};
}

void require_cyclic(const PulseSchedule& schedule, int L, double tol) {
  const auto report = cyclicity(schedule, L);
  if (report.defect > tol) {
    std::ostringstream err;
    err << "schedule is not cyclic: ||P_m...P_1 - c I||_max = " << report.defect;
    throw CyclicityError(err.str(), report.defect);
  }
}

ComplexMatrix toggled_hamiltonian(const ComplexMatrix& H0, const PulseSchedule& schedule, std::size_t k) {
  const int L = dim_to_length(H0.rows());
  schedule.validate(L);
  if (k >= schedule.size()) {
    throw DomainError("segment index " + std::to_string(k) + " outside 0.." + std::to_string(schedule.size() - 1));
  }
  // Q_k^dagger H Q_k with Q_k = P_k ... P_1: conjugate by P_k first.
  ComplexMatrix H = H0;
  for (std::size_t j = k; j-- > 0;) conjugate_by_pulse(schedule.segments[j].pulse, H);
  return H;
}

ComplexMatrix average_hamiltonian_0(const ComplexMatrix& H0, const PulseSchedule& schedule) {
  const int L = dim_to_length(H0.rows());
  schedule.validate(L);
  const double Tc = schedule.cycle_time();
  ComplexMatrix acc = ComplexMatrix::Zero(H0.rows(), H0.cols());
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    acc += (schedule.segments[k].tau / Tc) * toggled_hamiltonian(H0, schedule, k);
  }
  return acc;
}

std::string bond_class_name(BondClass c) {
  switch (c) {
    case BondClass::kOddStart:
      return "odd";
    case BondClass::kEvenStart:
      return "even";
    case BondClass::kAll:
      return "all";
  }
  return "?";
}

const std::vector<int>& SignProfile::signs(int range, Axis axis, BondClass bonds) const {
  for (const auto& row : rows) {
    if (row.range == range && row.axis == axis && row.bonds == bonds) return row.signs;
  }
  throw DomainError("no sign row for range " + std::to_string(range));
}

SignProfile coupling_sign_profile(const PulseSchedule& schedule, int L) {
  schedule.validate(L);
  for (const auto& s : schedule.segments) {
    if (half_turns(s.pulse.angle) < 0) {
      throw UnsupportedError("coupling sign profile needs pi rotations, got angle " + std::to_string(s.pulse.angle));
    }
  }
  // flip[n][a]: sign of Q_k^dagger sigma^a_n Q_k.
  std::vector<std::array<int, 3>> flip(L + 1, {1, 1, 1});
  std::vector<std::vector<std::array<int, 3>>> per_segment;
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    per_segment.push_back(flip);
    const Pulse& p = schedule.segments[k].pulse;
    if (half_turns(p.angle) % 2 == 0) continue;
    for (int n : p.sites) {
      for (int a = 0; a < 3; ++a) {
        if (a != static_cast<int>(p.axis)) flip[n][a] = -flip[n][a];
      }
    }
  }

  SignProfile profile;
  profile.segments = schedule.size();
  for (int range : {1, 2}) {
    for (BondClass cls : {BondClass::kOddStart, BondClass::kEvenStart, BondClass::kAll}) {
      for (Axis axis : {Axis::kX, Axis::kY, Axis::kZ}) {
        SignRow row{range, axis, cls, {}};
        const int a = static_cast<int>(axis);
        for (const auto& f : per_segment) {
          int sign = 0;
          bool seen = false;
          for (int n = 1; n + range <= L; ++n) {
            if (cls == BondClass::kOddStart && n % 2 == 0) continue;
            if (cls == BondClass::kEvenStart && n % 2 == 1) continue;
            const int s = f[n][a] * f[n + range][a];
            if (!seen) {
              sign = s;
              seen = true;
            } else if (s != sign) {
              sign = 0;
            }
          }
          row.signs.push_back(sign);
        }
        profile.rows.push_back(std::move(row));
      }
    }
  }
  return profile;
}

Unitary cycle_propagator(const PropagatorCache& free, const PulseSchedule& schedule) {
  const Eigen::Index D = free.decomposition().dim();
  const int L = dim_to_length(D);
  require_cyclic(schedule, L);
  ComplexMatrix U;
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const auto& seg = schedule.segments[k];
    if (k == 0) {
      U = *free.get(seg.tau);
    } else {
      ComplexMatrix next(D, D);
      next.noalias() = *free.get(seg.tau) * U;
      U.swap(next);
    }
    apply_pulse(seg.pulse, U);
  }
  return U;
}

Unitary cycle_propagator(const ComplexMatrix& H0, const PulseSchedule& schedule) {
  const PropagatorCache free(H0);
  return cycle_propagator(free, schedule);
}

Unitary toggled_frame_propagator(const ComplexMatrix& H0, const PulseSchedule& schedule) {
  ComplexMatrix U = ComplexMatrix::Identity(H0.rows(), H0.cols());
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    U = expm_i(toggled_hamiltonian(H0, schedule, k), schedule.segments[k].tau) * U;
  }
  return U;
}

void evolve_pulsed(const PropagatorCache& free, const PulseSchedule& schedule, const StateVector& psi0,
                   long n_cycles, Sampling sampling, const SnapshotVisitor& visit) {
  const Eigen::Index D = free.decomposition().dim();
  if (psi0.size() != D) throw DomainError("evolve_pulsed: state dimension does not match the Hamiltonian");
  if (n_cycles < 0) throw DomainError("evolve_pulsed: negative cycle count");
  const int L = dim_to_length(D);
  require_cyclic(schedule, L);

  const double Tc = schedule.cycle_time();
  std::vector<double> offsets;
  for (std::size_t k = 0; k <= schedule.size(); ++k) offsets.push_back(schedule.offset(k));

  StateSnapshot snap{0.0, 0, 0, psi0};
  visit(snap);
  StateVector tmp(D);
  for (long n = 0; n < n_cycles; ++n) {
    for (std::size_t k = 0; k < schedule.size(); ++k) {
      const auto& seg = schedule.segments[k];
      tmp.noalias() = *free.get(seg.tau) * snap.psi;
      snap.psi.swap(tmp);
      apply_pulse(seg.pulse, snap.psi);
      const bool end_of_cycle = k + 1 == schedule.size();
      if (end_of_cycle) {
        snap.cycle = n + 1;
        snap.pulse = 0;
        snap.t = static_cast<double>(n + 1) * Tc;
      } else {
        snap.cycle = n;
        snap.pulse = k + 1;
        snap.t = static_cast<double>(n) * Tc + offsets[k + 1];
      }
      if (sampling == Sampling::kPerPulse || end_of_cycle) visit(snap);
    }
  }
}

std::vector<StateSnapshot> evolve_pulsed(const ComplexMatrix& H0, const PulseSchedule& schedule,
                                         const StateVector& psi0, long n_cycles, Sampling sampling) {
  const PropagatorCache free(H0);
  std::vector<StateSnapshot> out;
  evolve_pulsed(free, schedule, psi0, n_cycles, sampling, [&](const StateSnapshot& s) { out.push_back(s); });
  return out;
}

Unitary matrix_power(const Unitary& U, long n) {
  if (U.rows() != U.cols()) throw DomainError("matrix_power: matrix is not square");
  if (n < 0) throw DomainError("matrix_power: negative exponent");
  ComplexMatrix result = ComplexMatrix::Identity(U.rows(), U.cols());
  ComplexMatrix base = U;
  bool first = true;
  while (n > 0) {
    if (n & 1) {
      if (first) {
        result = base;
        first = false;
      } else {
        result = (result * base).eval();
      }
    }
    n >>= 1;
    if (n > 0) base = (base * base).eval();
  }
  return result;
}

}  // namespace dyndec
