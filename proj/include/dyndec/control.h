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

#ifndef DYNDEC_CONTROL_H
#define DYNDEC_CONTROL_H

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "dyndec/evolve.h"
#include "dyndec/types.h"

namespace dyndec {

/// Critical NNN ratio separating the spin-fluid and dimer phases of the
/// isotropic chain.
inline constexpr double kCriticalAlpha = 0.241;

/// Instantaneous rotation prod_{n in sites} exp(-i angle S^axis_n).
struct Pulse {
  Axis axis = Axis::kX;
  double angle = kPi;
  std::vector<int> sites;  // sorted, distinct, 1-based

  void validate(int L) const;
};

/// Free evolution for `tau`, then `pulse`.
struct Segment {
  double tau = 0.0;
  Pulse pulse;
};

struct PulseSchedule {
  std::vector<Segment> segments;

  double cycle_time() const;
  std::size_t size() const { return segments.size(); }
  /// Start time of segment k within the cycle (k == size() gives T_c).
  double offset(std::size_t k) const;
  void validate(int L) const;
};

// Named sequences. Intervals are in units of 1/J.

/// pi-x on every site after each of two equal intervals.
struct GlobalPiX {
  double tau = 0.025;
};
/// Eight site-selective pi pulses with equal spacing; averages H_NN + H_NNN to H_NN / 2.
struct EightPulse {
  double tau = 0.025;
};
/// y on odd sites, x on even sites, alternating; averages H_NN + H_NNN to H_NNN.
struct FourPulse {
  double tau = 0.025;
};
/// Two pi-z pulses on even sites after tau1 and tau2; scales the NN flip-flop by (tau1 - tau2)/T_c.
struct ZTwoPulse {
  double tau1 = 0.1;
  double tau2 = 0.06;
};
/// FourPulse pulses with intervals tau1, tau2, tau3, tau2.
struct FourPulseGapless {
  double tau1 = 0.03;
  double tau2 = 0.02;
  double tau3 = 0.015;
};
/// FourPulse pulses with intervals tau1, tau_a, tau_a, tau_a.
struct FluidToDimer {
  double tau1 = 0.05;
  double tau_a = 0.0;

  /// Picks tau_a so that alpha T_c / (tau1 - tau_a) = alpha_w.
  static FluidToDimer for_target(double tau1, double alpha, double alpha_w);
};
/// Two equal-spaced pi-z pulses on sites 1, 2 (mod 4); removes the NNN flip-flop.
struct ZNNNFlipFlop {
  double tau = 0.025;
};

using SequenceSpec =
    std::variant<GlobalPiX, EightPulse, FourPulse, ZTwoPulse, FourPulseGapless, FluidToDimer, ZNNNFlipFlop>;

std::string sequence_name(const SequenceSpec& spec);

/// Sites r, r + step, r + 2 step, ... up to L.
std::vector<int> strided_sites(int L, int first, int step);

PulseSchedule make_sequence(const SequenceSpec& spec, int L);

Unitary pulse_unitary(const Pulse& p, int L);

/// M <- P M, in O(D^2 |sites|).
void apply_pulse(const Pulse& p, ComplexMatrix& M);
void apply_pulse(const Pulse& p, StateVector& psi);
/// M <- P^dagger M P.
void conjugate_by_pulse(const Pulse& p, ComplexMatrix& M);

/// Q_k = P_k ... P_1 (identity for k = 0).
Unitary control_propagator(const PulseSchedule& schedule, int L, std::size_t k);

struct CyclicityReport {
  Complex phase;  // P_m ... P_1 ~ phase * I
  double defect;  // || P_m ... P_1 - phase * I ||_max
};

CyclicityReport cyclicity(const PulseSchedule& schedule, int L);

/// Throws CyclicityError when the defect exceeds `tol`.
void require_cyclic(const PulseSchedule& schedule, int L, double tol = 1e-10);

/// H_k = Q_k^dagger H0 Q_k.
ComplexMatrix toggled_hamiltonian(const ComplexMatrix& H0, const PulseSchedule& schedule, std::size_t k);

/// sum_k (tau_{k+1} / T_c) H_k.
ComplexMatrix average_hamiltonian_0(const ComplexMatrix& H0, const PulseSchedule& schedule);

enum class BondClass { kOddStart, kEvenStart, kAll };

std::string bond_class_name(BondClass c);

/// Sign picked up by S^a_i S^a_{i+range} in each toggling-frame segment.
/// A sign of 0 marks a class whose bonds disagree.
struct SignRow {
  int range = 1;
  Axis axis = Axis::kX;
  BondClass bonds = BondClass::kAll;
  std::vector<int> signs;
};

struct SignProfile {
  std::size_t segments = 0;
  std::vector<SignRow> rows;

  const std::vector<int>& signs(int range, Axis axis, BondClass bonds) const;
};

/// Symbolic Pauli conjugation; every pulse angle must be a multiple of pi.
SignProfile coupling_sign_profile(const PulseSchedule& schedule, int L);

Unitary cycle_propagator(const ComplexMatrix& H0, const PulseSchedule& schedule);
Unitary cycle_propagator(const PropagatorCache& free, const PulseSchedule& schedule);

/// prod_k exp(-i H_k tau_{k+1}) with the toggled Hamiltonians, the rotating-frame route.
Unitary toggled_frame_propagator(const ComplexMatrix& H0, const PulseSchedule& schedule);

struct StateSnapshot {
  double t = 0.0;
  long cycle = 0;     // completed cycles
  std::size_t pulse = 0;  // pulses applied within the current cycle
  StateVector psi;
};

using SnapshotVisitor = std::function<void(const StateSnapshot&)>;

/// Streams the initial state and then every sampling instant to `visit`.
void evolve_pulsed(const PropagatorCache& free, const PulseSchedule& schedule, const StateVector& psi0,
                   long n_cycles, Sampling sampling, const SnapshotVisitor& visit);

std::vector<StateSnapshot> evolve_pulsed(const ComplexMatrix& H0, const PulseSchedule& schedule,
                                         const StateVector& psi0, long n_cycles, Sampling sampling);

/// U^n by repeated squaring.
Unitary matrix_power(const Unitary& U, long n);

}  // namespace dyndec

#endif  // DYNDEC_CONTROL_H
