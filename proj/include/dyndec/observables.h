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

#ifndef DYNDEC_OBSERVABLES_H
#define DYNDEC_OBSERVABLES_H

#include <cstdint>
#include <string>
#include <vector>

#include "dyndec/evolve.h"
#include "dyndec/types.h"

namespace dyndec {

/// |up ... up down ... down>, up spins on sites 1..L/2. L must be even.
StateVector domain_wall_state(int L);

/// Computational basis state; bit n-1 of `bits` set means site n is down.
StateVector basis_state(int L, std::uint64_t bits);

/// <psi| sum_{n <= L/2} S^z_n |psi>, read from |amplitude|^2 in O(D).
/// Throws DomainError for odd L or when | ||psi|| - 1 | > 1e-8.
double local_magnetization(const StateVector& psi, int L);

/// <psi| sum_n S^z_n |psi>
double total_magnetization(const StateVector& psi, int L);

/// |Tr(U_w^dagger U)| / D, in [0, 1].
double propagator_fidelity(const Unitary& target, const Unitary& actual);

/// |Tr(exp(+i H_w t) U)| / D using the target's eigenbasis. `rotated` is
/// U V_w; costs O(D^2) instead of a matrix product.
double propagator_fidelity_rotated(const EigenDecomposition& target, const ComplexMatrix& rotated, double t);

/// |Tr(exp(i H_w t) exp(-i H t))| / D for two time-independent Hamiltonians.
/// `overlap` holds |<w_a|h_b>|^2 for the two eigenbases.
class FreeFidelity {
 public:
  FreeFidelity(const EigenDecomposition& target, const EigenDecomposition& actual);
  double at(double t) const;

 private:
  RealVector target_energies_;
  RealVector actual_energies_;
  Eigen::MatrixXd overlap_;
};

/// Ordered (t, value) samples.
class TimeSeries {
 public:
  TimeSeries() = default;
  TimeSeries(std::string label, Sampling sampling) : label_(std::move(label)), sampling_(sampling) {}

  /// Throws DomainError unless t exceeds the previous sample time.
  void push(double t, double value);

  const std::string& label() const { return label_; }
  Sampling sampling() const { return sampling_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }
  double time(std::size_t i) const { return times_.at(i); }
  double value(std::size_t i) const { return values_.at(i); }

  /// Piecewise-linear interpolation; t must lie inside the sampled range.
  double interpolate(double t) const;

 private:
  std::string label_;
  Sampling sampling_ = Sampling::kPerCycle;
  std::vector<double> times_;
  std::vector<double> values_;
};

}  // namespace dyndec

#endif  // DYNDEC_OBSERVABLES_H
