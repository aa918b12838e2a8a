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

#include "dyndec/observables.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace dyndec {

namespace {

void check_length(int L) {
  if (L < 1 || L > 20) throw DomainError("chain length out of range: " + std::to_string(L));
}

void check_state(const StateVector& psi, int L) {
  check_length(L);
  if (static_cast<std::size_t>(psi.size()) != hilbert_dim(L)) {
    throw DomainError("state has " + std::to_string(psi.size()) + " components, expected 2^" + std::to_string(L));
  }
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-8) {
    std::ostringstream err;
    err << "state is not normalized (norm = " << norm << ")";
    throw DomainError(err.str());
  }
}

// sum over sites [1, upto] of S^z in basis state b.
double sz_sum(std::uint64_t b, int upto) {
  const std::uint64_t mask = (std::uint64_t{1} << upto) - 1;
  const int down = std::popcount(b & mask);
  return 0.5 * (upto - 2 * down);
}

double weighted_sz(const StateVector& psi, int upto) {
  double m = 0.0;
  for (Eigen::Index b = 0; b < psi.size(); ++b) m += std::norm(psi(b)) * sz_sum(static_cast<std::uint64_t>(b), upto);
  return m;
}

}  // namespace

StateVector domain_wall_state(int L) {
  check_length(L);
  if (L % 2 != 0) throw DomainError("domain wall needs an even chain, got L = " + std::to_string(L));
  // Sites L/2 + 1 .. L down.
  const std::uint64_t bits = ((std::uint64_t{1} << L) - 1) & ~((std::uint64_t{1} << (L / 2)) - 1);
  return basis_state(L, bits);
}

StateVector basis_state(int L, std::uint64_t bits) {
  check_length(L);
  if (bits >= hilbert_dim(L)) throw DomainError("basis index out of range");
  StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(hilbert_dim(L)));
  psi(static_cast<Eigen::Index>(bits)) = 1.0;
  return psi;
}

double local_magnetization(const StateVector& psi, int L) {
  check_state(psi, L);
  if (L % 2 != 0) throw DomainError("local magnetization needs an even chain, got L = " + std::to_string(L));
  return weighted_sz(psi, L / 2);
}

double total_magnetization(const StateVector& psi, int L) {
  check_state(psi, L);
  return weighted_sz(psi, L);
}

double propagator_fidelity(const Unitary& target, const Unitary& actual) {
  if (target.rows() != actual.rows() || target.cols() != actual.cols() || target.rows() != target.cols()) {
    throw DomainError("propagator_fidelity: dimension mismatch");
  }
  // Tr(A^dagger B) = sum_ij conj(A_ij) B_ij
  const Complex tr = (target.conjugate().cwiseProduct(actual)).sum();
  return std::min(1.0, std::abs(tr) / static_cast<double>(target.rows()));
}

double propagator_fidelity_rotated(const EigenDecomposition& target, const ComplexMatrix& rotated, double t) {
  const Eigen::Index D = target.dim();
  if (rotated.rows() != D || rotated.cols() != D) throw DomainError("propagator_fidelity_rotated: dimension mismatch");
  Complex tr = 0.0;
  for (Eigen::Index k = 0; k < D; ++k) {
    const Complex diag = target.eigenvectors.col(k).dot(rotated.col(k));  // conjugates the left operand
    tr += std::polar(1.0, target.eigenvalues(k) * t) * diag;
  }
  return std::min(1.0, std::abs(tr) / static_cast<double>(D));
}

FreeFidelity::FreeFidelity(const EigenDecomposition& target, const EigenDecomposition& actual)
    : target_energies_(target.eigenvalues), actual_energies_(actual.eigenvalues) {
  if (target.dim() != actual.dim()) throw DomainError("FreeFidelity: dimension mismatch");
  const ComplexMatrix O = target.eigenvectors.adjoint() * actual.eigenvectors;
  overlap_ = O.cwiseAbs2();
}

double FreeFidelity::at(double t) const {
  const Eigen::Index D = target_energies_.size();
  Eigen::VectorXcd actual_phase(D);
  Eigen::VectorXcd target_phase(D);
  for (Eigen::Index k = 0; k < D; ++k) {
    actual_phase(k) = std::polar(1.0, -actual_energies_(k) * t);
    target_phase(k) = std::polar(1.0, target_energies_(k) * t);
  }
  const Eigen::VectorXcd mixed = overlap_.cast<Complex>() * actual_phase;
  const Complex tr = target_phase.transpose() * mixed;
  return std::min(1.0, std::abs(tr) / static_cast<double>(D));
}

void TimeSeries::push(double t, double value) {
  if (!times_.empty() && !(t > times_.back())) {
    std::ostringstream err;
    err << "time series '" << label_ << "': sample time " << t << " does not follow " << times_.back();
    throw DomainError(err.str());
  }
  times_.push_back(t);
  values_.push_back(value);
}

double TimeSeries::interpolate(double t) const {
  if (times_.empty()) throw DomainError("interpolate: empty series");
  const double eps = 1e-12 * std::max(1.0, std::abs(t));
  if (t < times_.front() - eps || t > times_.back() + eps) {
    std::ostringstream err;
    err << "interpolate: t = " << t << " outside [" << times_.front() << ", " << times_.back() << "]";
    throw DomainError(err.str());
  }
  auto it = std::lower_bound(times_.begin(), times_.end(), t);
  if (it == times_.end()) return values_.back();
  const auto i = static_cast<std::size_t>(it - times_.begin());
  if (i == 0 || std::abs(*it - t) <= eps) return values_[i];
  const double w = (t - times_[i - 1]) / (times_[i] - times_[i - 1]);
  return (1.0 - w) * values_[i - 1] + w * values_[i];
}

}  // namespace dyndec
