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

#ifndef DYNDEC_EVOLVE_H
#define DYNDEC_EVOLVE_H

#include <map>
#include <memory>
#include <shared_mutex>

#include "dyndec/types.h"

namespace dyndec {

/// H = V diag(eigenvalues) V^dagger, eigenvalues ascending.
struct EigenDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;

  Eigen::Index dim() const { return eigenvalues.size(); }
};

/// Hermitian eigensolver (Householder tridiagonalization followed by implicit
/// QR with Wilkinson shifts). Throws DomainError when ||H - H^dagger||_max
/// exceeds 1e-12 * max(1, ||H||_max), NumericalError if the QR iteration
/// does not converge.
EigenDecomposition eigh(const ComplexMatrix& H);

/// exp(-i H t) = V exp(-i Lambda t) V^dagger.
Unitary expm_i(const EigenDecomposition& eig, double t);
Unitary expm_i(const ComplexMatrix& H, double t);

/// exp(-i H t) |psi> without forming the propagator.
StateVector evolve_state(const EigenDecomposition& eig, const StateVector& psi, double t);

StateVector apply(const Unitary& U, const StateVector& psi);

double unitarity_defect(const Unitary& U);

/// exp(-i H tau) for the distinct durations of a schedule, built once from a
/// single eigendecomposition. Concurrent get() calls are safe; inserts take
/// an exclusive lock.
class PropagatorCache {
 public:
  explicit PropagatorCache(EigenDecomposition eig);
  explicit PropagatorCache(const ComplexMatrix& H);

  std::shared_ptr<const Unitary> get(double tau) const;
  const EigenDecomposition& decomposition() const { return eig_; }
  std::size_t size() const;

 private:
  EigenDecomposition eig_;
  mutable std::shared_mutex mutex_;
  mutable std::map<double, std::shared_ptr<const Unitary>> cache_;
};

}  // namespace dyndec

#endif  // DYNDEC_EVOLVE_H
