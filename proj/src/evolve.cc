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

#include "dyndec/evolve.h"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "dyndec/model.h"

namespace dyndec {

EigenDecomposition eigh(const ComplexMatrix& H) {
  if (H.rows() != H.cols()) throw DomainError("eigh: matrix is not square");
  if (H.size() == 0) return {};
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  const double defect = hermiticity_defect(H);
  if (defect > 1e-12 * scale) {
    std::ostringstream err;
    err << "eigh: matrix is not Hermitian (||H - H^dagger||_max = " << defect << ")";
    throw DomainError(err.str());
  }
  // Eigen reads only the lower triangle; symmetrize so both halves count.
  const ComplexMatrix sym = 0.5 * (H + H.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    std::ostringstream err;
    err << "eigh: QR iteration did not converge within " << Eigen::SelfAdjointEigenSolver<ComplexMatrix>::m_maxIterations
        << " sweeps per eigenvalue (D = " << H.rows() << ", ||H||_max = " << scale << ")";
    throw NumericalError(err.str());
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Unitary expm_i(const EigenDecomposition& eig, double t) {
  const Eigen::Index D = eig.dim();
  Eigen::VectorXcd phases(D);
  for (Eigen::Index k = 0; k < D; ++k) phases(k) = std::polar(1.0, -eig.eigenvalues(k) * t);
  Unitary U(D, D);
  U.noalias() = eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
  return U;
}

Unitary expm_i(const ComplexMatrix& H, double t) { return expm_i(eigh(H), t); }

StateVector evolve_state(const EigenDecomposition& eig, const StateVector& psi, double t) {
  if (psi.size() != eig.dim()) throw DomainError("evolve_state: dimension mismatch");
  if (t == 0.0) return psi;
  StateVector coeff = eig.eigenvectors.adjoint() * psi;
  for (Eigen::Index k = 0; k < coeff.size(); ++k) coeff(k) *= std::polar(1.0, -eig.eigenvalues(k) * t);
  return eig.eigenvectors * coeff;
}

StateVector apply(const Unitary& U, const StateVector& psi) {
  if (U.cols() != psi.size() || U.rows() != U.cols()) {
    std::ostringstream err;
    err << "apply: operator is " << U.rows() << "x" << U.cols() << ", state has " << psi.size()
        << " components";
    throw DomainError(err.str());
  }
  StateVector out(psi.size());
  out.noalias() = U * psi;
  return out;
}

double unitarity_defect(const Unitary& U) {
  if (U.rows() != U.cols()) throw DomainError("unitarity_defect: matrix is not square");
  const ComplexMatrix G = U.adjoint() * U;
  return (G - ComplexMatrix::Identity(U.rows(), U.cols())).cwiseAbs().maxCoeff();
}

PropagatorCache::PropagatorCache(EigenDecomposition eig) : eig_(std::move(eig)) {}

PropagatorCache::PropagatorCache(const ComplexMatrix& H) : eig_(eigh(H)) {}

std::shared_ptr<const Unitary> PropagatorCache::get(double tau) const {
  {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(tau);
    if (it != cache_.end()) return it->second;
  }
  auto U = std::make_shared<const Unitary>(expm_i(eig_, tau));
  std::unique_lock lock(mutex_);
  auto [it, inserted] = cache_.emplace(tau, std::move(U));
  return it->second;
}

std::size_t PropagatorCache::size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

}  // namespace dyndec
