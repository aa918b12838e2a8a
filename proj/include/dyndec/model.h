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

#ifndef DYNDEC_MODEL_H
#define DYNDEC_MODEL_H

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dyndec/types.h"

namespace dyndec {

// Open spin-1/2 chain
//
//   H0 = sum_n eps_n S^z_n
//      + J sum_n [S^x_n S^x_{n+1} + S^y_n S^y_{n+1} + delta S^z_n S^z_{n+1}]
//      + alpha J sum_n [S^x_n S^x_{n+2} + S^y_n S^y_{n+2} + delta S^z_n S^z_{n+2}]
//
// Basis index bit (n-1) holds site n; a clear bit is spin up.
struct ChainParams {
  int L = 10;
  double J = 1.0;
  double delta = 0.0;
  double alpha = 0.0;
  std::vector<double> epsilon;

  /// Throws DomainError on L < 2, J <= 0, negative delta/alpha or a wrong-sized epsilon.
  void validate() const;

  static ChainParams clean(int L, double delta, double alpha = 0.0, double J = 1.0);
};

/// Uniform random splittings in [center - width, center + width]; same seed, same list.
std::vector<double> random_splittings(int L, double center, double width, std::uint64_t seed);

/// I x ... x sigma^axis/2 x ... x I acting on `site` (1-based).
ComplexMatrix spin_operator(Axis axis, int site, int L);

/// sum_n S^z_n
ComplexMatrix total_sz(int L);

/// sum_n eps_n S^z_n
ComplexMatrix zeeman_term(std::span<const double> epsilon);

/// XXZ couplings between sites n and n + range for every n, with the given
/// flip-flop and Ising prefactors (J and J*delta for the model terms).
ComplexMatrix exchange_term(int L, int range, double flipflop, double ising);

ComplexMatrix nn_term(const ChainParams& p);   // H_NN
ComplexMatrix nnn_term(const ChainParams& p);  // H_NNN, without the alpha factor

ComplexMatrix build_hamiltonian(const ChainParams& p);

/// Coefficients of one bond in an arbitrary operator, read off by
/// Hilbert-Schmidt projection onto S^a_i S^a_j.
struct BondWeights {
  int i = 0;
  int j = 0;
  double xx = 0.0;
  double yy = 0.0;
  double zz = 0.0;
};

struct CouplingWeights {
  std::vector<double> field;      // coefficient of S^z_n, n = 1..L
  std::vector<BondWeights> nn;    // bonds (n, n+1)
  std::vector<BondWeights> nnn;   // bonds (n, n+2)
};

CouplingWeights coupling_weights(const ComplexMatrix& H, int L);

/// Tr(H * sigma^{a_1}_{s_1} ... sigma^{a_k}_{s_k}) in O(D).
Complex pauli_trace(const ComplexMatrix& H, int L, std::span<const std::pair<int, Axis>> factors);

/// Infers L from a 2^L x 2^L operator; throws DomainError otherwise.
int chain_length(const ComplexMatrix& M);

double hermiticity_defect(const ComplexMatrix& M);

}  // namespace dyndec

#endif  // DYNDEC_MODEL_H
