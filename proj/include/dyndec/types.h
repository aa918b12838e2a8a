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

#ifndef DYNDEC_TYPES_H
#define DYNDEC_TYPES_H

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dyndec {

using Complex = std::complex<double>;

/// Dense column-major complex operator on the full 2^L Hilbert space.
using ComplexMatrix = Eigen::MatrixXcd;
/// Operator expected to be unitary; kept as an alias so Eigen expressions compose.
using Unitary = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;

enum class Axis { kX, kY, kZ };

enum class Sampling { kPerCycle, kPerPulse };

char axis_char(Axis axis);
Axis parse_axis(char c);
std::string sampling_name(Sampling s);
Sampling parse_sampling(const std::string& s);

/// Dimension 2^L of the chain Hilbert space.
inline std::size_t hilbert_dim(int L) { return std::size_t{1} << L; }

/// Bit mask for a 1-based site. Site 1 is the least significant bit.
inline std::uint64_t site_mask(int site) { return std::uint64_t{1} << (site - 1); }

/// Precondition violations: bad indices, bad parameters, shape mismatches.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Iterative kernels that fail to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested behaviour that the implementation deliberately does not provide.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The pulse product over one cycle is not proportional to the identity.
class CyclicityError : public std::runtime_error {
 public:
  CyclicityError(const std::string& what, double defect)
      : std::runtime_error(what), defect_(defect) {}
  double defect() const { return defect_; }

 private:
  double defect_;
};

}  // namespace dyndec

#endif  // DYNDEC_TYPES_H
