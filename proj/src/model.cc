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

#include "dyndec/model.h"

#include <cmath>
#include <random>
#include <sstream>

namespace dyndec {

char axis_char(Axis axis) {
  switch (axis) {
    case Axis::kX:
      return 'x';
    case Axis::kY:
      return 'y';
    case Axis::kZ:
      return 'z';
  }
  return '?';
}

Axis parse_axis(char c) {
  switch (c) {
    case 'x':
    case 'X':
      return Axis::kX;
    case 'y':
    case 'Y':
      return Axis::kY;
    case 'z':
    case 'Z':
      return Axis::kZ;
    default:
      throw DomainError(std::string("unknown axis '") + c + "'");
  }
}

std::string sampling_name(Sampling s) { return s == Sampling::kPerCycle ? "per_cycle" : "per_pulse"; }

Sampling parse_sampling(const std::string& s) {
  if (s == "per_cycle" || s == "cycle") return Sampling::kPerCycle;
  if (s == "per_pulse" || s == "pulse") return Sampling::kPerPulse;
  throw DomainError("unknown sampling policy '" + s + "'");
}

void ChainParams::validate() const {
  std::ostringstream err;
  if (L < 2) {
    err << "chain needs L >= 2, got " << L;
  } else if (L > 20) {
    err << "L = " << L << " is beyond what dense storage can hold";
  } else if (!(J > 0.0)) {
    err << "coupling J must be positive, got " << J;
  } else if (!(delta >= 0.0)) {
    err << "anisotropy must be non-negative, got " << delta;
  } else if (!(alpha >= 0.0)) {
    err << "NNN ratio must be non-negative, got " << alpha;
  } else if (epsilon.size() != static_cast<std::size_t>(L)) {
    err << "expected " << L << " Zeeman splittings, got " << epsilon.size();
  } else {
    return;
  }
  throw DomainError(err.str());
}

ChainParams ChainParams::clean(int L, double delta, double alpha, double J) {
  ChainParams p;
  p.L = L;
  p.J = J;
  p.delta = delta;
  p.alpha = alpha;
  p.epsilon.assign(L > 0 ? L : 0, 0.0);
  return p;
}

std::vector<double> random_splittings(int L, double center, double width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(center - width, center + width);
  std::vector<double> eps(L);
  for (auto& e : eps) e = dist(rng);
  return eps;
}

namespace {

void check_site(int site, int L) {
  if (L < 1 || L > 20) throw DomainError("chain length out of range: " + std::to_string(L));
  if (site < 1 || site > L) {
    throw DomainError("site " + std::to_string(site) + " outside 1.." + std::to_string(L));
  }
}

inline double sz_value(std::uint64_t b, int site) { return (b & site_mask(site)) ? -0.5 : 0.5; }

}  // namespace

ComplexMatrix spin_operator(Axis axis, int site, int L) {
  check_site(site, L);
  const auto D = static_cast<Eigen::Index>(hilbert_dim(L));
  const std::uint64_t m = site_mask(site);
  ComplexMatrix S = ComplexMatrix::Zero(D, D);
  for (Eigen::Index b = 0; b < D; ++b) {
    const auto ub = static_cast<std::uint64_t>(b);
    const bool up = !(ub & m);
    switch (axis) {
      case Axis::kX:
        S(static_cast<Eigen::Index>(ub ^ m), b) = 0.5;
        break;
      case Axis::kY:
        // sigma^y |up> = i |down>, sigma^y |down> = -i |up>
        S(static_cast<Eigen::Index>(ub ^ m), b) = up ? Complex(0, 0.5) : Complex(0, -0.5);
        break;
      case Axis::kZ:
        S(b, b) = up ? 0.5 : -0.5;
        break;
    }
  }
  return S;
}

ComplexMatrix total_sz(int L) {
  const auto D = static_cast<Eigen::Index>(hilbert_dim(L));
  ComplexMatrix S = ComplexMatrix::Zero(D, D);
  for (Eigen::Index b = 0; b < D; ++b) {
    double v = 0.0;
    for (int n = 1; n <= L; ++n) v += sz_value(static_cast<std::uint64_t>(b), n);
    S(b, b) = v;
  }
  return S;
}

ComplexMatrix zeeman_term(std::span<const double> epsilon) {
  const int L = static_cast<int>(epsilon.size());
  if (L < 1) throw DomainError("empty splitting list");
  const auto D = static_cast<Eigen::Index>(hilbert_dim(L));
  ComplexMatrix H = ComplexMatrix::Zero(D, D);
  for (Eigen::Index b = 0; b < D; ++b) {
    double v = 0.0;
    for (int n = 1; n <= L; ++n) v += epsilon[n - 1] * sz_value(static_cast<std::uint64_t>(b), n);
    H(b, b) = v;
  }
  return H;
}

ComplexMatrix exchange_term(int L, int range, double flipflop, double ising) {
  if (L < 1 || L > 20) throw DomainError("chain length out of range: " + std::to_string(L));
  if (range < 1) throw DomainError("bond range must be positive");
  const auto D = static_cast<Eigen::Index>(hilbert_dim(L));
  ComplexMatrix H = ComplexMatrix::Zero(D, D);
  for (int n = 1; n + range <= L; ++n) {
    const std::uint64_t mi = site_mask(n);
    const std::uint64_t mj = site_mask(n + range);
    for (Eigen::Index b = 0; b < D; ++b) {
      const auto ub = static_cast<std::uint64_t>(b);
      const bool ai = ub & mi;
      const bool aj = ub & mj;
      H(b, b) += ising * (ai == aj ? 0.25 : -0.25);
      // S^x S^x + S^y S^y = (S^+ S^- + S^- S^+) / 2 swaps antiparallel pairs.
      if (ai != aj) H(static_cast<Eigen::Index>(ub ^ mi ^ mj), b) += 0.5 * flipflop;
    }
  }
  return H;
}

ComplexMatrix nn_term(const ChainParams& p) { return exchange_term(p.L, 1, p.J, p.J * p.delta); }

ComplexMatrix nnn_term(const ChainParams& p) { return exchange_term(p.L, 2, p.J, p.J * p.delta); }

ComplexMatrix build_hamiltonian(const ChainParams& p) {
  p.validate();
  ComplexMatrix H = zeeman_term(p.epsilon);
  H += nn_term(p);
  if (p.alpha != 0.0) H += p.alpha * nnn_term(p);
  return H;
}

Complex pauli_trace(const ComplexMatrix& H, int L, std::span<const std::pair<int, Axis>> factors) {
  for (const auto& f : factors) check_site(f.first, L);
  const auto D = static_cast<Eigen::Index>(hilbert_dim(L));
  if (H.rows() != D || H.cols() != D) throw DomainError("operator dimension does not match L");
  Complex tr = 0.0;
  for (Eigen::Index b = 0; b < D; ++b) {
    // Apply the factors right to left onto |b>.
    std::uint64_t state = static_cast<std::uint64_t>(b);
    Complex phase = 1.0;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
      const std::uint64_t m = site_mask(it->first);
      const bool up = !(state & m);
      switch (it->second) {
        case Axis::kX:
          state ^= m;
          break;
        case Axis::kY:
          phase *= up ? Complex(0, 1) : Complex(0, -1);
          state ^= m;
          break;
        case Axis::kZ:
          if (!up) phase = -phase;
          break;
      }
    }
    tr += H(b, static_cast<Eigen::Index>(state)) * phase;
  }
  return tr;
}

CouplingWeights coupling_weights(const ComplexMatrix& H, int L) {
  const double D = static_cast<double>(hilbert_dim(L));
  CouplingWeights w;
  for (int n = 1; n <= L; ++n) {
    const std::pair<int, Axis> f[] = {{n, Axis::kZ}};
    w.field.push_back(2.0 * pauli_trace(H, L, f).real() / D);
  }
  auto bond = [&](int i, int j) {
    BondWeights b{i, j, 0.0, 0.0, 0.0};
    double* out[] = {&b.xx, &b.yy, &b.zz};
    const Axis axes[] = {Axis::kX, Axis::kY, Axis::kZ};
    for (int a = 0; a < 3; ++a) {
      const std::pair<int, Axis> f[] = {{i, axes[a]}, {j, axes[a]}};
      *out[a] = 4.0 * pauli_trace(H, L, f).real() / D;
    }
    return b;
  };
  for (int n = 1; n + 1 <= L; ++n) w.nn.push_back(bond(n, n + 1));
  for (int n = 1; n + 2 <= L; ++n) w.nnn.push_back(bond(n, n + 2));
  return w;
}

int chain_length(const ComplexMatrix& M) {
  if (M.rows() != M.cols()) throw DomainError("operator is not square");
  const auto D = static_cast<std::uint64_t>(M.rows());
  if (D < 2 || (D & (D - 1)) != 0) throw DomainError("operator dimension is not a power of two");
  int L = 0;
  while ((std::uint64_t{1} << L) < D) ++L;
  return L;
}

double hermiticity_defect(const ComplexMatrix& M) {
  if (M.rows() != M.cols()) throw DomainError("operator is not square");
  if (M.size() == 0) return 0.0;
  return (M - M.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace dyndec
