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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dyndec/evolve.h"
#include "dyndec/model.h"
#include "dyndec/observables.h"
#include "oracles.h"

namespace dyndec {
namespace {

// pi rotation about `a` on `sites`, built as a Kronecker product of -i sigma^a.
oracle::Matrix oracle_pulse(int L, char a, const std::vector<int>& sites) {
  std::vector<oracle::Matrix> ops(L, oracle::pauli('i'));
  for (int s : sites) ops[s - 1] = Complex(0, -1) * oracle::pauli(a);
  return oracle::kron_chain(ops);
}

std::vector<int> residue_sites(int L, std::initializer_list<int> residues) {
  std::vector<int> out;
  for (int n = 1; n <= L; ++n) {
    for (int r : residues) {
      if ((n - 1) % 4 == r - 1) out.push_back(n);
    }
  }
  return out;
}

struct PulseSpec {
  char axis;
  std::vector<int> sites;
};

std::vector<PulseSpec> eight_pulse_pattern(int L) {
  const auto a = residue_sites(L, {1, 2});
  const auto b = residue_sites(L, {3, 4});
  const auto c = residue_sites(L, {2, 3});
  const auto d = residue_sites(L, {1, 4});
  return {{'x', a}, {'y', b}, {'x', a}, {'y', b}, {'x', c}, {'y', d}, {'x', c}, {'y', d}};
}

std::vector<PulseSpec> four_pulse_pattern(int L) {
  const auto odd = strided_sites(L, 1, 2);
  const auto even = strided_sites(L, 2, 2);
  return {{'y', odd}, {'x', even}, {'y', odd}, {'x', even}};
}

// Toggled Hamiltonians Q_k^dagger H Q_k from dense pulse matrices.
std::vector<oracle::Matrix> oracle_toggled(const oracle::Matrix& H, int L, const std::vector<PulseSpec>& pulses) {
  std::vector<oracle::Matrix> out;
  oracle::Matrix Q = oracle::Matrix::Identity(H.rows(), H.cols());
  out.push_back(H);
  for (std::size_t k = 0; k + 1 < pulses.size(); ++k) {
    Q = (oracle_pulse(L, pulses[k].axis, pulses[k].sites) * Q).eval();
    out.push_back(Q.adjoint() * H * Q);
  }
  return out;
}

char ax(Axis a) { return axis_char(a); }

TEST(Pulse, GlobalPiXOnOneSite) {
  const Pulse p{Axis::kX, kPi, {1}};
  EXPECT_LE(oracle::max_abs(pulse_unitary(p, 1) - Complex(0, -1) * oracle::pauli('x')), 1e-15);
}

TEST(Pulse, ConjugationFlipsTransverseComponents) {
  const int L = 3;
  const Pulse px{Axis::kX, kPi, {1, 2, 3}};
  const auto P = pulse_unitary(px, L);
  for (int n = 1; n <= L; ++n) {
    EXPECT_LE(oracle::max_abs(P.adjoint() * spin_operator(Axis::kZ, n, L) * P + spin_operator(Axis::kZ, n, L)), 1e-15);
    EXPECT_LE(oracle::max_abs(P.adjoint() * spin_operator(Axis::kY, n, L) * P + spin_operator(Axis::kY, n, L)), 1e-15);
    EXPECT_LE(oracle::max_abs(P.adjoint() * spin_operator(Axis::kX, n, L) * P - spin_operator(Axis::kX, n, L)), 1e-15);
  }
}

TEST(Pulse, ZOnEvenSitesFlipsOnlyThose) {
  const int L = 4;
  const Pulse pz{Axis::kZ, kPi, {2, 4}};
  const auto P = pulse_unitary(pz, L);
  EXPECT_LE(oracle::max_abs(P - oracle_pulse(L, 'z', {2, 4})), 1e-15);
  for (int n = 1; n <= L; ++n) {
    for (Axis a : {Axis::kX, Axis::kY, Axis::kZ}) {
      const double sign = (n % 2 == 0 && a != Axis::kZ) ? -1.0 : 1.0;
      const auto S = spin_operator(a, n, L);
      EXPECT_LE(oracle::max_abs(P.adjoint() * S * P - sign * S), 1e-15) << ax(a) << n;
    }
  }
}

TEST(Pulse, GeneralAngleMatchesExponential) {
  const int L = 3;
  for (Axis a : {Axis::kX, Axis::kY, Axis::kZ}) {
    const Pulse p{a, 0.7 * kPi, {1, 3}};
    oracle::Matrix gen = spin_operator(a, 1, L) + spin_operator(a, 3, L);
    EXPECT_LE(oracle::max_abs(pulse_unitary(p, L) - oracle::expm_taylor(gen, p.angle)), 1e-13) << ax(a);
  }
}

TEST(Pulse, GateSweepsMatchDenseProducts) {
  std::mt19937_64 rng(41);
  const int L = 4;
  const auto M = oracle::random_hermitian(16, rng);
  const Pulse p{Axis::kY, 0.3, {2, 3}};
  const auto P = pulse_unitary(p, L);
  ComplexMatrix left = M;
  apply_pulse(p, left);
  EXPECT_LE(oracle::max_abs(left - P * M), 1e-14);
  ComplexMatrix conj = M;
  conjugate_by_pulse(p, conj);
  EXPECT_LE(oracle::max_abs(conj - P.adjoint() * M * P), 1e-14);
  StateVector psi = oracle::random_state(16, rng);
  const StateVector expected = P * psi;
  apply_pulse(p, psi);
  EXPECT_LE((psi - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Pulse, RejectsBadSites) {
  EXPECT_THROW((Pulse{Axis::kX, kPi, {0}}).validate(4), DomainError);
  EXPECT_THROW((Pulse{Axis::kX, kPi, {5}}).validate(4), DomainError);
  EXPECT_THROW((Pulse{Axis::kX, kPi, {}}).validate(4), DomainError);
  EXPECT_THROW((Pulse{Axis::kX, kPi, {2, 1}}).validate(4), DomainError);
  EXPECT_THROW((Pulse{Axis::kX, kPi, {2, 2}}).validate(4), DomainError);
}

TEST(Sequence, EightPulseSitePattern) {
  const int L = 10;
  const auto s = make_sequence(EightPulse{0.025}, L);
  ASSERT_EQ(s.size(), 8u);
  EXPECT_EQ(s.segments[0].pulse.sites, (std::vector<int>{1, 2, 5, 6, 9, 10}));
  EXPECT_EQ(s.segments[0].pulse.axis, Axis::kX);
  const auto expected = eight_pulse_pattern(L);
  for (std::size_t k = 0; k < 8; ++k) {
    EXPECT_EQ(ax(s.segments[k].pulse.axis), expected[k].axis) << "pulse " << k + 1;
    EXPECT_EQ(s.segments[k].pulse.sites, expected[k].sites) << "pulse " << k + 1;
    EXPECT_EQ(s.segments[k].tau, 0.025);
  }
  EXPECT_NEAR(s.cycle_time(), 0.2, 1e-15);
}

TEST(Sequence, FourPulseSitePattern) {
  const auto s = make_sequence(FourPulse{0.05}, 10);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s.segments[0].pulse.axis, Axis::kY);
  EXPECT_EQ(s.segments[0].pulse.sites, (std::vector<int>{1, 3, 5, 7, 9}));
  EXPECT_EQ(s.segments[1].pulse.axis, Axis::kX);
  EXPECT_EQ(s.segments[1].pulse.sites, (std::vector<int>{2, 4, 6, 8, 10}));
}

TEST(Sequence, ZTwoPulseTiming) {
  const ZTwoPulse z{0.1, 0.06};
  const auto s = make_sequence(z, 10);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(s.cycle_time(), 0.16, 1e-15);
  EXPECT_NEAR(0.5 * s.cycle_time() / (z.tau1 - z.tau2), 2.0, 1e-12);
  for (const auto& seg : s.segments) {
    EXPECT_EQ(seg.pulse.axis, Axis::kZ);
    EXPECT_EQ(seg.pulse.sites, (std::vector<int>{2, 4, 6, 8, 10}));
  }
  EXPECT_THROW(make_sequence(ZTwoPulse{0.05, 0.06}, 10), DomainError);
}

TEST(Sequence, FluidToDimerInterval) {
  const double alpha = 0.1, alpha_w = 0.64, tau1 = 0.05;
  const auto f = FluidToDimer::for_target(tau1, alpha, alpha_w);
  EXPECT_NEAR(f.tau_a, tau1 * (alpha_w - alpha) / (alpha_w + 3 * alpha), 1e-15);
  const auto s = make_sequence(f, 10);
  EXPECT_NEAR(alpha * s.cycle_time() / (f.tau1 - f.tau_a), alpha_w, 1e-12);
  EXPECT_NEAR((f.tau1 - f.tau_a) / s.cycle_time(), 1.0 / 6.4, 1e-12);
  EXPECT_THROW(FluidToDimer::for_target(tau1, 0.5, 0.3), DomainError);
}

TEST(Sequence, RejectsNonPositiveIntervals) {
  EXPECT_THROW(make_sequence(EightPulse{0.0}, 8), DomainError);
  EXPECT_THROW(make_sequence(FourPulse{-0.1}, 8), DomainError);
  EXPECT_THROW(make_sequence(FourPulseGapless{0.03, 0.0, 0.01}, 8), DomainError);
  EXPECT_THROW(make_sequence(GlobalPiX{std::nan("")}, 8), DomainError);
}

TEST(Sequence, CyclicForEveryLength) {
  for (int L = 4; L <= 9; ++L) {
    for (const SequenceSpec& spec : std::vector<SequenceSpec>{GlobalPiX{}, EightPulse{}, FourPulse{}, ZTwoPulse{},
                                                              FourPulseGapless{}, ZNNNFlipFlop{}}) {
      const auto r = cyclicity(make_sequence(spec, L), L);
      EXPECT_LE(r.defect, 1e-12) << sequence_name(spec) << " L=" << L;
      EXPECT_NEAR(std::abs(r.phase), 1.0, 1e-12);
    }
  }
}

TEST(Sequence, NonCyclicScheduleRejected) {
  PulseSchedule s;
  s.segments.push_back({0.1, Pulse{Axis::kX, kPi, {1}}});
  EXPECT_GT(cyclicity(s, 4).defect, 0.5);
  try {
    require_cyclic(s, 4);
    FAIL() << "expected CyclicityError";
  } catch (const CyclicityError& e) {
    EXPECT_GT(e.defect(), 0.5);
  }
}

TEST(Toggled, FirstSegmentIsBareHamiltonian) {
  const auto H = build_hamiltonian(ChainParams::clean(6, 0.5, 1.0));
  EXPECT_TRUE(toggled_hamiltonian(H, make_sequence(EightPulse{0.1}, 6), 0) == H);
  EXPECT_THROW(toggled_hamiltonian(H, make_sequence(EightPulse{0.1}, 6), 8), DomainError);
}

TEST(Toggled, GlobalPiXFlipsFieldOnly) {
  const int L = 6;
  ChainParams p = ChainParams::clean(L, 0.5);
  p.epsilon = random_splittings(L, 0.0, 1.0, 9);
  const auto s = make_sequence(GlobalPiX{0.05}, L);
  const ComplexMatrix expected = -zeeman_term(p.epsilon) + nn_term(p);
  EXPECT_LE(oracle::max_abs(toggled_hamiltonian(build_hamiltonian(p), s, 1) - expected), 1e-14);
}

// The dense frames, the sign tables and the library must agree with each other.
TEST(Toggled, EightPulseTableFromDenseFrames) {
  for (int L : {6, 8}) {
    const double delta = 0.7, alpha = 0.6;
    const auto H = oracle::signed_chain(L, 1.0, delta, alpha, [](int, char, int) { return 1; });
    const auto frames = oracle_toggled(H, L, eight_pulse_pattern(L));
    const auto& table = oracle::eight_pulse_table();
    const auto s = make_sequence(EightPulse{0.1}, L);
    for (int k = 0; k < 8; ++k) {
      const auto expected = oracle::signed_chain(L, 1.0, delta, alpha, [&](int range, char a, int n) {
        const int row = range == 1 ? (n % 2 == 1 ? 0 : 3) + oracle::axis_row(a) : 6 + oracle::axis_row(a);
        return table[row][k];
      });
      EXPECT_LE(oracle::max_abs(frames[k] - expected), 1e-13) << "dense frame " << k << " L=" << L;
      EXPECT_LE(oracle::max_abs(toggled_hamiltonian(H, s, k) - expected), 1e-13) << "frame " << k << " L=" << L;
    }
  }
}

TEST(Toggled, FourPulseTableFromDenseFrames) {
  for (int L : {6, 8}) {
    const double delta = 0.7, alpha = 0.6;
    const auto H = oracle::signed_chain(L, 1.0, delta, alpha, [](int, char, int) { return 1; });
    const auto frames = oracle_toggled(H, L, four_pulse_pattern(L));
    const auto& table = oracle::four_pulse_table();
    const auto s = make_sequence(FourPulse{0.1}, L);
    for (int k = 0; k < 4; ++k) {
      const auto expected = oracle::signed_chain(L, 1.0, delta, alpha, [&](int range, char a, int) {
        return table[(range - 1) * 3 + oracle::axis_row(a)][k];
      });
      EXPECT_LE(oracle::max_abs(frames[k] - expected), 1e-13) << "dense frame " << k << " L=" << L;
      EXPECT_LE(oracle::max_abs(toggled_hamiltonian(H, s, k) - expected), 1e-13) << "frame " << k << " L=" << L;
    }
  }
}

TEST(Toggled, SpectrumPreserved) {
  const int L = 6;
  ChainParams p = ChainParams::clean(L, 0.5, 1.0);
  p.epsilon = random_splittings(L, 0.0, 1.0, 2);
  const auto H = build_hamiltonian(p);
  const auto e0 = eigh(H).eigenvalues;
  for (const SequenceSpec& spec : std::vector<SequenceSpec>{EightPulse{}, FourPulse{}, ZTwoPulse{}, FourPulseGapless{}}) {
    const auto s = make_sequence(spec, L);
    for (std::size_t k = 0; k < s.size(); ++k) {
      const auto ek = eigh(toggled_hamiltonian(H, s, k)).eigenvalues;
      EXPECT_LE((ek - e0).cwiseAbs().maxCoeff(), 1e-10) << sequence_name(spec) << " k=" << k;
    }
  }
}

TEST(SignProfile, EightPulseTable) {
  for (int L : {8, 10, 12}) {
    const auto profile = coupling_sign_profile(make_sequence(EightPulse{0.1}, L), L);
    const auto& t = oracle::eight_pulse_table();
    for (Axis a : {Axis::kX, Axis::kY, Axis::kZ}) {
      const int r = oracle::axis_row(ax(a));
      EXPECT_EQ(profile.signs(1, a, BondClass::kOddStart), std::vector<int>(t[r].begin(), t[r].end()));
      EXPECT_EQ(profile.signs(1, a, BondClass::kEvenStart), std::vector<int>(t[3 + r].begin(), t[3 + r].end()));
      EXPECT_EQ(profile.signs(2, a, BondClass::kAll), std::vector<int>(t[6 + r].begin(), t[6 + r].end()));
    }
  }
}

TEST(SignProfile, FourPulseTable) {
  for (int L : {8, 10, 12}) {
    const auto profile = coupling_sign_profile(make_sequence(FourPulse{0.1}, L), L);
    const auto& t = oracle::four_pulse_table();
    for (Axis a : {Axis::kX, Axis::kY, Axis::kZ}) {
      const int r = oracle::axis_row(ax(a));
      EXPECT_EQ(profile.signs(1, a, BondClass::kAll), std::vector<int>(t[r].begin(), t[r].end()));
      EXPECT_EQ(profile.signs(2, a, BondClass::kAll), std::vector<int>(t[3 + r].begin(), t[3 + r].end()));
    }
  }
}

TEST(SignProfile, ZTwoPulseMatchesMatrixConjugation) {
  const int L = 4;
  const auto s = make_sequence(ZTwoPulse{0.1, 0.06}, L);
  const auto profile = coupling_sign_profile(s, L);
  EXPECT_EQ(profile.signs(1, Axis::kX, BondClass::kAll), (std::vector<int>{1, -1}));
  EXPECT_EQ(profile.signs(1, Axis::kY, BondClass::kAll), (std::vector<int>{1, -1}));
  EXPECT_EQ(profile.signs(1, Axis::kZ, BondClass::kAll), (std::vector<int>{1, 1}));
  const auto w = coupling_weights(toggled_hamiltonian(nn_term(ChainParams::clean(L, 0.5)), s, 1), L);
  for (const auto& b : w.nn) {
    EXPECT_NEAR(b.xx, -1.0, 1e-14);
    EXPECT_NEAR(b.yy, -1.0, 1e-14);
    EXPECT_NEAR(b.zz, 0.5, 1e-14);
  }
}

TEST(SignProfile, NonPiAngleUnsupported) {
  PulseSchedule s;
  s.segments.push_back({0.1, Pulse{Axis::kX, kPi / 2, {1, 2, 3, 4}}});
  EXPECT_THROW(coupling_sign_profile(s, 4), UnsupportedError);
}

class AverageIdentities : public ::testing::TestWithParam<int> {};

TEST_P(AverageIdentities, AllHold) {
  const int L = GetParam();
  const ChainParams p = ChainParams::clean(L, 0.5, 1.0);
  const auto nn = nn_term(p);
  const auto nnn = nnn_term(p);
  const auto eps = random_splittings(L, 0.0, 1.0, 77);
  const double tol = 1e-12;

  EXPECT_LE(oracle::max_abs(average_hamiltonian_0(zeeman_term(eps) + nn, make_sequence(GlobalPiX{0.05}, L)) - nn), tol);
  EXPECT_LE(oracle::max_abs(average_hamiltonian_0(nn + nnn, make_sequence(EightPulse{0.05}, L)) - 0.5 * nn), tol);
  EXPECT_LE(oracle::max_abs(average_hamiltonian_0(nn + nnn, make_sequence(FourPulse{0.05}, L)) - nnn), tol);

  const ZTwoPulse z{0.1, 0.06};
  const double zc = z.tau1 + z.tau2;
  EXPECT_LE(oracle::max_abs(average_hamiltonian_0(nn, make_sequence(z, L)) -
                            exchange_term(L, 1, (z.tau1 - z.tau2) / zc, 0.5)),
            tol);
  EXPECT_NEAR((z.tau1 - z.tau2) / zc, 0.25, 1e-15);

  const double alpha = 0.1;
  const auto f = FluidToDimer::for_target(0.05, alpha, 0.64);
  const double fc = f.tau1 + 3 * f.tau_a;
  EXPECT_LE(oracle::max_abs(average_hamiltonian_0(nn + alpha * nnn, make_sequence(f, L)) -
                            (((f.tau1 - f.tau_a) / fc) * nn + alpha * nnn)),
            tol);

  const FourPulseGapless g{0.03, 0.02, 0.015};
  const double gc = g.tau1 + 2 * g.tau2 + g.tau3;
  const double delta = 1.5;
  EXPECT_LE(oracle::max_abs(average_hamiltonian_0(exchange_term(L, 1, 1.0, delta), make_sequence(g, L)) -
                            exchange_term(L, 1, (g.tau1 - g.tau3) / gc, delta * (g.tau1 + g.tau3 - 2 * g.tau2) / gc)),
            tol);
}

INSTANTIATE_TEST_SUITE_P(Lengths, AverageIdentities, ::testing::Values(4, 6, 8));

TEST(Average, XYRecoveryRemovesIsing) {
  const int L = 6;
  const FourPulseGapless g{0.025, 0.02, 0.015};
  const auto w = coupling_weights(average_hamiltonian_0(exchange_term(L, 1, 1.0, 2.0), make_sequence(g, L)), L);
  for (const auto& b : w.nn) {
    EXPECT_LE(std::abs(b.zz), 1e-13);
    EXPECT_NEAR(b.xx, 0.125, 1e-13);
  }
}

TEST(Average, NNNFlipFlopRemoved) {
  const int L = 8;
  const ChainParams p = ChainParams::clean(L, 1.0, 0.5);
  const auto w = coupling_weights(average_hamiltonian_0(build_hamiltonian(p), make_sequence(ZNNNFlipFlop{0.025}, L)), L);
  for (const auto& b : w.nnn) {
    EXPECT_LE(std::abs(b.xx), 1e-13);
    EXPECT_LE(std::abs(b.yy), 1e-13);
    EXPECT_NEAR(b.zz, 0.5, 1e-13);
  }
}

TEST(CyclePropagator, IdentityPulsesGiveFreeEvolution) {
  const int L = 5;
  const auto H = build_hamiltonian(ChainParams::clean(L, 0.5, 0.3));
  PulseSchedule s;
  s.segments.push_back({0.03, Pulse{Axis::kX, 0.0, {1, 2}}});
  s.segments.push_back({0.05, Pulse{Axis::kZ, 0.0, {3}}});
  EXPECT_LE(oracle::max_abs(cycle_propagator(H, s) - expm_i(H, 0.08)), 1e-13);
}

TEST(CyclePropagator, GlobalPiXPhase) {
  for (int L : {4, 5}) {
    ChainParams p = ChainParams::clean(L, 0.5);
    p.epsilon = random_splittings(L, 0.0, 1.0, 4);
    const auto H = build_hamiltonian(p);
    const double tau = 0.05;
    const auto s = make_sequence(GlobalPiX{tau}, L);
    EXPECT_NEAR(std::abs(cyclicity(s, L).phase - std::pow(-1.0, L)), 0.0, 1e-14);
    const ComplexMatrix Hflip = -zeeman_term(p.epsilon) + nn_term(p);
    const ComplexMatrix expected = std::pow(-1.0, L) * expm_i(Hflip, tau) * expm_i(H, tau);
    EXPECT_LE(oracle::max_abs(cycle_propagator(H, s) - expected), 1e-13) << "L=" << L;
  }
}

TEST(CyclePropagator, DualRouteAgrees) {
  const int L = 6;
  ChainParams p = ChainParams::clean(L, 0.5, 1.0);
  p.epsilon = random_splittings(L, 0.0, 0.5, 8);
  const auto H = build_hamiltonian(p);
  for (const SequenceSpec& spec :
       std::vector<SequenceSpec>{GlobalPiX{0.05}, EightPulse{0.05}, FourPulse{0.05}, ZTwoPulse{0.1, 0.06},
                                 FourPulseGapless{}, FluidToDimer::for_target(0.05, 0.1, 0.64), ZNNNFlipFlop{}}) {
    const auto s = make_sequence(spec, L);
    const Complex phase = cyclicity(s, L).phase;
    EXPECT_LE(oracle::max_abs(cycle_propagator(H, s) - phase * toggled_frame_propagator(H, s)), 1e-12)
        << sequence_name(spec);
    EXPECT_LE(oracle::max_abs(cycle_propagator(H, s) - cycle_propagator(PropagatorCache(H), s)), 1e-13);
  }
}

TEST(CyclePropagator, ConvergesQuadraticallyInCycleTime) {
  const int L = 6;
  const ChainParams p = ChainParams::clean(L, 0.5, 1.0);
  const auto H = build_hamiltonian(p);
  std::vector<double> err;
  for (double tau : {0.04, 0.02, 0.01}) {
    const auto s = make_sequence(EightPulse{tau}, L);
    const Complex phase = cyclicity(s, L).phase;
    const auto ideal = expm_i(average_hamiltonian_0(H, s), s.cycle_time());
    err.push_back(oracle::op_norm(cycle_propagator(H, s) - phase * ideal));
  }
  for (std::size_t i = 1; i < err.size(); ++i) {
    const double slope = std::log2(err[i - 1] / err[i]);
    EXPECT_GE(slope, 1.8) << "errors " << err[i - 1] << " -> " << err[i];
  }
}

TEST(EvolvePulsed, ZeroCyclesReturnsInitialState) {
  const auto H = build_hamiltonian(ChainParams::clean(4, 0.5));
  const auto psi0 = domain_wall_state(4);
  const auto snaps = evolve_pulsed(H, make_sequence(FourPulse{0.05}, 4), psi0, 0, Sampling::kPerPulse);
  ASSERT_EQ(snaps.size(), 1u);
  EXPECT_EQ(snaps[0].t, 0.0);
  EXPECT_TRUE(snaps[0].psi == psi0);
}

TEST(EvolvePulsed, PerCycleIsSubsampleOfPerPulse) {
  const int L = 6;
  const auto H = build_hamiltonian(ChainParams::clean(L, 0.5, 1.0));
  const auto s = make_sequence(EightPulse{0.05}, L);
  const auto psi0 = domain_wall_state(L);
  const auto pulses = evolve_pulsed(H, s, psi0, 5, Sampling::kPerPulse);
  const auto cycles = evolve_pulsed(H, s, psi0, 5, Sampling::kPerCycle);
  ASSERT_EQ(pulses.size(), 41u);
  ASSERT_EQ(cycles.size(), 6u);
  for (std::size_t n = 0; n < cycles.size(); ++n) {
    const auto& a = cycles[n];
    const auto& b = pulses[n * 8];
    EXPECT_NEAR(a.t, b.t, 1e-12);
    EXPECT_NEAR(a.t, n * s.cycle_time(), 1e-12);
    EXPECT_LE((a.psi - b.psi).cwiseAbs().maxCoeff(), 1e-12);
  }
  for (std::size_t i = 1; i < pulses.size(); ++i) EXPECT_GT(pulses[i].t, pulses[i - 1].t);
}

TEST(EvolvePulsed, GlobalPiXRemovesDisorder) {
  // One cycle differs from exp(-i H_NN T_c) by tau^2 ||[H_NN, H_z]|| to leading
  // order, and M is bounded by L/4, so n cycles move M by at most
  // 2 (L/4) n tau^2 ||[H_NN, H_z]||.
  const int L = 6;
  const double tau = 0.025;
  ChainParams p = ChainParams::clean(L, 0.5);
  p.epsilon = random_splittings(L, 0.0, 0.5, 7);
  const auto nn = nn_term(p);
  const auto hz = zeeman_term(p.epsilon);
  const double comm = oracle::op_norm(nn * hz - hz * nn);
  const auto s = make_sequence(GlobalPiX{tau}, L);
  const double per_cycle = oracle::op_norm(cycle_propagator(nn + hz, s) * std::pow(-1.0, L) - expm_i(nn, 2 * tau));
  EXPECT_LE(per_cycle, 1.1 * tau * tau * comm);

  const auto clean = eigh(nn);
  const auto psi0 = domain_wall_state(L);
  const long n_cycles = 200;
  double worst = 0.0;
  for (const auto& snap : evolve_pulsed(nn + hz, s, psi0, n_cycles, Sampling::kPerCycle)) {
    const double bound = 2.0 * (L / 4.0) * snap.cycle * tau * tau * comm * 1.1;
    const double dev =
        std::abs(local_magnetization(snap.psi, L) - local_magnetization(evolve_state(clean, psi0, snap.t), L));
    EXPECT_LE(dev, bound + 1e-12) << "cycle " << snap.cycle;
    worst = std::max(worst, dev);
  }
  EXPECT_LT(worst, 0.05);
}

TEST(MatrixPower, MatchesRepeatedProduct) {
  std::mt19937_64 rng(43);
  const auto U = expm_i(oracle::random_hermitian(16, rng), 0.3);
  Unitary P = Unitary::Identity(16, 16);
  for (long n = 0; n <= 13; ++n) {
    EXPECT_LE(oracle::max_abs(matrix_power(U, n) - P), 1e-12) << n;
    P = (U * P).eval();
  }
}

}  // namespace
}  // namespace dyndec
