// Copyright 2026 The Graybox Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>

#include "graybox/error.hpp"
#include "graybox/quantum.hpp"
#include "graybox/tomography.hpp"
#include "oracles.hpp"

namespace {

using namespace graybox;
using oracle::C;
using oracle::M2;

Operator2 from(const M2& m) { return {m[0][0], m[0][1], m[1][0], m[1][1]}; }
M2 to(const Operator2& o) { return {{{o(0, 0), o(0, 1)}, {o(1, 0), o(1, 1)}}}; }

double max_diff(const Operator2& a, const M2& b) {
  double d = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) d = std::max(d, std::abs(a(i, j) - b[i][j]));
  return d;
}

// Exact channel expectations computed with the oracle's own matrix algebra.
Expectations oracle_expectations(const M2& u) {
  const M2 obs[3] = {oracle::px(), oracle::py(), oracle::pz()};
  const double r = 1.0 / std::sqrt(2.0);
  const oracle::Vec2 states[6] = {{r, r}, {r, -r}, {r, C(0, r)}, {r, C(0, -r)}, {1.0, 0.0}, {0.0, 1.0}};
  Expectations e{};
  for (int o = 0; o < 3; ++o) {
    for (int s = 0; s < 6; ++s) {
      const M2 rho = oracle::mul(oracle::mul(u, oracle::projector(states[s])), oracle::dagger(u));
      e[6 * o + s] = oracle::trace(oracle::mul(obs[o], rho)).real();
    }
  }
  return e;
}

TEST(Expectation, EigenstateAndSuperposition) {
  EXPECT_DOUBLE_EQ(expectation(sigma_z(), density(CardinalState::Zp)), 1.0);
  EXPECT_NEAR(expectation(sigma_z(), density(CardinalState::Xp)), 0.0, 1e-15);
}

TEST(Expectation, RotatedStateMatchesDenseProduct) {
  const double a = 0.3;
  const M2 ry = {{{std::cos(a / 2), -std::sin(a / 2)}, {std::sin(a / 2), std::cos(a / 2)}}};
  const M2 rho = oracle::mul(oracle::mul(ry, oracle::projector({1.0, 0.0})), oracle::dagger(ry));
  EXPECT_NEAR(expectation(sigma_x(), from(rho)), std::sin(0.3), 1e-14);
  EXPECT_NEAR(std::sin(0.3), 0.29552, 1e-5);
}

TEST(Expectation, RejectsInvalidInputs) {
  const Operator2 not_hermitian{0.0, 1.0, 0.0, 0.0};
  EXPECT_THROW(expectation(not_hermitian, density(CardinalState::Zp)), ValidationError);
  const Operator2 bad_trace{0.7, 0.0, 0.0, 0.7};
  EXPECT_THROW(expectation(sigma_z(), bad_trace), ValidationError);
}

TEST(ExpmHermitian, ZeroGeneratorAndPauliRotation) {
  EXPECT_LT(max_diff(expm_hermitian(Operator2::zero(), 3.7), oracle::eye()), 1e-15);
  const Operator2 u = expm_hermitian(sigma_x(), std::numbers::pi / 2);
  const M2 expected = {{{0.0, C(0, -1)}, {C(0, -1), 0.0}}};
  EXPECT_LT(max_diff(u, expected), 1e-15);
}

TEST(ExpmHermitian, MatchesTaylorSeries) {
  const M2 h = {{{0.2, 0.7}, {0.7, -0.2}}};
  EXPECT_LT(max_diff(expm_hermitian(from(h), 1.3), oracle::expm_taylor(h, 1.3)), 1e-10);
  // With an identity component and a complex off-diagonal.
  const M2 h2 = {{{0.9, C(0.3, -0.4)}, {C(0.3, 0.4), -0.1}}};
  EXPECT_LT(max_diff(expm_hermitian(from(h2), 0.8), oracle::expm_taylor(h2, 0.8, 30)), 1e-10);
}

TEST(ExpmHermitian, UnitaryForLargeArguments) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double a = n(rng), b = n(rng), c = n(rng), d = n(rng);
    const Operator2 h{C(a + d, 0), C(b, -c), C(b, c), C(d - a, 0)};
    const double dt = 100.0 / (h.frobenius_norm() + 1e-12);
    const Operator2 u = expm_hermitian(h, dt);
    EXPECT_LE((u.adjoint() * u - Operator2::identity()).frobenius_norm(), 1e-10);
  }
}

TEST(Ptm, IdentityChannel) {
  const auto r = ptm_from_expectations(exact_expectations(Operator2::identity()));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(r(i, j), i == j ? 1.0 : 0.0, 1e-15);
}

TEST(Ptm, XGateFlipsYAndZ) {
  const auto r = ptm_from_expectations(exact_expectations(sigma_x()));
  const double diag[4] = {1, 1, -1, -1};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(r(i, j), i == j ? diag[i] : 0.0, 1e-15);
}

TEST(Ptm, SqrtXFromOracleExpectations) {
  const M2 v = {{{C(0.5, 0.5), C(0.5, -0.5)}, {C(0.5, -0.5), C(0.5, 0.5)}}};
  const auto r = ptm_from_expectations(oracle_expectations(v));
  const double expected[4][4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(r(i, j), expected[i][j], 1e-14);
}

TEST(Ptm, RejectsOutOfRange) {
  Expectations e = exact_expectations(Operator2::identity());
  e[3] = 1.2;
  EXPECT_THROW(ptm_from_expectations(e), ValidationError);
}

TEST(Agf, SelfFidelityIsOne) {
  EXPECT_NEAR(average_gate_fidelity(ptm_of_unitary(sqrt_x_gate()), sqrt_x_gate()), 1.0, 1e-14);
}

TEST(Agf, IdentityAgainstSqrtXMatchesHaarOracle) {
  const double agf = average_gate_fidelity(PauliTransferMatrix::identity(), sqrt_x_gate());
  EXPECT_NEAR(agf, 2.0 / 3.0, 1e-14);
  std::mt19937_64 rng(2024);
  const double mc = oracle::haar_average_fidelity(oracle::eye(), to(sqrt_x_gate()), 100000, rng);
  EXPECT_NEAR(agf, mc, 1e-3);
}

TEST(Agf, XGateAgainstSqrtXMatchesHaarOracle) {
  const double agf = average_gate_fidelity(ptm_of_unitary(sigma_x()), sqrt_x_gate());
  std::mt19937_64 rng(7);
  const double mc = oracle::haar_average_fidelity(oracle::px(), to(sqrt_x_gate()), 100000, rng);
  EXPECT_NEAR(agf, mc, 1e-3);
}

TEST(Agf, QuadratureOracleKnownValues) {
  EXPECT_NEAR(oracle::haar_average_fidelity_exact(oracle::eye(), to(sqrt_x_gate())), 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(oracle::haar_average_fidelity_exact(oracle::px(), oracle::px()), 1.0, 1e-14);
  EXPECT_NEAR(oracle::haar_average_fidelity_exact(oracle::px(), oracle::pz()), 1.0 / 3.0, 1e-14);
}

TEST(Agf, RandomChannelsMatchHaarOracle) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 20; ++i) {
    const M2 u = oracle::random_unitary(rng);
    const M2 v = oracle::random_unitary(rng);
    const double agf = average_gate_fidelity(ptm_from_expectations(oracle_expectations(u)), from(v));
    EXPECT_NEAR(agf, oracle::haar_average_fidelity_exact(u, v), 2e-3) << "channel " << i;
    EXPECT_NEAR(agf, oracle::haar_average_fidelity(u, v, 20000, rng), 0.02) << "channel " << i;
  }
}

TEST(Agf, ExactChannelRoundTripIsOne) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const Operator2 u = from(oracle::random_unitary(rng));
    EXPECT_NEAR(average_gate_fidelity(ptm_from_expectations(exact_expectations(u)), u), 1.0, 1e-10);
  }
}

TEST(Agf, GenericFormMatchesPtmRoute) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 20; ++i) {
    const Operator2 u = from(oracle::random_unitary(rng));
    const Expectations e = exact_expectations(u);
    EXPECT_NEAR(average_gate_fidelity_from(e, ptm_of_unitary(sqrt_x_gate())),
                average_gate_fidelity(ptm_from_expectations(e), sqrt_x_gate()), 1e-14);
  }
}

TEST(Agf, RejectsNonUnitaryTarget) {
  EXPECT_THROW(average_gate_fidelity(PauliTransferMatrix::identity(), 2.0 * sigma_x()), ValidationError);
}

TEST(Expectation, PauliBoundsOnRandomStates) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const Operator2 rho = from(oracle::projector(oracle::haar_state(rng)));
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
      const double e = expectation(pauli(p), rho);
      EXPECT_LE(std::fabs(e), 1.0 + 1e-12);
    }
  }
}

}  // namespace
