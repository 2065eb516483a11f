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

#pragma once

#include <array>
#include <complex>
#include <numbers>

namespace graybox {

using Complex = std::complex<double>;

/// A 2x2 complex matrix stored row-major. Used for density matrices,
/// observables and unitaries alike.
class Operator2 {
 public:
  constexpr Operator2() = default;
  constexpr Operator2(Complex a00, Complex a01, Complex a10, Complex a11)
      : m_{a00, a01, a10, a11} {}

  static constexpr Operator2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Operator2 zero() { return {}; }

  constexpr Complex& operator()(int row, int col) { return m_[2 * row + col]; }
  constexpr const Complex& operator()(int row, int col) const { return m_[2 * row + col]; }

  Operator2 adjoint() const;
  Complex trace() const { return m_[0] + m_[3]; }
  double frobenius_norm() const;

  bool is_hermitian(double tol = 1e-12) const;
  bool is_unitary(double tol = 1e-9) const;

  friend Operator2 operator*(const Operator2& a, const Operator2& b);
  friend Operator2 operator+(const Operator2& a, const Operator2& b);
  friend Operator2 operator-(const Operator2& a, const Operator2& b);
  friend Operator2 operator*(Complex s, const Operator2& a);

 private:
  std::array<Complex, 4> m_{};
};

enum class Pauli { I, X, Y, Z };

Operator2 pauli(Pauli p);
inline Operator2 sigma_x() { return pauli(Pauli::X); }
inline Operator2 sigma_y() { return pauli(Pauli::Y); }
inline Operator2 sigma_z() { return pauli(Pauli::Z); }

/// The six Pauli-axis eigenstates used as tomographic inputs.
/// Yp/Ym are |i> and |-i> (sometimes written |r> and |l>).
enum class CardinalState { Xp, Xm, Yp, Ym, Zp, Zm };

inline constexpr std::array<CardinalState, 6> kCardinalStates = {
    CardinalState::Xp, CardinalState::Xm, CardinalState::Yp,
    CardinalState::Ym, CardinalState::Zp, CardinalState::Zm};

const char* to_string(CardinalState s);
Operator2 density(CardinalState s);

/// Tr[observable * state]. Validates that the observable is Hermitian and the
/// state has unit trace; the imaginary residue must vanish.
double expectation(const Operator2& observable, const Operator2& state);

/// exp(-i H dt) for Hermitian H, via the closed form for c I + a.sigma.
Operator2 expm_hermitian(const Operator2& h, double dt);

/// U rho U^dagger.
Operator2 conjugate(const Operator2& u, const Operator2& rho);

/// (1/2)[[1+i, 1-i], [1-i, 1+i]].
Operator2 sqrt_x_gate();

}  // namespace graybox
