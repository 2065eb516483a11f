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

#include "graybox/quantum.hpp"

#include <cmath>
#include <string>

#include "graybox/error.hpp"

namespace graybox {

Operator2 Operator2::adjoint() const {
  return {std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3])};
}

double Operator2::frobenius_norm() const {
  double sum = 0.0;
  for (const auto& z : m_) sum += std::norm(z);
  return std::sqrt(sum);
}

bool Operator2::is_hermitian(double tol) const {
  return std::abs(m_[0].imag()) <= tol && std::abs(m_[3].imag()) <= tol &&
         std::abs(m_[1] - std::conj(m_[2])) <= tol;
}

bool Operator2::is_unitary(double tol) const {
  return (adjoint() * (*this) - identity()).frobenius_norm() <= tol;
}

Operator2 operator*(const Operator2& a, const Operator2& b) {
  return {a.m_[0] * b.m_[0] + a.m_[1] * b.m_[2], a.m_[0] * b.m_[1] + a.m_[1] * b.m_[3],
          a.m_[2] * b.m_[0] + a.m_[3] * b.m_[2], a.m_[2] * b.m_[1] + a.m_[3] * b.m_[3]};
}

Operator2 operator+(const Operator2& a, const Operator2& b) {
  return {a.m_[0] + b.m_[0], a.m_[1] + b.m_[1], a.m_[2] + b.m_[2], a.m_[3] + b.m_[3]};
}

Operator2 operator-(const Operator2& a, const Operator2& b) {
  return {a.m_[0] - b.m_[0], a.m_[1] - b.m_[1], a.m_[2] - b.m_[2], a.m_[3] - b.m_[3]};
}

Operator2 operator*(Complex s, const Operator2& a) {
  return {s * a.m_[0], s * a.m_[1], s * a.m_[2], s * a.m_[3]};
}

Operator2 pauli(Pauli p) {
  using namespace std::complex_literals;
  switch (p) {
    case Pauli::I: return Operator2::identity();
    case Pauli::X: return {0.0, 1.0, 1.0, 0.0};
    case Pauli::Y: return {0.0, -1.0i, 1.0i, 0.0};
    case Pauli::Z: return {1.0, 0.0, 0.0, -1.0};
  }
  throw ValidationError("pauli: unknown label");
}

const char* to_string(CardinalState s) {
  switch (s) {
    case CardinalState::Xp: return "Xp";
    case CardinalState::Xm: return "Xm";
    case CardinalState::Yp: return "Yp";
    case CardinalState::Ym: return "Ym";
    case CardinalState::Zp: return "Zp";
    case CardinalState::Zm: return "Zm";
  }
  return "?";
}

Operator2 density(CardinalState s) {
  // (I + r.sigma) / 2 with r the unit Bloch vector of the state.
  const Operator2 half_identity = 0.5 * Operator2::identity();
  switch (s) {
    case CardinalState::Xp: return half_identity + 0.5 * sigma_x();
    case CardinalState::Xm: return half_identity - 0.5 * sigma_x();
    case CardinalState::Yp: return half_identity + 0.5 * sigma_y();
    case CardinalState::Ym: return half_identity - 0.5 * sigma_y();
    case CardinalState::Zp: return half_identity + 0.5 * sigma_z();
    case CardinalState::Zm: return half_identity - 0.5 * sigma_z();
  }
  throw ValidationError("density: unknown cardinal state");
}

double expectation(const Operator2& observable, const Operator2& state) {
  if (!observable.is_hermitian(1e-12)) {
    throw ValidationError("expectation: observable is not Hermitian");
  }
  if (std::abs(state.trace() - 1.0) > 1e-8) {
    throw ValidationError("expectation: state trace deviates from 1 (trace = " +
                          std::to_string(state.trace().real()) + ")");
  }
  const Complex value = (observable * state).trace();
  if (std::abs(value.imag()) > 1e-10) {
    throw ValidationError("expectation: non-negligible imaginary part");
  }
  return value.real();
}

Operator2 expm_hermitian(const Operator2& h, double dt) {
  if (!h.is_hermitian(1e-12)) {
    throw ValidationError("expm_hermitian: generator is not Hermitian");
  }
  using namespace std::complex_literals;
  const double c = 0.5 * (h(0, 0).real() + h(1, 1).real());
  const double ax = h(0, 1).real();
  const double ay = -h(0, 1).imag();
  const double az = 0.5 * (h(0, 0).real() - h(1, 1).real());
  const double norm = std::sqrt(ax * ax + ay * ay + az * az);
  const double angle = norm * dt;
  // sin(|a| dt) / |a| -> dt as |a| -> 0
  const double sinc = norm > 0.0 ? std::sin(angle) / norm : dt;
  const double cs = std::cos(angle);
  const Operator2 rotation{Complex(cs, -sinc * az), -1.0i * sinc * Complex(ax, -ay),
                           -1.0i * sinc * Complex(ax, ay), Complex(cs, sinc * az)};
  return std::exp(Complex(0.0, -c * dt)) * rotation;
}

Operator2 conjugate(const Operator2& u, const Operator2& rho) { return u * rho * u.adjoint(); }

Operator2 sqrt_x_gate() {
  return {Complex(0.5, 0.5), Complex(0.5, -0.5), Complex(0.5, -0.5), Complex(0.5, 0.5)};
}

}  // namespace graybox
