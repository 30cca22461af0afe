// Copyright 2026 The qadapt Authors
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

// Two-qubit density matrices in the basis {|00>, |01>, |10>, |11>}, qubit A
// being the left tensor factor. Every partial transpose and every filter
// placement in the library relies on this one ordering.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "qadapt/errors.hpp"
#include "qadapt/linalg.hpp"

namespace qadapt {

enum class Side { A, B };

enum class BellKind { PsiMinus, PsiPlus, PhiMinus, PhiPlus };

inline std::string_view to_string(BellKind k) {
  switch (k) {
    case BellKind::PsiMinus: return "PsiMinus";
    case BellKind::PsiPlus: return "PsiPlus";
    case BellKind::PhiMinus: return "PhiMinus";
    case BellKind::PhiPlus: return "PhiPlus";
  }
  return "?";
}

inline std::optional<BellKind> parse_bell_kind(std::string_view s) {
  for (auto k : {BellKind::PsiMinus, BellKind::PsiPlus, BellKind::PhiMinus, BellKind::PhiPlus}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

inline std::string_view to_string(Side s) { return s == Side::A ? "A" : "B"; }

struct StateCheck {
  double hermitian_deviation = 0.0;
  double trace_deviation = 0.0;
  double min_eigenvalue = 0.0;
  bool ok = false;
};

inline StateCheck check_state(const CMat4& rho) {
  StateCheck c;
  c.hermitian_deviation = hermitian_deviation(rho);
  c.trace_deviation = std::abs(trace(rho) - 1.0);
  if (!all_finite(rho) || c.hermitian_deviation > 1e-10) {
    c.min_eigenvalue = -INFINITY;
    return c;
  }
  c.min_eigenvalue = min_eigenvalue(0.5 * (rho + adjoint(rho)));
  c.ok = c.trace_deviation < 1e-10 && c.min_eigenvalue >= -1e-9;
  return c;
}

// Density matrix of a qubit pair. The plain constructor trusts its input and
// is used where the invariants hold by construction; `checked` validates
// Hermiticity (1e-10), unit trace (1e-10) and positivity (-1e-9).
class TwoQubitState {
 public:
  TwoQubitState() : rho_(CMat4::identity()) { rho_ = 0.25 * rho_; }
  explicit TwoQubitState(const CMat4& rho) : rho_(rho) {}

  static TwoQubitState checked(const CMat4& rho) {
    const auto c = check_state(rho);
    if (!c.ok) {
      throw InvalidState("not a density matrix: herm dev " + std::to_string(c.hermitian_deviation) +
                         ", trace dev " + std::to_string(c.trace_deviation) + ", min eig " +
                         std::to_string(c.min_eigenvalue));
    }
    return TwoQubitState(rho);
  }

  const CMat4& matrix() const { return rho_; }
  cplx operator()(std::size_t i, std::size_t j) const { return rho_(i, j); }

  double purity() const { return trace(rho_ * rho_).real(); }

 private:
  CMat4 rho_;
};

inline std::array<cplx, 4> bell_vector(BellKind kind) {
  const double h = 1.0 / std::sqrt(2.0);
  switch (kind) {
    case BellKind::PsiMinus: return {0.0, h, -h, 0.0};
    case BellKind::PsiPlus: return {0.0, h, h, 0.0};
    case BellKind::PhiMinus: return {h, 0.0, 0.0, -h};
    case BellKind::PhiPlus: return {h, 0.0, 0.0, h};
  }
  return {};
}

inline CMat4 projector(const std::array<cplx, 4>& psi) {
  CMat4 m;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) m(i, j) = psi[i] * std::conj(psi[j]);
  return m;
}

inline TwoQubitState bell(BellKind kind) { return TwoQubitState(projector(bell_vector(kind))); }

// p * rho + (1 - p) * I/4 for an arbitrary input state.
inline TwoQubitState mix_with_white_noise(const TwoQubitState& state, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("mixing weight must lie in [0,1]");
  return TwoQubitState(p * state.matrix() + ((1.0 - p) / 4.0) * CMat4::identity());
}

// Isotropic-noise (Werner) state p |Bell><Bell| + (1 - p)/4 I. Only the two
// singlet-type kinds are accepted; use mix_with_white_noise for the others.
inline TwoQubitState werner(BellKind kind, double p) {
  if (kind != BellKind::PsiMinus && kind != BellKind::PhiMinus) {
    throw DomainError("werner: only PsiMinus and PhiMinus are supported");
  }
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("werner: p must lie in [0,1]");
  return mix_with_white_noise(bell(kind), p);
}

// op (x) I for side A, I (x) op for side B.
inline CMat4 embed(const CMat2& op, Side side) {
  return side == Side::A ? kron(op, CMat2::identity()) : kron(CMat2::identity(), op);
}

inline TwoQubitState product_state(const CMat2& rho_a, const CMat2& rho_b) {
  return TwoQubitState(kron(rho_a, rho_b));
}

}  // namespace qadapt
