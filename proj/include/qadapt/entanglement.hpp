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

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "qadapt/linalg.hpp"
#include "qadapt/states.hpp"

namespace qadapt {

inline constexpr double kEntanglementTolerance = 1e-10;

struct EntanglementReport {
  double min_pt_eigenvalue = 0.0;
  double concurrence = 0.0;
  bool entangled = false;  // min_pt_eigenvalue < -tolerance
  double tolerance = kEntanglementTolerance;
};

// Transpose over subsystem A: (2i+k, 2j+l) -> (2j+k, 2i+l).
inline CMat4 partial_transpose_A(const CMat4& rho) {
  CMat4 out;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) out(2 * j + k, 2 * i + l) = rho(2 * i + k, 2 * j + l);
  return out;
}

inline CMat4 partial_transpose_A(const TwoQubitState& state) { return partial_transpose_A(state.matrix()); }

inline double min_pt_eigenvalue(const TwoQubitState& state) {
  return min_eigenvalue(partial_transpose_A(state));
}

namespace detail {

// Spectra below this fraction of the largest eigenvalue are rounding noise.
// Zeroing them before square roots keeps pure and rank-deficient states from
// picking up spurious O(1e-8) terms.
inline constexpr double kSpectralNoise = 64.0 * std::numeric_limits<double>::epsilon();

inline std::array<double, 4> wootters_lambdas(const CMat4& rho) {
  static const CMat4 flip = kron(pauli::y(), pauli::y());
  const CMat4 rho_tilde = flip * conj(rho) * flip;

  const auto eig_rho = eig_hermitian(rho);
  const double rho_floor = kSpectralNoise * std::max(1.0, std::abs(eig_rho.values[0]));
  std::array<double, 4> roots{};
  for (std::size_t k = 0; k < 4; ++k) {
    const double lambda = eig_rho.values[k];
    if (lambda < -kPsdClipTolerance) throw NotPSD("concurrence: state is not positive semidefinite");
    roots[k] = lambda <= rho_floor ? 0.0 : std::sqrt(lambda);
  }
  const CMat4 sqrt_rho = reconstruct(roots, eig_rho.vectors);

  CMat4 r = sqrt_rho * rho_tilde * sqrt_rho;
  r = 0.5 * (r + adjoint(r));
  auto mu = eig_hermitian(r).values;
  const double mu_floor = kSpectralNoise * std::max(1.0, std::abs(mu[0]));
  std::array<double, 4> lambdas{};
  for (std::size_t k = 0; k < 4; ++k) lambdas[k] = mu[k] <= mu_floor ? 0.0 : std::sqrt(mu[k]);
  std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
  return lambdas;
}

}  // namespace detail

// lambda_1 - lambda_2 - lambda_3 - lambda_4 before clipping at zero. Handy
// for locating separability boundaries by bisection.
inline double concurrence_signed(const TwoQubitState& state) {
  const auto l = detail::wootters_lambdas(state.matrix());
  return l[0] - l[1] - l[2] - l[3];
}

// Wootters concurrence. The lambdas are the square roots of the spectrum of
// the Hermitian matrix sqrt(rho) rho~ sqrt(rho), rho~ = (Y (x) Y) rho* (Y (x) Y),
// which equals the spectrum of rho rho~.
inline double concurrence(const TwoQubitState& state) {
  return std::clamp(concurrence_signed(state), 0.0, 1.0);
}

inline EntanglementReport is_entangled(const TwoQubitState& state, double tol = kEntanglementTolerance) {
  EntanglementReport r;
  r.tolerance = tol;
  r.min_pt_eigenvalue = min_pt_eigenvalue(state);
  r.entangled = r.min_pt_eigenvalue < -tol;
  r.concurrence = concurrence(state);
  return r;
}

}  // namespace qadapt
