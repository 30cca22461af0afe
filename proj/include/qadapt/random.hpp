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

// Random test inputs: Haar-like local unitaries, Ginibre-type mixed states
// and pure qubit kets.

#pragma once

#include <array>
#include <cmath>
#include <random>

#include "qadapt/linalg.hpp"
#include "qadapt/states.hpp"

namespace qadapt {

inline CMat2 random_unitary2(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  // normalized complex Gaussian 4-vector -> SU(2) element, then random phase
  double a = g(rng), b = g(rng), c = g(rng), d = g(rng);
  const double n = std::sqrt(a * a + b * b + c * c + d * d);
  const cplx alpha{a / n, b / n};
  const cplx beta{c / n, d / n};
  const cplx phase = std::polar(1.0, std::uniform_real_distribution<double>(0, 6.283185307179586)(rng));
  return phase * CMat2{{alpha, -std::conj(beta), beta, std::conj(alpha)}};
}

// G G^dagger / Tr with G a 4 x rank complex Gaussian matrix.
inline TwoQubitState random_state(std::mt19937_64& rng, int rank = 4) {
  std::normal_distribution<double> g;
  CMat4 gm;
  for (std::size_t i = 0; i < 4; ++i)
    for (int j = 0; j < rank; ++j) gm(i, j) = cplx{g(rng), g(rng)};
  CMat4 rho = gm * adjoint(gm);
  const double t = trace(rho).real();
  return TwoQubitState((1.0 / t) * rho);
}

inline std::array<cplx, 2> random_ket2(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::array<cplx, 2> v{cplx{g(rng), g(rng)}, cplx{g(rng), g(rng)}};
  const double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
  return {v[0] / n, v[1] / n};
}

}  // namespace qadapt
