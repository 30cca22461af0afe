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

// Small dense complex matrices (2x2 and 4x4) and the handful of kernels the
// rest of the library needs: arithmetic, tensor product, Hermitian
// eigendecomposition by cyclic Jacobi rotations, and PSD square roots.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>

#include "qadapt/errors.hpp"

namespace qadapt {

using cplx = std::complex<double>;

// Row-major N x N complex matrix with value semantics.
template <std::size_t N>
struct Matrix {
  static constexpr std::size_t dim = N;
  std::array<cplx, N * N> data{};

  cplx& operator()(std::size_t i, std::size_t j) { return data[i * N + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data[i * N + j]; }

  static Matrix zero() { return Matrix{}; }

  static Matrix identity() {
    Matrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(const std::array<cplx, N>& d) {
    Matrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
    return m;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

using CMat2 = Matrix<2>;
using CMat4 = Matrix<4>;

namespace detail {

// Plain complex product; std::complex operator* goes through the
// NaN-recovering libgcc path, which dominates runtime in the 4x4 kernels.
inline cplx mul(const cplx& a, const cplx& b) {
  return {a.real() * b.real() - a.imag() * b.imag(),
          a.real() * b.imag() + a.imag() * b.real()};
}

inline cplx mul_conj(const cplx& a, const cplx& b) {  // conj(a) * b
  return {a.real() * b.real() + a.imag() * b.imag(),
          a.real() * b.imag() - a.imag() * b.real()};
}

}  // namespace detail

template <std::size_t N>
Matrix<N> operator+(Matrix<N> a, const Matrix<N>& b) {
  for (std::size_t k = 0; k < N * N; ++k) a.data[k] += b.data[k];
  return a;
}

template <std::size_t N>
Matrix<N> operator-(Matrix<N> a, const Matrix<N>& b) {
  for (std::size_t k = 0; k < N * N; ++k) a.data[k] -= b.data[k];
  return a;
}

template <std::size_t N>
Matrix<N>& operator+=(Matrix<N>& a, const Matrix<N>& b) {
  for (std::size_t k = 0; k < N * N; ++k) a.data[k] += b.data[k];
  return a;
}

template <std::size_t N>
Matrix<N> operator*(cplx s, Matrix<N> a) {
  for (auto& x : a.data) x = detail::mul(s, x);
  return a;
}

template <std::size_t N>
Matrix<N> operator*(double s, Matrix<N> a) {
  for (auto& x : a.data) x *= s;
  return a;
}

template <std::size_t N>
Matrix<N> operator*(const Matrix<N>& a, const Matrix<N>& b) {
  Matrix<N> c;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t k = 0; k < N; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < N; ++j) c(i, j) += detail::mul(aik, b(k, j));
    }
  }
  return c;
}

template <std::size_t N>
Matrix<N> adjoint(const Matrix<N>& a) {
  Matrix<N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(j, i) = std::conj(a(i, j));
  return r;
}

template <std::size_t N>
Matrix<N> transpose(const Matrix<N>& a) {
  Matrix<N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(j, i) = a(i, j);
  return r;
}

// Entrywise complex conjugate.
template <std::size_t N>
Matrix<N> conj(Matrix<N> a) {
  for (auto& x : a.data) x = std::conj(x);
  return a;
}

template <std::size_t N>
cplx trace(const Matrix<N>& a) {
  cplx t{};
  for (std::size_t i = 0; i < N; ++i) t += a(i, i);
  return t;
}

// a * m * a^dagger, the conjugation every channel and filter performs.
template <std::size_t N>
Matrix<N> sandwich(const Matrix<N>& a, const Matrix<N>& m) {
  return a * m * adjoint(a);
}

// Largest entry modulus.
template <std::size_t N>
double max_abs(const Matrix<N>& a) {
  double m = 0.0;
  for (const auto& x : a.data) m = std::max(m, std::abs(x));
  return m;
}

template <std::size_t N>
double max_abs_diff(const Matrix<N>& a, const Matrix<N>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < N * N; ++k) m = std::max(m, std::abs(a.data[k] - b.data[k]));
  return m;
}

template <std::size_t N>
double frobenius_norm(const Matrix<N>& a) {
  double s = 0.0;
  for (const auto& x : a.data) s += std::norm(x);
  return std::sqrt(s);
}

template <std::size_t N>
double hermitian_deviation(const Matrix<N>& a) {
  return max_abs_diff(a, adjoint(a));
}

template <std::size_t N>
bool all_finite(const Matrix<N>& a) {
  return std::all_of(a.data.begin(), a.data.end(), [](const cplx& x) {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
  });
}

// (a (x) b)[2i+k][2j+l] = a[i][j] * b[k][l]
inline CMat4 kron(const CMat2& a, const CMat2& b) {
  CMat4 r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = detail::mul(a(i, j), b(k, l));
  return r;
}

namespace pauli {

inline CMat2 identity() { return CMat2::identity(); }
inline CMat2 x() { return CMat2{{0.0, 1.0, 1.0, 0.0}}; }
inline CMat2 y() { return CMat2{{cplx{0.0, 0.0}, cplx{0.0, -1.0}, cplx{0.0, 1.0}, cplx{0.0, 0.0}}}; }
inline CMat2 z() { return CMat2{{1.0, 0.0, 0.0, -1.0}}; }

}  // namespace pauli

// Hermitian input is accepted if max |m - m^dagger| is below this.
inline constexpr double kHermitianTolerance = 1e-12;
// Eigenvalues down to this value are treated as rounding noise and clipped.
inline constexpr double kPsdClipTolerance = 1e-10;

template <std::size_t N>
struct EigenDecomposition {
  std::array<double, N> values{};  // descending
  Matrix<N> vectors;               // column k is the eigenvector of values[k]
  int sweeps = 0;
};

// Cyclic complex Jacobi. Each (p,q) step first rotates the phase of m(p,q)
// away with diag(1, e^{-i phi}), then applies the real symmetric rotation
// with |theta| <= pi/4. Stops once the off-diagonal Frobenius norm drops
// below 1e-13 (relative to the matrix norm when that exceeds one) or after
// 100 sweeps.
template <std::size_t N>
EigenDecomposition<N> eig_hermitian(const Matrix<N>& m) {
  if (!all_finite(m)) throw NotHermitian("eig_hermitian: non-finite entry");
  const double dev = hermitian_deviation(m);
  if (dev > kHermitianTolerance) {
    throw NotHermitian("eig_hermitian: max |m - m^dagger| = " + std::to_string(dev));
  }

  Matrix<N> a = 0.5 * (m + adjoint(m));
  for (std::size_t i = 0; i < N; ++i) a(i, i) = a(i, i).real();
  Matrix<N> v = Matrix<N>::identity();

  const double threshold = 1e-13 * std::max(1.0, frobenius_norm(a));
  int sweep = 0;
  for (; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        if (i != j) off += std::norm(a(i, j));
    if (std::sqrt(off) < threshold) break;

    for (std::size_t p = 0; p < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const cplx phase_conj = std::conj(apq) / mag;  // e^{-i phi}
        const double alpha = a(p, p).real();
        const double delta = a(q, q).real();
        const double tau = (delta - alpha) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // G restricted to (p,q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
        const cplx gpp = c;
        const cplx gpq = s;
        const cplx gqp = -s * phase_conj;
        const cplx gqq = c * phase_conj;

        for (std::size_t k = 0; k < N; ++k) {  // a <- a G
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = detail::mul(akp, gpp) + detail::mul(akq, gqp);
          a(k, q) = detail::mul(akp, gpq) + detail::mul(akq, gqq);
        }
        for (std::size_t k = 0; k < N; ++k) {  // a <- G^dagger a
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = detail::mul_conj(gpp, apk) + detail::mul_conj(gqp, aqk);
          a(q, k) = detail::mul_conj(gpq, apk) + detail::mul_conj(gqq, aqk);
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        for (std::size_t k = 0; k < N; ++k) {  // v <- v G
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = detail::mul(vkp, gpp) + detail::mul(vkq, gqp);
          v(k, q) = detail::mul(vkp, gpq) + detail::mul(vkq, gqq);
        }
      }
    }
  }

  std::array<std::size_t, N> order;
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

  EigenDecomposition<N> out;
  out.sweeps = sweep;
  for (std::size_t k = 0; k < N; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < N; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

// V diag(values) V^dagger
template <std::size_t N>
Matrix<N> reconstruct(const std::array<double, N>& values, const Matrix<N>& vectors) {
  Matrix<N> r;
  for (std::size_t k = 0; k < N; ++k) {
    if (values[k] == 0.0) continue;
    for (std::size_t i = 0; i < N; ++i) {
      const cplx vik = values[k] * vectors(i, k);
      for (std::size_t j = 0; j < N; ++j) r(i, j) += detail::mul(vik, std::conj(vectors(j, k)));
    }
  }
  return r;
}

template <std::size_t N>
double min_eigenvalue(const Matrix<N>& m) {
  return eig_hermitian(m).values[N - 1];
}

// Square root of a Hermitian PSD matrix. Eigenvalues in [-1e-10, 0) are
// clipped to zero; anything more negative is rejected. Eigenvalues at or
// below `zero_floor` are also treated as exact zeros, which lets callers
// discard rounding noise on rank-deficient inputs before it is amplified
// by the square root.
template <std::size_t N>
Matrix<N> sqrt_psd(const Matrix<N>& m, double zero_floor = 0.0) {
  auto eig = eig_hermitian(m);
  for (auto& lambda : eig.values) {
    if (lambda < -kPsdClipTolerance) {
      throw NotPSD("sqrt_psd: eigenvalue " + std::to_string(lambda) + " below -1e-10");
    }
    lambda = lambda <= zero_floor ? 0.0 : std::sqrt(lambda);
  }
  return reconstruct(eig.values, eig.vectors);
}

}  // namespace qadapt
