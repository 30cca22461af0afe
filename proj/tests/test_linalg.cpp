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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "qadapt/entanglement.hpp"
#include "qadapt/linalg.hpp"
#include "qadapt/states.hpp"
#include "test_support.hpp"

namespace qadapt {
namespace {

TEST(Kron, IdentityTimesIdentity) {
  EXPECT_EQ(kron(CMat2::identity(), CMat2::identity()), CMat4::identity());
}

TEST(Kron, SigmaXBlockStructure) {
  const CMat4 m = kron(pauli::x(), CMat2::identity());
  CMat4 expected;
  expected(0, 2) = expected(1, 3) = expected(2, 0) = expected(3, 1) = 1.0;
  EXPECT_EQ(m, expected);
}

TEST(Kron, DiagonalFilters) {
  const double s = std::sqrt(0.3);
  const CMat2 f = CMat2::diagonal({1.0, s});
  const CMat4 m = kron(f, f);
  const CMat4 expected = CMat4::diagonal({1.0, s, s, s * s});
  EXPECT_LT(max_abs_diff(m, expected), 1e-15);
}

TEST(Kron, BilinearAndTraceMultiplicative) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = testing::random_hermitian<2>(rng) + cplx{0.0, 0.3} * testing::random_hermitian<2>(rng);
    const auto b = testing::random_hermitian<2>(rng);
    const auto c = testing::random_hermitian<2>(rng) * testing::random_hermitian<2>(rng);
    EXPECT_LT(max_abs_diff(kron(a + b, c), kron(a, c) + kron(b, c)), 1e-13);
    EXPECT_LT(std::abs(trace(kron(a, b)) - trace(a) * trace(b)), 1e-12);
  }
}

TEST(EigHermitian, Diagonal) {
  const auto e = eig_hermitian(CMat4::diagonal({2.0, 4.0, 1.0, 3.0}));
  EXPECT_DOUBLE_EQ(e.values[0], 4.0);
  EXPECT_DOUBLE_EQ(e.values[1], 3.0);
  EXPECT_DOUBLE_EQ(e.values[2], 2.0);
  EXPECT_DOUBLE_EQ(e.values[3], 1.0);
}

TEST(EigHermitian, MaximallyMixed) {
  const auto e = eig_hermitian(0.25 * CMat4::identity());
  for (double v : e.values) EXPECT_NEAR(v, 0.25, 1e-15);
}

TEST(EigHermitian, PartialTransposeOfSingletMatchesCharacteristicPolynomial) {
  const CMat4 pt = partial_transpose_A(bell(BellKind::PsiMinus));
  // det(x I - pt) = (x - 1/2)^3 (x + 1/2) = x^4 - x^3 + x/4 - 1/16
  const auto c = testing::characteristic_polynomial(pt);
  const std::array<double, 5> expected{-1.0 / 16, 0.25, 0.0, -1.0, 1.0};
  for (int k = 0; k < 5; ++k) EXPECT_LT(std::abs(c[k] - expected[k]), 1e-15) << k;

  const auto e = eig_hermitian(pt);
  const std::array<double, 4> frozen{0.5, 0.5, 0.5, -0.5};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(e.values[i], frozen[i], 1e-14);
  for (double v : e.values) {
    cplx p = 1.0;
    for (int k = 3; k >= 0; --k) p = p * v + c[k];
    EXPECT_LT(std::abs(p), 1e-14);
  }
}

TEST(EigHermitian, SimpleSpectrumMatchesCharacteristicPolynomialRoots) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const CMat4 m = testing::random_hermitian<4>(rng);
    auto roots = testing::eigenvalues_by_charpoly(m);
    std::vector<double> oracle;
    for (auto r : roots) oracle.push_back(r.real());
    std::sort(oracle.begin(), oracle.end(), std::greater<>());
    const auto e = eig_hermitian(m);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(e.values[i], oracle[i], 1e-9);
  }
}

TEST(EigHermitian, RejectsNonHermitian) {
  CMat4 m = CMat4::identity();
  m(0, 1) = 1e-6;
  EXPECT_THROW(eig_hermitian(m), NotHermitian);
}

TEST(EigHermitian, RandomReconstructionAndUnitarity) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const auto m = testing::random_hermitian<4>(rng, trial % 2 ? 1.0 : 0.01);
    const auto e = eig_hermitian(m);
    EXPECT_LT(max_abs_diff(reconstruct(e.values, e.vectors), m), 1e-10);
    EXPECT_LT(max_abs_diff(adjoint(e.vectors) * e.vectors, CMat4::identity()), 1e-10);
    EXPECT_TRUE(std::is_sorted(e.values.begin(), e.values.end(), std::greater<>()));
    EXPECT_LT(e.sweeps, 100);
  }
}

TEST(EigHermitian, DegenerateSpectrum) {
  std::mt19937_64 rng(5);
  // unitary conjugation of diag(1,1,-2,-2)
  const CMat4 u = kron(testing::random_unitary2(rng), testing::random_unitary2(rng));
  const CMat4 m = u * CMat4::diagonal({1.0, 1.0, -2.0, -2.0}) * adjoint(u);
  const auto e = eig_hermitian(0.5 * (m + adjoint(m)));
  EXPECT_NEAR(e.values[0], 1.0, 1e-12);
  EXPECT_NEAR(e.values[1], 1.0, 1e-12);
  EXPECT_NEAR(e.values[2], -2.0, 1e-12);
  EXPECT_NEAR(e.values[3], -2.0, 1e-12);
}

TEST(SqrtPsd, Identity) { EXPECT_LT(max_abs_diff(sqrt_psd(CMat4::identity()), CMat4::identity()), 1e-15); }

TEST(SqrtPsd, Diagonal) {
  const auto s = sqrt_psd(CMat4::diagonal({4.0, 1.0, 0.0, 0.0}));
  EXPECT_LT(max_abs_diff(s, CMat4::diagonal({2.0, 1.0, 0.0, 0.0})), 1e-15);
}

TEST(SqrtPsd, ProjectorIsIdempotent) {
  const CMat4 p = bell(BellKind::PsiMinus).matrix();
  EXPECT_LT(max_abs_diff(sqrt_psd(p, 1e-14), p), 1e-12);
  EXPECT_LT(max_abs_diff(sqrt_psd(p) * sqrt_psd(p), p), 1e-9);
}

TEST(SqrtPsd, ClipsRoundingNegativesAndRejectsRealOnes) {
  EXPECT_NO_THROW(sqrt_psd(CMat4::diagonal({1.0, 0.5, 0.0, -5e-11})));
  EXPECT_THROW(sqrt_psd(CMat4::diagonal({1.0, 0.5, 0.0, -1e-6})), NotPSD);
}

TEST(SqrtPsd, RandomStatesSquareBack) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const auto rho = testing::random_state(rng, 1 + trial % 4).matrix();
    const auto s = sqrt_psd(rho);
    EXPECT_LT(max_abs_diff(s * s, rho), 1e-9);
    EXPECT_LT(hermitian_deviation(s), 1e-12);
    EXPECT_GE(min_eigenvalue(0.5 * (s + adjoint(s))), -1e-12);
  }
}

}  // namespace
}  // namespace qadapt
