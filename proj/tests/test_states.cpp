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

#include <random>

#include "qadapt/channels.hpp"
#include "qadapt/entanglement.hpp"
#include "qadapt/states.hpp"
#include "test_support.hpp"

namespace qadapt {
namespace {

TEST(Bell, SingletEntries) {
  const auto rho = bell(BellKind::PsiMinus);
  CMat4 expected;
  expected(1, 1) = expected(2, 2) = 0.5;
  expected(1, 2) = expected(2, 1) = -0.5;
  EXPECT_LT(max_abs_diff(rho.matrix(), expected), 1e-15);
}

TEST(Bell, PhiMinusEntries) {
  const auto rho = bell(BellKind::PhiMinus);
  CMat4 expected;
  expected(0, 0) = expected(3, 3) = 0.5;
  expected(0, 3) = expected(3, 0) = -0.5;
  EXPECT_LT(max_abs_diff(rho.matrix(), expected), 1e-15);
}

TEST(Bell, AllKindsArePureDensityMatrices) {
  for (auto k : {BellKind::PsiMinus, BellKind::PsiPlus, BellKind::PhiMinus, BellKind::PhiPlus}) {
    const auto rho = bell(k);
    EXPECT_NEAR(trace(rho.matrix()).real(), 1.0, 1e-15);
    EXPECT_NEAR(rho.purity(), 1.0, 1e-15);
    EXPECT_TRUE(check_state(rho.matrix()).ok);
    EXPECT_EQ(parse_bell_kind(to_string(k)), k);
  }
  EXPECT_FALSE(parse_bell_kind("Singlet").has_value());
}

TEST(Werner, Endpoints) {
  EXPECT_LT(max_abs_diff(werner(BellKind::PsiMinus, 1.0).matrix(), bell(BellKind::PsiMinus).matrix()), 1e-15);
  EXPECT_LT(max_abs_diff(werner(BellKind::PsiMinus, 0.0).matrix(), 0.25 * CMat4::identity()), 1e-15);
}

TEST(Werner, EntangledAboveOneThird) {
  EXPECT_LT(min_pt_eigenvalue(werner(BellKind::PsiMinus, 0.5)), 0.0);
  EXPECT_GT(min_pt_eigenvalue(werner(BellKind::PsiMinus, 0.2)), 0.0);
}

TEST(Werner, DomainChecks) {
  EXPECT_THROW(werner(BellKind::PsiMinus, 1.5), DomainError);
  EXPECT_THROW(werner(BellKind::PsiMinus, -0.1), DomainError);
  EXPECT_THROW(werner(BellKind::PhiPlus, 0.5), DomainError);
  EXPECT_NO_THROW(mix_with_white_noise(bell(BellKind::PhiPlus), 0.5));
}

TEST(Werner, SatisfiesStateInvariants) {
  for (double p = 0.0; p <= 1.0; p += 0.05) {
    for (auto k : {BellKind::PsiMinus, BellKind::PhiMinus}) {
      const auto c = check_state(werner(k, p).matrix());
      EXPECT_TRUE(c.ok) << p;
      EXPECT_LT(c.hermitian_deviation, 1e-10);
      EXPECT_LT(c.trace_deviation, 1e-10);
      EXPECT_GE(c.min_eigenvalue, -1e-9);
    }
  }
}

TEST(Werner, DepolarizingOneQubitOfSinglet) {
  for (double p : {0.0, 0.1, 0.33, 0.5, 0.77, 1.0}) {
    const auto out = apply(depolarizing(p), bell(BellKind::PsiMinus), Side::B);
    EXPECT_LT(max_abs_diff(out.matrix(), werner(BellKind::PsiMinus, p).matrix()), 1e-12) << p;
  }
}

TEST(Werner, ConcurrenceInvariantUnderUUTwirl) {
  std::mt19937_64 rng(8);
  for (double p : {0.2, 0.5, 0.9}) {
    const auto w = werner(BellKind::PsiMinus, p);
    const double c0 = concurrence(w);
    for (int i = 0; i < 20; ++i) {
      const CMat2 u = testing::random_unitary2(rng);
      const CMat4 uu = embed(u, Side::A) * embed(u, Side::B);
      const TwoQubitState twirled(sandwich(uu, w.matrix()));
      EXPECT_LT(max_abs_diff(twirled.matrix(), w.matrix()), 1e-10);
      EXPECT_NEAR(concurrence(twirled), c0, 1e-10);
    }
  }
}

TEST(Embed, Examples) {
  EXPECT_EQ(embed(CMat2::identity(), Side::A), CMat4::identity());
  EXPECT_EQ(embed(pauli::z(), Side::B), CMat4::diagonal({1.0, -1.0, 1.0, -1.0}));
  const double s = std::sqrt(0.4);
  EXPECT_EQ(embed(CMat2::diagonal({1.0, s}), Side::A), CMat4::diagonal({1.0, 1.0, s, s}));
}

TEST(TwoQubitState, CheckedRejectsInvalid) {
  EXPECT_THROW(TwoQubitState::checked(CMat4::identity()), InvalidState);
  EXPECT_THROW(TwoQubitState::checked(CMat4::diagonal({1.5, -0.5, 0.0, 0.0})), InvalidState);
  CMat4 m = 0.25 * CMat4::identity();
  m(0, 1) = 0.1;
  EXPECT_THROW(TwoQubitState::checked(m), InvalidState);
  EXPECT_NO_THROW(TwoQubitState::checked(0.25 * CMat4::identity()));
}

}  // namespace
}  // namespace qadapt
