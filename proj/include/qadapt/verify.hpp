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

// Self-check suites run by `qadapt verify`: library invariants on random
// inputs plus the closed-form cross-checks of the adaptation examples.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qadapt/adaptation.hpp"
#include "qadapt/channels.hpp"
#include "qadapt/entanglement.hpp"
#include "qadapt/random.hpp"

namespace qadapt {

struct SuiteResult {
  std::string name;
  long checks = 0;
  long failures = 0;
  double worst = 0.0;  // largest error relative to its tolerance
  bool passed() const { return failures == 0 && checks > 0; }
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  bool passed() const {
    return !suites.empty() && std::all_of(suites.begin(), suites.end(), [](const auto& s) { return s.passed(); });
  }
};

struct VerifyOptions {
  std::uint64_t seed = 20240101;
  int samples = 1000;
  // Multiplies every tolerance. Anything other than 1 is a testing hook;
  // 0 makes every tolerance-based check fail.
  double tolerance_scale = 1.0;
};

namespace detail {

class SuiteRecorder {
 public:
  SuiteRecorder(std::string name, double scale) : scale_(scale) { result_.name = std::move(name); }

  // Passes when error < tol * scale.
  void check(double error, double tol) {
    ++result_.checks;
    const double t = tol * scale_;
    if (!(error < t)) ++result_.failures;
    if (tol > 0) result_.worst = std::max(result_.worst, error / tol);
  }
  void check(bool ok) {
    ++result_.checks;
    if (!ok) ++result_.failures;
  }
  SuiteResult done() { return result_; }

 private:
  double scale_;
  SuiteResult result_;
};

inline KrausChannel random_channel(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u;
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0: return depolarizing(u(rng));
    case 1: return amplitude_damping(u(rng));
    case 2: return replace_channel(u(rng), random_ket2(rng));
    default: return compose(amplitude_damping(u(rng)), unitary_channel(random_unitary2(rng)));
  }
}

inline double min_eig(const TwoQubitState& s) { return min_eigenvalue(s.matrix()); }

}  // namespace detail

inline VerifyReport run_verification(const VerifyOptions& opt = {}) {
  VerifyReport report;
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit;
  const double s = opt.tolerance_scale;
  const int n = std::max(1, opt.samples);

  {
    detail::SuiteRecorder rec("kraus_completeness", s);
    for (int i = 0; i < n; ++i) rec.check(validate(detail::random_channel(rng)).deviation, 1e-10);
    report.suites.push_back(rec.done());
  }
  {
    detail::SuiteRecorder rec("apply_preserves_states", s);
    for (int i = 0; i < n; ++i) {
      const auto rho = random_state(rng, 1 + i % 4);
      const auto out = apply(detail::random_channel(rng), rho, i % 2 ? Side::A : Side::B);
      rec.check(std::abs(trace(out.matrix()).real() - 1.0), 1e-10);
      rec.check(hermitian_deviation(out.matrix()), 1e-12);
      rec.check(std::max(0.0, -detail::min_eig(out)), 1e-10);
    }
    report.suites.push_back(rec.done());
  }
  {
    detail::SuiteRecorder rec("concurrence_local_unitary_invariance", s);
    for (int i = 0; i < n; ++i) {
      const auto rho = random_state(rng, 1 + i % 4);
      const CMat4 u = kron(random_unitary2(rng), random_unitary2(rng));
      rec.check(std::abs(concurrence(TwoQubitState(sandwich(u, rho.matrix()))) - concurrence(rho)), 1e-9);
    }
    report.suites.push_back(rec.done());
  }
  {
    detail::SuiteRecorder rec("ppt_concurrence_sign_agreement", s);
    const double band = 1e-8 * s;
    for (int i = 0; i < n; ++i) {
      const auto r = is_entangled(random_state(rng, 1 + i % 4));
      if (std::abs(r.concurrence) <= band && std::abs(r.min_pt_eigenvalue) <= band) continue;
      rec.check((r.concurrence > band) == (r.min_pt_eigenvalue < -band));
    }
    report.suites.push_back(rec.done());
  }
  {
    detail::SuiteRecorder rec("partial_transpose_involution", s);
    for (int i = 0; i < n; ++i) {
      const auto rho = random_state(rng, 1 + i % 4);
      rec.check(max_abs_diff(partial_transpose_A(partial_transpose_A(rho.matrix())), rho.matrix()), 1e-15);
      rec.check(std::abs(trace(partial_transpose_A(rho)).real() - 1.0), 1e-12);
    }
    report.suites.push_back(rec.done());
  }
  {
    detail::SuiteRecorder rec("replacement_chain_concurrence", s);
    for (int i = 0; i < 100; ++i) {
      const double p1 = 1.0 - unit(rng), p2 = 1.0 - unit(rng);
      const double formula = eq14_concurrence_signed(p1, p2);
      if (formula < 1e-6) continue;
      rec.check(std::abs(run_pipeline(replacement_pipeline(p1, p2)).report.concurrence - formula), 1e-9);
    }
    report.suites.push_back(rec.done());
  }
  {
    detail::SuiteRecorder rec("replacement_chain_threshold", s);
    for (int k = 1; k <= 9; ++k) {
      const double p1 = 0.1 * k;
      double lo = 0.0, hi = 1.0;
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (concurrence_signed(eq12_state(p1, mid)) > 0.0 ? hi : lo) = mid;
      }
      rec.check(std::abs(0.5 * (lo + hi) - eq13_threshold(p1)), 1e-6);
    }
    report.suites.push_back(rec.done());
  }
  {
    detail::SuiteRecorder rec("bit_flip_adaptation", s);
    for (int i = 0; i < 100; ++i) {
      const double p1 = 1.0 - unit(rng), p2 = 1.0 - unit(rng);
      const auto r = run_pipeline(replacement_pipeline(p1, p2, LocalFilter::bit_flip()));
      rec.check(std::abs(r.report.concurrence - p1 * p2), 1e-9);
      rec.check(r.report.concurrence > 0.0);
    }
    report.suites.push_back(rec.done());
  }
  {
    detail::SuiteRecorder rec("depolarizing_werner_identity", s);
    for (int i = 0; i < 20; ++i) {
      const double p = unit(rng);
      const auto out = apply(depolarizing(p), bell(BellKind::PsiMinus), Side::B);
      rec.check(max_abs_diff(out.matrix(), werner(BellKind::PsiMinus, p).matrix()), 1e-12);
    }
    report.suites.push_back(rec.done());
  }
  {
    detail::SuiteRecorder rec("filter_bound_soundness", s);
    const int g = 20;
    for (int i = 0; i < g; ++i) {
      const double p = (1.0 / 3.0 + 0.01) + (0.99 - 1.0 / 3.0 - 0.01) * (i + 0.5) / g;
      for (int j = 0; j < g; ++j) {
        const double gamma = 0.05 + 0.95 * (j + 0.5) / g;
        const double sqrt_r = std::min(1.0, 0.5 * eq18_bound(p, gamma));
        const auto r = run_pipeline(damping_pipeline(BellKind::PsiMinus, p, gamma, sqrt_r * sqrt_r));
        rec.check(r.report.min_pt_eigenvalue < -kEntanglementTolerance * s);
      }
    }
    report.suites.push_back(rec.done());
  }
  return report;
}

}  // namespace qadapt
