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

// Local filters placed between noisy channels, the pipelines that chain
// channels and filters on a qubit pair, and closed-form reference results
// for the replacement-channel and depolarizing/amplitude-damping examples.

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qadapt/channels.hpp"
#include "qadapt/entanglement.hpp"
#include "qadapt/errors.hpp"
#include "qadapt/linalg.hpp"
#include "qadapt/states.hpp"

namespace qadapt {

inline CMat2 rz(double theta) {
  return CMat2::diagonal({std::polar(1.0, -theta / 2.0), std::polar(1.0, theta / 2.0)});
}

inline CMat2 ry(double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return CMat2{{c, -s, s, c}};
}

// Rz(alpha) Ry(beta) Rz(delta); the global phase is irrelevant under conjugation.
inline CMat2 euler_unitary(const std::array<double, 3>& angles) {
  return rz(angles[0]) * ry(angles[1]) * rz(angles[2]);
}

// Probabilistic single-qubit filter F = U diag(1, sqrt(r)) V, kept in its
// canonical parameters and realized on demand. r = 1 is a pure unitary.
struct LocalFilter {
  double r = 1.0;
  std::array<double, 3> u_angles{};
  std::array<double, 3> v_angles{};

  static LocalFilter identity() { return {}; }
  static LocalFilter diagonal(double r) { return {r, {}, {}}; }
  static LocalFilter unitary(const std::array<double, 3>& angles) { return {1.0, angles, {}}; }

  // |0> <-> |1> up to a global phase.
  static LocalFilter bit_flip() { return unitary({std::numbers::pi, std::numbers::pi, 0.0}); }

  CMat2 matrix() const {
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("LocalFilter: r must lie in [0,1]");
    return euler_unitary(u_angles) * CMat2::diagonal({1.0, std::sqrt(r)}) * euler_unitary(v_angles);
  }

  friend bool operator==(const LocalFilter&, const LocalFilter&) = default;
};

// Largest eigenvalue of F^dagger F; at most 1 for a physical filter.
inline double filter_gain(const LocalFilter& f) {
  const CMat2 m = f.matrix();
  return eig_hermitian(adjoint(m) * m).values[0];
}

inline constexpr double kZeroSuccessThreshold = 1e-12;

struct FilterOutcome {
  TwoQubitState state;
  double success_rate = 1.0;
};

inline FilterOutcome apply_filter_matrix(const TwoQubitState& state, const CMat2& f, Side side) {
  const CMat4 raw = conjugate_local(f, side, state.matrix());
  const double s = trace(raw).real();
  if (!(s >= kZeroSuccessThreshold)) {
    throw ZeroSuccess("filter success rate " + std::to_string(s) + " below 1e-12");
  }
  return {TwoQubitState((1.0 / s) * raw), s};
}

// rho -> F rho F^dagger / Tr(F rho F^dagger); the trace is the success rate.
inline FilterOutcome apply_filter(const TwoQubitState& state, const LocalFilter& f, Side side) {
  return apply_filter_matrix(state, f.matrix(), side);
}

enum class Configuration { Asymmetric, Symmetric };

inline std::string_view to_string(Configuration c) {
  return c == Configuration::Asymmetric ? "asymmetric" : "symmetric";
}

// Noise stage. Asymmetric pipelines apply it to qubit B; symmetric
// pipelines apply the same channel to A and to B.
struct ChannelStage {
  KrausChannel channel;
};

// Filter (or unitary adapter) stage. Symmetric pipelines require both
// sides; asymmetric pipelines may filter either qubit.
struct FilterStage {
  std::optional<LocalFilter> a;
  std::optional<LocalFilter> b;
};

using Stage = std::variant<ChannelStage, FilterStage>;

struct PipelineSpec {
  Configuration configuration = Configuration::Asymmetric;
  BellKind input = BellKind::PsiMinus;
  // Weight of the Bell projector in the input; values below one feed the
  // isotropic-noise state input_visibility |Bell><Bell| + (1 - v)/4 I.
  double input_visibility = 1.0;
  std::vector<Stage> stages;
};

inline void validate_pipeline(const PipelineSpec& spec) {
  if (!(spec.input_visibility >= 0.0 && spec.input_visibility <= 1.0)) {
    throw DomainError("pipeline: input_visibility must lie in [0,1]");
  }
  for (std::size_t i = 0; i < spec.stages.size(); ++i) {
    const auto& stage = spec.stages[i];
    if (const auto* c = std::get_if<ChannelStage>(&stage)) {
      const auto check = validate(c->channel);
      if (!(check.deviation <= kChannelRejectTolerance)) {
        throw InvalidChannel("pipeline stage " + std::to_string(i) + ": channel '" + c->channel.label +
                             "' is not trace preserving");
      }
    } else {
      const auto& f = std::get<FilterStage>(stage);
      if (spec.configuration == Configuration::Symmetric && (!f.a || !f.b)) {
        throw DomainError("pipeline stage " + std::to_string(i) + ": symmetric filter stage needs both sides");
      }
      if (!f.a && !f.b) throw DomainError("pipeline stage " + std::to_string(i) + ": empty filter stage");
      for (const auto& side : {f.a, f.b})
        if (side && !(side->r >= 0.0 && side->r <= 1.0)) throw DomainError("pipeline: filter r outside [0,1]");
    }
  }
}

inline TwoQubitState pipeline_input(const PipelineSpec& spec) {
  return mix_with_white_noise(bell(spec.input), spec.input_visibility);
}

struct PipelineResult {
  FilterOutcome outcome;      // normalized final state and cumulative success rate
  EntanglementReport report;  // analysis of the final state
};

// Runs the stages in declared order. The cumulative success rate is the
// product of the per-filter traces; channels are trace preserving and do not
// contribute.
inline PipelineResult run_pipeline(const PipelineSpec& spec, double tol = kEntanglementTolerance) {
  validate_pipeline(spec);
  FilterOutcome cur{pipeline_input(spec), 1.0};
  for (const auto& stage : spec.stages) {
    if (const auto* c = std::get_if<ChannelStage>(&stage)) {
      CMat4 rho = cur.state.matrix();
      if (spec.configuration == Configuration::Symmetric) rho = apply_unchecked(c->channel, rho, Side::A);
      rho = apply_unchecked(c->channel, rho, Side::B);
      cur.state = TwoQubitState(rho);
      continue;
    }
    const auto& f = std::get<FilterStage>(stage);
    if (f.a) {
      const auto o = apply_filter(cur.state, *f.a, Side::A);
      cur = {o.state, cur.success_rate * o.success_rate};
    }
    if (f.b) {
      const auto o = apply_filter(cur.state, *f.b, Side::B);
      cur = {o.state, cur.success_rate * o.success_rate};
    }
  }
  if (cur.success_rate < kZeroSuccessThreshold) {
    throw ZeroSuccess("pipeline success rate " + std::to_string(cur.success_rate) + " below 1e-12");
  }
  return {cur, is_entangled(cur.state, tol)};
}

// Bell(PsiMinus) through replace(p1, |0>) then replace(p2, |1>) on qubit B,
// with an optional adapter between the two channels.
inline PipelineSpec replacement_pipeline(double p1, double p2, std::optional<LocalFilter> adapter = std::nullopt) {
  PipelineSpec spec;
  spec.configuration = Configuration::Asymmetric;
  spec.input = BellKind::PsiMinus;
  spec.stages.push_back(ChannelStage{replace_channel(p1, {1.0, 0.0})});
  if (adapter) spec.stages.push_back(FilterStage{std::nullopt, *adapter});
  spec.stages.push_back(ChannelStage{replace_channel(p2, {0.0, 1.0})});
  return spec;
}

// Isotropic-noise input of visibility p, identical filters on both qubits,
// then amplitude damping gamma on both qubits.
inline PipelineSpec damping_pipeline(BellKind input, double p, double gamma, const LocalFilter& filter_a,
                                     const LocalFilter& filter_b) {
  PipelineSpec spec;
  spec.configuration = Configuration::Symmetric;
  spec.input = input;
  spec.input_visibility = p;
  spec.stages.push_back(FilterStage{filter_a, filter_b});
  spec.stages.push_back(ChannelStage{amplitude_damping(gamma)});
  return spec;
}

inline PipelineSpec damping_pipeline(BellKind input, double p, double gamma, double r = 1.0) {
  return damping_pipeline(input, p, gamma, LocalFilter::diagonal(r), LocalFilter::diagonal(r));
}

namespace detail {

inline void require_unit_interval(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(what) + " must lie in [0,1]");
}

}  // namespace detail

// p1 p2 |Psi-><Psi-| + p2 (1 - p1)/2 I (x) |0><0| + (1 - p2)/2 I (x) |1><1|
inline TwoQubitState eq12_state(double p1, double p2) {
  detail::require_unit_interval(p1, "p1");
  detail::require_unit_interval(p2, "p2");
  const CMat2 zero_proj = CMat2::diagonal({1.0, 0.0});
  const CMat2 one_proj = CMat2::diagonal({0.0, 1.0});
  return TwoQubitState(p1 * p2 * bell(BellKind::PsiMinus).matrix() +
                       (p2 * (1.0 - p1) / 2.0) * kron(CMat2::identity(), zero_proj) +
                       ((1.0 - p2) / 2.0) * kron(CMat2::identity(), one_proj));
}

// The same chain with the bit-flip adapter: p1 p2 |Phi-><Phi-| + (1 - p1 p2)/2 I (x) |1><1|.
inline TwoQubitState eq15_state(double p1, double p2) {
  detail::require_unit_interval(p1, "p1");
  detail::require_unit_interval(p2, "p2");
  const double q = p1 * p2;
  return TwoQubitState(q * bell(BellKind::PhiMinus).matrix() +
                       ((1.0 - q) / 2.0) * kron(CMat2::identity(), CMat2::diagonal({0.0, 1.0})));
}

// Closed-form concurrence of eq12_state before clipping:
// p1 p2 - sqrt((1 - p1)(1 - p2) p2).
inline double eq14_concurrence_signed(double p1, double p2) {
  return p1 * p2 - std::sqrt((1.0 - p1) * (1.0 - p2) * p2);
}

inline double eq14_concurrence(double p1, double p2) { return std::max(0.0, eq14_concurrence_signed(p1, p2)); }

// eq12_state is entangled iff p2 exceeds this (p1, p2 > 0).
inline double eq13_threshold(double p1) { return (1.0 - p1) / (1.0 - p1 + p1 * p1); }

// Concurrence after the bit-flip adapter.
inline double eq15_concurrence(double p1, double p2) { return p1 * p2; }

// Upper bound on sqrt(r) for diag(1, sqrt(r)) filters on both qubits that
// keeps the damped isotropic-noise state entangled:
// (2 sqrt(p(1+p)) - (1+p)) / (gamma (1-p)). Positive iff p > 1/3.
inline double eq18_bound(double p, double gamma) {
  if (p == 1.0) throw DomainError("eq18_bound: p = 1 needs no filter (bound diverges)");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("eq18_bound: p must lie in (0,1)");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("eq18_bound: gamma must lie in (0,1]");
  return (2.0 * std::sqrt(p * (1.0 + p)) - (1.0 + p)) / (gamma * (1.0 - p));
}

struct LimitFilterResult {
  double concurrence = 0.0;
  double success_rate = 0.0;
  TwoQubitState state;
};

// Post-channel filtration of the adapted replacement chain that sends
// |11> -> sqrt(p1 p2)|11> and |01> -> eps|01> relative to |00>. As a local
// product this is diag(1, eps) on B and diag(1, sqrt(p1 p2)/eps) on A,
// rescaled so both filters satisfy F^dagger F <= I. The concurrence tends to
// sqrt(p1 p2) as eps -> 0 while the success rate falls like eps^2.
inline LimitFilterResult post_channel_filter_limit(double p1, double p2, double eps) {
  detail::require_unit_interval(p1, "p1");
  detail::require_unit_interval(p2, "p2");
  if (!(p1 * p2 > 0.0)) throw DomainError("post_channel_filter_limit: needs p1 p2 > 0");
  if (!(eps > 0.0 && eps <= 0.1)) throw DomainError("post_channel_filter_limit: eps must lie in (0, 0.1]");

  const auto adapted = run_pipeline(replacement_pipeline(p1, p2, LocalFilter::bit_flip()));
  const double ratio = std::sqrt(p1 * p2) / eps;
  const double scale = std::max(1.0, ratio);
  const CMat2 fa = CMat2::diagonal({1.0 / scale, ratio / scale});
  const CMat2 fb = CMat2::diagonal({1.0, eps});

  const auto step_a = apply_filter_matrix(adapted.outcome.state, fa, Side::A);
  const auto step_b = apply_filter_matrix(step_a.state, fb, Side::B);
  const double s = adapted.outcome.success_rate * step_a.success_rate * step_b.success_rate;
  return {concurrence(step_b.state), s, step_b.state};
}

}  // namespace qadapt
