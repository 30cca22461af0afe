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

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qadapt/errors.hpp"
#include "qadapt/linalg.hpp"
#include "qadapt/states.hpp"

namespace qadapt {

// Single-qubit channel rho -> sum_k A_k rho A_k^dagger.
struct KrausChannel {
  std::vector<CMat2> kraus;
  std::string label;

  std::size_t size() const { return kraus.size(); }
};

// Trace preservation is accepted at this deviation from sum A^dagger A = I.
inline constexpr double kCompletenessTolerance = 1e-10;
// apply/compose refuse channels that are off by more than this.
inline constexpr double kChannelRejectTolerance = 1e-8;

struct ChannelCheck {
  double deviation = 0.0;  // max |sum_k A_k^dagger A_k - I| entry
  bool ok = false;
};

inline ChannelCheck validate(const KrausChannel& ch) {
  ChannelCheck c;
  if (ch.kraus.empty()) {
    c.deviation = 1.0;
    return c;
  }
  CMat2 sum;
  for (const auto& k : ch.kraus) {
    if (!all_finite(k)) {
      c.deviation = INFINITY;
      return c;
    }
    sum += adjoint(k) * k;
  }
  c.deviation = max_abs_diff(sum, CMat2::identity());
  c.ok = c.deviation < kCompletenessTolerance;
  return c;
}

namespace detail {

inline void require_valid(const KrausChannel& ch, const char* where) {
  const auto c = validate(ch);
  if (!(c.deviation <= kChannelRejectTolerance)) {
    throw InvalidChannel(std::string(where) + ": channel '" + ch.label +
                         "' violates completeness by " + std::to_string(c.deviation));
  }
}

}  // namespace detail

// embed(op, side) * rho * embed(op, side)^dagger without forming the 4x4
// embedding.
inline CMat4 conjugate_local(const CMat2& op, Side side, const CMat4& rho) {
  // index (a, b) -> 2a + b; `side` selects which of the two indices op acts on
  auto idx = [side](std::size_t acted, std::size_t spectator) {
    return side == Side::A ? 2 * acted + spectator : 2 * spectator + acted;
  };
  CMat4 left;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t c = 0; c < 4; ++c)
        left(idx(i, s), c) = detail::mul(op(i, 0), rho(idx(0, s), c)) + detail::mul(op(i, 1), rho(idx(1, s), c));
  CMat4 out;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t s = 0; s < 2; ++s)
        out(r, idx(j, s)) = detail::mul(left(r, idx(0, s)), std::conj(op(j, 0))) +
                            detail::mul(left(r, idx(1, s)), std::conj(op(j, 1)));
  return out;
}

// Channel action on a raw operator; no normalization and no validation.
inline CMat4 apply_unchecked(const KrausChannel& ch, const CMat4& rho, Side side) {
  CMat4 out;
  for (const auto& k : ch.kraus) out += conjugate_local(k, side, rho);
  return out;
}

inline TwoQubitState apply(const KrausChannel& ch, const TwoQubitState& state, Side side) {
  detail::require_valid(ch, "apply");
  return TwoQubitState(apply_unchecked(ch, state.matrix(), side));
}

// Single-qubit action rho -> sum_k A_k rho A_k^dagger.
inline CMat2 apply_single(const KrausChannel& ch, const CMat2& rho) {
  CMat2 out;
  for (const auto& k : ch.kraus) out += sandwich(k, rho);
  return out;
}

inline KrausChannel identity_channel() { return {{CMat2::identity()}, "identity"}; }

inline KrausChannel unitary_channel(const CMat2& u, std::string label = "unitary") {
  return {{u}, std::move(label)};
}

// Kraus set {sqrt((1+3p)/4) I, sqrt((1-p)/4) sigma_1, sigma_2, sigma_3};
// index 0 is the identity element.
inline KrausChannel depolarizing(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("depolarizing: p must lie in [0,1]");
  const double w0 = std::sqrt((1.0 + 3.0 * p) / 4.0);
  const double w = std::sqrt((1.0 - p) / 4.0);
  return {{w0 * pauli::identity(), w * pauli::x(), w * pauli::y(), w * pauli::z()},
          "depolarizing(" + std::to_string(p) + ")"};
}

// {diag(1, sqrt(1-gamma)), [[0, sqrt(gamma)], [0, 0]]}: |1> decays to |0>.
inline KrausChannel amplitude_damping(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("amplitude_damping: gamma must lie in [0,1]");
  return {{CMat2{{1.0, 0.0, 0.0, std::sqrt(1.0 - gamma)}}, CMat2{{0.0, std::sqrt(gamma), 0.0, 0.0}}},
          "amplitude_damping(" + std::to_string(gamma) + ")"};
}

// With probability p the qubit passes untouched; otherwise it is replaced by
// the pure state |s>. Kraus set {sqrt(p) I, sqrt(1-p)|s><0|, sqrt(1-p)|s><1|}.
inline KrausChannel replace_channel(double p, const std::array<cplx, 2>& s) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("replace_channel: p must lie in [0,1]");
  const double norm = std::norm(s[0]) + std::norm(s[1]);
  if (std::abs(norm - 1.0) > 1e-12) throw DomainError("replace_channel: replacement state not normalized");
  const double w = std::sqrt(1.0 - p);
  return {{std::sqrt(p) * CMat2::identity(), CMat2{{w * s[0], 0.0, w * s[1], 0.0}},
           CMat2{{0.0, w * s[0], 0.0, w * s[1]}}},
          "replace(" + std::to_string(p) + ")"};
}

// `second` after `first`: Kraus set {B2_j B1_i}, i outer. Elements are never
// pruned here, so the set has first.size() * second.size() entries.
inline KrausChannel compose(const KrausChannel& first, const KrausChannel& second) {
  detail::require_valid(first, "compose");
  detail::require_valid(second, "compose");
  KrausChannel out;
  out.label = second.label + " o " + first.label;
  out.kraus.reserve(first.size() * second.size());
  for (const auto& b1 : first.kraus)
    for (const auto& b2 : second.kraus) out.kraus.push_back(b2 * b1);
  return out;
}

// Drops Kraus elements with Frobenius norm below eps.
inline KrausChannel prune(const KrausChannel& ch, double eps = 1e-14) {
  KrausChannel out{{}, ch.label};
  for (const auto& k : ch.kraus)
    if (frobenius_norm(k) >= eps) out.kraus.push_back(k);
  if (out.kraus.empty()) out.kraus.push_back(CMat2{});
  return out;
}

}  // namespace qadapt
