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

// JSON encodings of channels and pipeline specs. Parsing is strict: unknown
// keys and malformed shapes raise std::invalid_argument.
//
// Channel:  {"label": str, "kraus": [[[re, im] x 4 row-major] ...]}
// Filter:   {"r": num, "u": [a, b, d], "v": [a, b, d]}   (u, v optional)
// Stage:    {"type": "channel", "channel": <Channel>}
//         | {"type": "channel", "family": "depolarizing", "p": num}
//         | {"type": "channel", "family": "amplitude_damping", "gamma": num}
//         | {"type": "channel", "family": "replace", "p": num, "state": [[re, im], [re, im]]}
//         | {"type": "filter", "a": <Filter>, "b": <Filter>}  (either side optional)
// Pipeline: {"configuration": "asymmetric"|"symmetric", "input": "PsiMinus"|...,
//            "input_visibility": num (optional), "stages": [<Stage> ...]}
// GA:       {"population", "generations", "tournament", "elitism",
//            "mutation_sigma", "crossover"}  (all optional)

#pragma once

#include <cstdlib>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qadapt/adaptation.hpp"
#include "qadapt/channels.hpp"
#include "qadapt/format.hpp"
#include "qadapt/optimize.hpp"

namespace qadapt {

using json = nlohmann::json;

namespace detail {

inline void require_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view what) {
  if (!j.is_object()) throw std::invalid_argument(std::string(what) + ": expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw std::invalid_argument(std::string(what) + ": unknown key '" + key + "'");
  }
}

inline double get_number(const json& j, const char* key, std::string_view what) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw std::invalid_argument(std::string(what) + ": '" + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

inline cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw std::invalid_argument("complex entry must be [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline std::array<double, 3> angles_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("filter angles must be [a, b, d]");
  std::array<double, 3> a{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!j[i].is_number()) throw std::invalid_argument("filter angles must be numbers");
    a[i] = j[i].get<double>();
  }
  return a;
}

}  // namespace detail

inline json channel_to_json(const KrausChannel& ch) {
  json kraus = json::array();
  for (const auto& k : ch.kraus) {
    json m = json::array();
    for (const auto& x : k.data) m.push_back({x.real(), x.imag()});
    kraus.push_back(std::move(m));
  }
  return {{"label", ch.label}, {"kraus", std::move(kraus)}};
}

inline KrausChannel channel_from_json(const json& j) {
  detail::require_keys(j, {"label", "kraus"}, "channel");
  KrausChannel ch;
  if (j.contains("label")) ch.label = j.at("label").get<std::string>();
  if (!j.contains("kraus") || !j.at("kraus").is_array()) throw std::invalid_argument("channel: 'kraus' must be a list");
  for (const auto& m : j.at("kraus")) {
    if (!m.is_array() || m.size() != 4) {
      throw std::invalid_argument("channel: each Kraus operator is 4 row-major [re, im] entries");
    }
    CMat2 k;
    for (std::size_t i = 0; i < 4; ++i) k.data[i] = detail::complex_from_json(m[i]);
    ch.kraus.push_back(k);
  }
  return ch;
}

inline json filter_to_json(const LocalFilter& f) {
  return {{"r", f.r}, {"u", f.u_angles}, {"v", f.v_angles}};
}

inline LocalFilter filter_from_json(const json& j) {
  detail::require_keys(j, {"r", "u", "v"}, "filter");
  LocalFilter f;
  f.r = j.contains("r") ? detail::get_number(j, "r", "filter") : 1.0;
  if (j.contains("u")) f.u_angles = detail::angles_from_json(j.at("u"));
  if (j.contains("v")) f.v_angles = detail::angles_from_json(j.at("v"));
  if (!(f.r >= 0.0 && f.r <= 1.0)) throw std::invalid_argument("filter: r must lie in [0,1]");
  return f;
}

inline json stage_to_json(const Stage& stage) {
  if (const auto* c = std::get_if<ChannelStage>(&stage)) {
    return {{"type", "channel"}, {"channel", channel_to_json(c->channel)}};
  }
  const auto& f = std::get<FilterStage>(stage);
  json j = {{"type", "filter"}};
  if (f.a) j["a"] = filter_to_json(*f.a);
  if (f.b) j["b"] = filter_to_json(*f.b);
  return j;
}

inline Stage stage_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw std::invalid_argument("stage: needs a string 'type'");
  }
  const auto type = j.at("type").get<std::string>();
  if (type == "filter") {
    detail::require_keys(j, {"type", "a", "b"}, "filter stage");
    FilterStage f;
    if (j.contains("a")) f.a = filter_from_json(j.at("a"));
    if (j.contains("b")) f.b = filter_from_json(j.at("b"));
    return f;
  }
  if (type != "channel") throw std::invalid_argument("stage: unknown type '" + type + "'");
  if (j.contains("channel")) {
    detail::require_keys(j, {"type", "channel"}, "channel stage");
    return ChannelStage{channel_from_json(j.at("channel"))};
  }
  if (!j.contains("family") || !j.at("family").is_string()) {
    throw std::invalid_argument("channel stage: needs 'channel' or 'family'");
  }
  const auto family = j.at("family").get<std::string>();
  try {
    if (family == "depolarizing") {
      detail::require_keys(j, {"type", "family", "p"}, "depolarizing stage");
      return ChannelStage{depolarizing(detail::get_number(j, "p", "depolarizing stage"))};
    }
    if (family == "amplitude_damping") {
      detail::require_keys(j, {"type", "family", "gamma"}, "amplitude_damping stage");
      return ChannelStage{amplitude_damping(detail::get_number(j, "gamma", "amplitude_damping stage"))};
    }
    if (family == "replace") {
      detail::require_keys(j, {"type", "family", "p", "state"}, "replace stage");
      const auto& s = j.at("state");
      if (!s.is_array() || s.size() != 2) throw std::invalid_argument("replace stage: 'state' is [[re,im],[re,im]]");
      return ChannelStage{replace_channel(detail::get_number(j, "p", "replace stage"),
                                          {detail::complex_from_json(s[0]), detail::complex_from_json(s[1])})};
    }
  } catch (const DomainError& e) {
    throw std::invalid_argument(e.what());
  }
  throw std::invalid_argument("channel stage: unknown family '" + family + "'");
}

inline json pipeline_to_json(const PipelineSpec& spec) {
  json stages = json::array();
  for (const auto& s : spec.stages) stages.push_back(stage_to_json(s));
  return {{"configuration", std::string(to_string(spec.configuration))},
          {"input", std::string(to_string(spec.input))},
          {"input_visibility", spec.input_visibility},
          {"stages", std::move(stages)}};
}

inline PipelineSpec pipeline_from_json(const json& j) {
  detail::require_keys(j, {"configuration", "input", "input_visibility", "stages"}, "pipeline");
  PipelineSpec spec;
  const auto conf = j.value("configuration", std::string("asymmetric"));
  if (conf == "asymmetric") {
    spec.configuration = Configuration::Asymmetric;
  } else if (conf == "symmetric") {
    spec.configuration = Configuration::Symmetric;
  } else {
    throw std::invalid_argument("pipeline: configuration must be 'asymmetric' or 'symmetric'");
  }
  const auto input = parse_bell_kind(j.value("input", std::string("PsiMinus")));
  if (!input) throw std::invalid_argument("pipeline: unknown input Bell kind");
  spec.input = *input;
  if (j.contains("input_visibility")) spec.input_visibility = detail::get_number(j, "input_visibility", "pipeline");
  if (!j.contains("stages") || !j.at("stages").is_array()) throw std::invalid_argument("pipeline: 'stages' must be a list");
  for (const auto& s : j.at("stages")) spec.stages.push_back(stage_from_json(s));
  return spec;
}

inline json report_to_json(const EntanglementReport& r) {
  return {{"min_pt_eigenvalue", r.min_pt_eigenvalue},
          {"concurrence", r.concurrence},
          {"entangled", r.entangled},
          {"tolerance", r.tolerance}};
}

inline json matrix_to_json(const CMat4& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < 4; ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < 4; ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json pipeline_result_to_json(const PipelineResult& r) {
  return {{"success_rate", r.outcome.success_rate},
          {"report", report_to_json(r.report)},
          {"state", matrix_to_json(r.outcome.state.matrix())}};
}

inline json ga_to_json(const GaConfig& ga) {
  return {{"population", ga.population},         {"generations", ga.generations},
          {"tournament", ga.tournament},         {"elitism", ga.elitism},
          {"mutation_sigma", ga.mutation_sigma}, {"crossover", ga.crossover}};
}

// Keys missing from j keep the values in base.
inline GaConfig ga_from_json(const json& j, GaConfig base = {}) {
  detail::require_keys(j, {"population", "generations", "tournament", "elitism", "mutation_sigma", "crossover"}, "ga");
  auto get_int = [&](const char* key, int& out) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number_integer()) throw std::invalid_argument(std::string("ga: '") + key + "' must be an integer");
    out = j.at(key).get<int>();
  };
  get_int("population", base.population);
  get_int("generations", base.generations);
  get_int("tournament", base.tournament);
  get_int("elitism", base.elitism);
  if (j.contains("mutation_sigma")) base.mutation_sigma = detail::get_number(j, "mutation_sigma", "ga");
  if (j.contains("crossover")) base.crossover = detail::get_number(j, "crossover", "ga");
  return base;
}

inline json optimization_result_to_json(const OptimizationProblem& problem, const OptimizationResult& r) {
  json filters = json::array();
  for (const auto& f : r.filters) filters.push_back(filter_to_json(f));
  bool diagonal = !r.filters.empty();
  for (const auto& f : r.filters) {
    diagonal = diagonal && f.r == r.filters.front().r && f.u_angles == std::array<double, 3>{} &&
               f.v_angles == std::array<double, 3>{};
  }
  json j = {{"method", r.method},
            {"objective_kind", std::string(to_string(problem.objective))},
            {"space", std::string(to_string(problem.space))},
            {"identical_filters", problem.identical_filters},
            {"seed", problem.seed},
            {"min_success", problem.min_success},
            {"objective", r.objective},
            {"success_rate", r.success_rate},
            {"evaluations", r.evaluations},
            {"converged", r.converged},
            {"best_r", diagonal ? json(r.filters.front().r) : json(nullptr)},
            {"filters", std::move(filters)}};
  if (r.method == "genetic") {
    j["ga"] = ga_to_json(problem.ga);
    j["history"] = r.history;
  }
  return j;
}

// Copy with every floating-point value rounded to 12 significant digits,
// applied to everything the command line prints.
inline json rounded(const json& j) {
  if (j.is_number_float()) return std::strtod(format_number(j.get<double>()).c_str(), nullptr);
  if (j.is_array() || j.is_object()) {
    json out = j;
    for (auto& v : out) v = rounded(v);
    return out;
  }
  return j;
}

}  // namespace qadapt
