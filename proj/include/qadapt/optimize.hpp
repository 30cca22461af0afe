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

// Derivative-free search for the filters of a pipeline template.
//
// Every side present in a FilterStage of the template is a free slot. With
// identical_filters all slots share one parameter block. A slot has one
// parameter (r) in the diagonal space and seven (r, u angles, v angles) in
// the full space. Genomes live in [0,1]^d; angles map as
// alpha, delta = -pi + 2 pi x and beta = pi x.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qadapt/adaptation.hpp"
#include "qadapt/errors.hpp"
#include "qadapt/parallel.hpp"

namespace qadapt {

enum class Objective { Concurrence, MinPTEigenvalue };
enum class SearchSpace { DiagonalOnly, FullFilter };

inline std::string_view to_string(Objective o) {
  return o == Objective::Concurrence ? "concurrence" : "min_pt_eigenvalue";
}
inline std::string_view to_string(SearchSpace s) { return s == SearchSpace::DiagonalOnly ? "diagonal" : "full"; }

struct GaConfig {
  int population = 64;
  int generations = 200;
  int tournament = 4;
  int elitism = 4;
  double mutation_sigma = 0.05;
  double crossover = 0.5;
};

struct OptimizationProblem {
  PipelineSpec pipeline;
  Objective objective = Objective::Concurrence;
  double min_success = 0.0;
  SearchSpace space = SearchSpace::DiagonalOnly;
  bool identical_filters = true;
  std::uint64_t seed = 1;
  GaConfig ga;
  unsigned threads = 0;  // 0: thread_count()
};

struct OptimizationResult {
  std::vector<LocalFilter> filters;  // one per slot, template order (a before b)
  double objective = -1.0;
  double success_rate = 0.0;
  long evaluations = 0;
  bool converged = false;
  std::string method;
  std::vector<double> history;  // best-ever objective after each generation
};

// Symmetric damping template with one free filter stage in front of the
// damping channel.
inline OptimizationProblem damping_problem(BellKind input, double p, double gamma) {
  OptimizationProblem problem;
  problem.pipeline = damping_pipeline(input, p, gamma);
  return problem;
}

inline constexpr double kTieTolerance = 1e-9;
inline constexpr double kInfeasibleFitness = -1.0;

struct Evaluation {
  double fitness = kInfeasibleFitness;
  double success_rate = 0.0;
  bool feasible = false;
};

// Strictly better, with objective ties (within 1e-9) going to the higher
// success rate.
inline bool better(const Evaluation& a, const Evaluation& b) {
  if (a.fitness > b.fitness + kTieTolerance) return true;
  if (a.fitness < b.fitness - kTieTolerance) return false;
  return a.success_rate > b.success_rate;
}

inline std::size_t slot_count(const PipelineSpec& spec) {
  std::size_t n = 0;
  for (const auto& stage : spec.stages) {
    if (const auto* f = std::get_if<FilterStage>(&stage)) n += static_cast<std::size_t>(f->a.has_value()) + f->b.has_value();
  }
  return n;
}

// Copy of the template with the slots filled in order.
inline PipelineSpec fill_slots(const PipelineSpec& spec, const std::vector<LocalFilter>& filters) {
  if (filters.size() != slot_count(spec)) throw DomainError("fill_slots: filter count does not match the slots");
  PipelineSpec out = spec;
  std::size_t k = 0;
  for (auto& stage : out.stages) {
    if (auto* f = std::get_if<FilterStage>(&stage)) {
      if (f->a) f->a = filters[k++];
      if (f->b) f->b = filters[k++];
    }
  }
  return out;
}

inline Evaluation evaluate(const OptimizationProblem& problem, const std::vector<LocalFilter>& filters) {
  Evaluation e;
  try {
    const auto res = run_pipeline(fill_slots(problem.pipeline, filters));
    if (res.outcome.success_rate < std::max(problem.min_success, kZeroSuccessThreshold)) return e;
    e.feasible = true;
    e.success_rate = res.outcome.success_rate;
    e.fitness = problem.objective == Objective::Concurrence ? res.report.concurrence : -res.report.min_pt_eigenvalue;
  } catch (const ZeroSuccess&) {
  }
  return e;
}

namespace detail {

inline void validate_problem(const OptimizationProblem& problem) {
  validate_pipeline(problem.pipeline);
  if (slot_count(problem.pipeline) == 0) throw DomainError("optimization: the template has no filter slots");
  if (!(problem.min_success >= 0.0)) throw DomainError("optimization: min success rate must be non-negative");
  const auto& ga = problem.ga;
  if (ga.population < 2 || ga.generations < 0 || ga.tournament < 1 || ga.elitism < 0 || ga.elitism >= ga.population ||
      !(ga.mutation_sigma >= 0.0) || !(ga.crossover >= 0.0 && ga.crossover <= 1.0)) {
    throw DomainError("optimization: invalid genetic algorithm settings");
  }
}

inline std::size_t genes_per_block(SearchSpace s) { return s == SearchSpace::DiagonalOnly ? 1 : 7; }

inline std::size_t genome_size(const OptimizationProblem& problem) {
  const std::size_t blocks = problem.identical_filters ? 1 : slot_count(problem.pipeline);
  return blocks * genes_per_block(problem.space);
}

inline LocalFilter decode_block(const double* x, SearchSpace space) {
  LocalFilter f;
  f.r = x[0];
  if (space == SearchSpace::FullFilter) {
    constexpr double pi = std::numbers::pi;
    f.u_angles = {-pi + 2 * pi * x[1], pi * x[2], -pi + 2 * pi * x[3]};
    f.v_angles = {-pi + 2 * pi * x[4], pi * x[5], -pi + 2 * pi * x[6]};
  }
  return f;
}

// Genome of the identity filter on every slot.
inline std::vector<double> identity_genome(const OptimizationProblem& problem) {
  std::vector<double> g(genome_size(problem));
  const std::size_t w = genes_per_block(problem.space);
  for (std::size_t b = 0; b < g.size(); b += w) {
    g[b] = 1.0;
    if (w == 7) {
      g[b + 1] = g[b + 3] = g[b + 4] = g[b + 6] = 0.5;
      g[b + 2] = g[b + 5] = 0.0;
    }
  }
  return g;
}

}  // namespace detail

inline std::vector<LocalFilter> decode(const OptimizationProblem& problem, const std::vector<double>& genome) {
  const std::size_t slots = slot_count(problem.pipeline);
  const std::size_t w = detail::genes_per_block(problem.space);
  std::vector<LocalFilter> filters;
  filters.reserve(slots);
  for (std::size_t s = 0; s < slots; ++s) {
    filters.push_back(detail::decode_block(genome.data() + (problem.identical_filters ? 0 : s * w), problem.space));
  }
  return filters;
}

// Exhaustive scan of r = k / (r_steps - 1) with the same diag(1, sqrt r) on
// every slot.
inline OptimizationResult grid_search_diag(const OptimizationProblem& problem, int r_steps) {
  detail::validate_problem(problem);
  if (problem.space != SearchSpace::DiagonalOnly) throw DomainError("grid search needs the diagonal search space");
  if (!problem.identical_filters) throw DomainError("grid search needs identical filters");
  if (r_steps < 2) throw DomainError("grid search needs at least two steps");

  const std::size_t n = static_cast<std::size_t>(r_steps);
  const std::size_t slots = slot_count(problem.pipeline);
  std::vector<Evaluation> evals(n);
  auto r_at = [&](std::size_t k) { return static_cast<double>(k) / static_cast<double>(n - 1); };
  parallel_for(
      n, [&](std::size_t k) { evals[k] = evaluate(problem, std::vector(slots, LocalFilter::diagonal(r_at(k)))); },
      problem.threads ? problem.threads : thread_count());

  std::size_t best = n;
  for (std::size_t k = 0; k < n; ++k) {
    if (evals[k].feasible && (best == n || better(evals[k], evals[best]))) best = k;
  }
  if (best == n) throw NoFeasiblePoint("grid search: no r gives a feasible outcome");

  OptimizationResult result;
  result.filters.assign(slots, LocalFilter::diagonal(r_at(best)));
  result.objective = evals[best].fitness;
  result.success_rate = evals[best].success_rate;
  result.evaluations = static_cast<long>(n);
  result.converged = true;
  result.method = "grid";
  return result;
}

// Seeded genetic algorithm: tournament selection, uniform crossover,
// Gaussian mutation clamped to [0,1], elitism. Individual 0 of the first
// generation is the identity filter. Returns the best individual ever seen.
inline OptimizationResult genetic_optimize(const OptimizationProblem& problem) {
  detail::validate_problem(problem);
  const auto& ga = problem.ga;
  const std::size_t pop = static_cast<std::size_t>(ga.population);
  const std::size_t dim = detail::genome_size(problem);
  const unsigned threads = problem.threads ? problem.threads : thread_count();

  std::mt19937_64 rng(problem.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, ga.mutation_sigma);
  std::uniform_int_distribution<std::size_t> pick(0, pop - 1);

  std::vector<std::vector<double>> genomes(pop, std::vector<double>(dim));
  genomes[0] = detail::identity_genome(problem);
  for (std::size_t i = 1; i < pop; ++i)
    for (auto& x : genomes[i]) x = unit(rng);

  std::vector<Evaluation> evals(pop);
  std::vector<char> known(pop, 0);
  OptimizationResult result;
  result.method = "genetic";
  Evaluation best;
  std::vector<double> best_genome;

  auto evaluate_generation = [&] {
    parallel_for(
        pop,
        [&](std::size_t i) {
          if (!known[i]) evals[i] = evaluate(problem, decode(problem, genomes[i]));
        },
        threads);
    for (std::size_t i = 0; i < pop; ++i) {
      if (!known[i]) ++result.evaluations;
      if (evals[i].feasible && (best_genome.empty() || better(evals[i], best))) {
        best = evals[i];
        best_genome = genomes[i];
      }
    }
  };

  evaluate_generation();
  for (int gen = 0; gen < ga.generations; ++gen) {
    std::vector<std::size_t> order(pop);
    for (std::size_t i = 0; i < pop; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (evals[a].fitness != evals[b].fitness) return evals[a].fitness > evals[b].fitness;
      return evals[a].success_rate > evals[b].success_rate;
    });
    auto tournament = [&] {
      std::size_t winner = pick(rng);
      for (int t = 1; t < ga.tournament; ++t) winner = std::min(winner, pick(rng));
      return order[winner];
    };

    std::vector<std::vector<double>> next(pop);
    std::vector<Evaluation> next_evals(pop);
    std::vector<char> next_known(pop, 0);
    const std::size_t elite = static_cast<std::size_t>(ga.elitism);
    for (std::size_t i = 0; i < elite; ++i) {
      next[i] = genomes[order[i]];
      next_evals[i] = evals[order[i]];
      next_known[i] = 1;
    }
    for (std::size_t i = elite; i < pop; ++i) {
      const auto& a = genomes[tournament()];
      const auto& b = genomes[tournament()];
      std::vector<double> child(dim);
      for (std::size_t d = 0; d < dim; ++d) {
        child[d] = unit(rng) < ga.crossover ? b[d] : a[d];
        child[d] = std::clamp(child[d] + noise(rng), 0.0, 1.0);
      }
      next[i] = std::move(child);
    }
    genomes = std::move(next);
    evals = std::move(next_evals);
    known = std::move(next_known);
    evaluate_generation();
    result.history.push_back(best_genome.empty() ? kInfeasibleFitness : best.fitness);
  }

  if (best_genome.empty()) throw NoFeasiblePoint("genetic search: no feasible individual");
  result.filters = decode(problem, best_genome);
  result.objective = best.fitness;
  result.success_rate = best.success_rate;
  const std::size_t window = std::max<std::size_t>(1, result.history.size() / 4);
  result.converged = result.history.size() <= window ||
                     result.history.back() - result.history[result.history.size() - 1 - window] < kTieTolerance;
  return result;
}

}  // namespace qadapt
