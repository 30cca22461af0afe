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

#include <cstdlib>

#include "qadapt/io.hpp"
#include "qadapt/optimize.hpp"

namespace qadapt {
namespace {

OptimizationProblem problem_at(BellKind input, double p, double gamma) {
  auto pr = damping_problem(input, p, gamma);
  pr.threads = 1;
  return pr;
}

double reevaluate(const OptimizationProblem& pr, const OptimizationResult& r) {
  const auto res = run_pipeline(fill_slots(pr.pipeline, r.filters));
  return pr.objective == Objective::Concurrence ? res.report.concurrence : -res.report.min_pt_eigenvalue;
}

TEST(Slots, CountAndFill) {
  auto spec = damping_pipeline(BellKind::PhiMinus, 0.5, 0.5);
  EXPECT_EQ(slot_count(spec), 2u);
  spec.stages.push_back(FilterStage{std::nullopt, LocalFilter::identity()});
  EXPECT_EQ(slot_count(spec), 3u);
  const auto filled = fill_slots(spec, {LocalFilter::diagonal(0.1), LocalFilter::diagonal(0.2), LocalFilter::diagonal(0.3)});
  EXPECT_EQ(std::get<FilterStage>(filled.stages[0]).b->r, 0.2);
  EXPECT_EQ(std::get<FilterStage>(filled.stages[2]).b->r, 0.3);
  EXPECT_THROW(fill_slots(spec, {LocalFilter::identity()}), DomainError);
}

TEST(GridSearch, NoDeathRegion) {
  const auto pr = problem_at(BellKind::PhiMinus, 0.9, 0.1);
  const auto r = grid_search_diag(pr, 200);
  EXPECT_GT(r.objective, 0.0);
  EXPECT_GE(r.objective, run_pipeline(pr.pipeline).report.concurrence);
  EXPECT_EQ(r.evaluations, 200);
  EXPECT_TRUE(r.converged);
}

TEST(GridSearch, RecoversBelowTheSquaredBound) {
  const double p = 0.4, gamma = 0.9;
  const auto pr = problem_at(BellKind::PhiMinus, p, gamma);
  EXPECT_LE(run_pipeline(pr.pipeline).report.concurrence, 0.0);
  const double b2 = eq18_bound(p, gamma) * eq18_bound(p, gamma);
  bool found = false;
  for (int k = 1; k < 50 && !found; ++k) {
    const double r = b2 * k / 50.0;
    found = evaluate(pr, {LocalFilter::diagonal(r), LocalFilter::diagonal(r)}).fitness > 0.0;
  }
  EXPECT_TRUE(found);
  const auto best = grid_search_diag(pr, 200);
  EXPECT_GT(best.objective, 0.0);
}

TEST(GridSearch, TwoStepGrid) {
  const auto pr = problem_at(BellKind::PhiMinus, 0.4, 0.9);
  const auto r = grid_search_diag(pr, 2);
  EXPECT_EQ(r.evaluations, 2);
  // r = 0 projects onto |00>, r = 1 is separable here: the tie goes to the
  // larger success rate.
  EXPECT_EQ(r.filters.front().r, 1.0);
  EXPECT_DOUBLE_EQ(r.success_rate, 1.0);
  EXPECT_EQ(r.objective, 0.0);
}

TEST(GridSearch, MinSuccessConstraint) {
  auto pr = problem_at(BellKind::PhiMinus, 0.4, 0.9);
  pr.min_success = 0.6;
  const auto r = grid_search_diag(pr, 200);
  EXPECT_GE(r.success_rate, 0.6);
  // no filter succeeds more often than always
  pr.min_success = 1.5;
  EXPECT_THROW(grid_search_diag(pr, 5), NoFeasiblePoint);
}

TEST(GridSearch, PreconditionsAreChecked) {
  auto pr = problem_at(BellKind::PhiMinus, 0.5, 0.5);
  EXPECT_THROW(grid_search_diag(pr, 1), DomainError);
  pr.space = SearchSpace::FullFilter;
  EXPECT_THROW(grid_search_diag(pr, 10), DomainError);
  pr.space = SearchSpace::DiagonalOnly;
  pr.identical_filters = false;
  EXPECT_THROW(grid_search_diag(pr, 10), DomainError);
  pr.identical_filters = true;
  pr.pipeline.stages = {ChannelStage{amplitude_damping(0.5)}};
  EXPECT_THROW(grid_search_diag(pr, 10), DomainError);
}

TEST(GridSearch, ReportedObjectiveIsReproducible) {
  for (double gamma : {0.2, 0.5, 0.8}) {
    for (auto obj : {Objective::Concurrence, Objective::MinPTEigenvalue}) {
      auto pr = problem_at(BellKind::PhiMinus, 0.6, gamma);
      pr.objective = obj;
      const auto r = grid_search_diag(pr, 50);
      EXPECT_NEAR(reevaluate(pr, r), r.objective, 1e-10);
    }
  }
}

TEST(Objectives, PositiveConcurrenceImpliesNegativePartialTranspose) {
  const auto pr = problem_at(BellKind::PhiMinus, 0.5, 0.8);
  for (int k = 0; k <= 100; ++k) {
    const double r = k / 100.0;
    const auto res = run_pipeline(damping_pipeline(BellKind::PhiMinus, 0.5, 0.8, r));
    if (res.report.concurrence > 1e-8) {
      EXPECT_LT(res.report.min_pt_eigenvalue, 0.0) << r;
    }
    if (res.report.min_pt_eigenvalue < -1e-8) {
      EXPECT_GT(res.report.concurrence, 0.0) << r;
    }
  }
}

TEST(Genetic, MatchesGridOnDiagonalSpace) {
  const std::array<std::pair<double, double>, 10> points{{{0.4, 0.9},
                                                          {0.5, 0.8},
                                                          {0.6, 0.5},
                                                          {0.7, 0.95},
                                                          {0.9, 0.1},
                                                          {0.45, 0.6},
                                                          {0.8, 0.8},
                                                          {0.55, 0.3},
                                                          {0.35, 0.99},
                                                          {1.0, 0.7}}};
  for (auto [p, gamma] : points) {
    auto pr = problem_at(BellKind::PhiMinus, p, gamma);
    pr.ga.generations = 60;
    const auto grid = grid_search_diag(pr, 400);
    const auto ga = genetic_optimize(pr);
    EXPECT_NEAR(ga.objective, grid.objective, 1e-3) << p << " " << gamma;
    EXPECT_NEAR(reevaluate(pr, ga), ga.objective, 1e-10);
  }
}

TEST(Genetic, RecoversDeadPoint) {
  auto pr = problem_at(BellKind::PhiMinus, 0.5, 0.8);
  EXPECT_EQ(run_pipeline(pr.pipeline).report.concurrence, 0.0);
  pr.space = SearchSpace::FullFilter;
  pr.ga.generations = 80;
  const auto r = genetic_optimize(pr);
  EXPECT_GT(r.objective, 0.0);
  EXPECT_NEAR(reevaluate(pr, r), r.objective, 1e-10);
}

TEST(Genetic, BestEverIsMonotone) {
  auto pr = problem_at(BellKind::PhiMinus, 0.5, 0.8);
  pr.space = SearchSpace::FullFilter;
  pr.identical_filters = false;
  pr.ga.generations = 40;
  const auto r = genetic_optimize(pr);
  ASSERT_EQ(r.history.size(), 40u);
  for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_GE(r.history[i], r.history[i - 1]);
  EXPECT_EQ(r.history.back(), r.objective);
  EXPECT_EQ(r.filters.size(), 2u);
}

TEST(Genetic, NeverReportsInfeasibleOptimum) {
  auto pr = problem_at(BellKind::PhiMinus, 0.6, 0.7);
  pr.min_success = 0.8;
  pr.ga.generations = 30;
  const auto r = genetic_optimize(pr);
  EXPECT_GE(r.success_rate, 0.8);
}

TEST(Genetic, SeedDeterminismIndependentOfThreads) {
  auto pr = problem_at(BellKind::PhiMinus, 0.5, 0.8);
  pr.space = SearchSpace::FullFilter;
  pr.ga.generations = 25;
  pr.seed = 99;
  const auto a = optimization_result_to_json(pr, genetic_optimize(pr)).dump();
  pr.threads = 4;
  const auto b = optimization_result_to_json(pr, genetic_optimize(pr)).dump();
  pr.threads = 1;
  EXPECT_EQ(a, b);
  pr.seed = 100;
  EXPECT_NE(a, optimization_result_to_json(pr, genetic_optimize(pr)).dump());
}

TEST(Genetic, SettingsAreValidated) {
  auto pr = problem_at(BellKind::PhiMinus, 0.5, 0.8);
  pr.ga.elitism = pr.ga.population;
  EXPECT_THROW(genetic_optimize(pr), DomainError);
  pr.ga = GaConfig{};
  pr.ga.crossover = 1.5;
  EXPECT_THROW(genetic_optimize(pr), DomainError);
  pr.ga = GaConfig{};
  pr.min_success = -0.1;
  EXPECT_THROW(genetic_optimize(pr), DomainError);
}

TEST(Genetic, AllInfeasibleRaises) {
  auto pr = problem_at(BellKind::PhiMinus, 0.5, 0.8);
  pr.min_success = 1.5;
  pr.ga.generations = 3;
  EXPECT_THROW(genetic_optimize(pr), NoFeasiblePoint);
}

TEST(Optimal, FilterStrengthGrowsWithDamping) {
  double prev = 2.0;
  for (int k = 0; k < 10; ++k) {
    const double gamma = 0.05 + 0.1 * k;
    const auto r = grid_search_diag(problem_at(BellKind::PhiMinus, 0.6, gamma), 200);
    EXPECT_LE(r.filters.front().r, prev + 1.0 / 199 + 1e-12) << gamma;
    prev = r.filters.front().r;
  }
}

TEST(Threads, EnvironmentOverride) {
  ::setenv("ESD_ADAPT_THREADS", "3", 1);
  EXPECT_EQ(thread_count(), 3u);
  ::setenv("ESD_ADAPT_THREADS", "0", 1);
  EXPECT_GE(thread_count(), 1u);
  ::unsetenv("ESD_ADAPT_THREADS");
}

TEST(Threads, ParallelForFillsEverySlotAndRethrows) {
  std::vector<int> out(100, 0);
  parallel_for(out.size(), [&](std::size_t i) { out[i] = static_cast<int>(i) * 2; }, 4);
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], static_cast<int>(i) * 2);
  EXPECT_THROW(parallel_for(
                   10, [](std::size_t i) {
                     if (i == 7) throw DomainError("seven");
                   },
                   3),
               DomainError);
}

}  // namespace
}  // namespace qadapt
