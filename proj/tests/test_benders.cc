// Copyright 2026 The rxreturn Authors.
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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "rxreturn/benders.hpp"
#include "rxreturn/generate.hpp"
#include "rxreturn/oracle.hpp"
#include "test_support.hpp"

namespace rxreturn {
namespace {

Instance random_instance(std::uint64_t seed, std::size_t ni, std::size_t nj, std::size_t np) {
  GeneratorConfig cfg;
  cfg.seed = seed;
  cfg.sites = ni;
  cfg.zones = nj;
  cfg.profiles = np;
  cfg.region_miles = 10.0;
  auto inst = generate_instance(cfg);
  SeededDraws draw(seed ^ 0x9e3779b97f4a7c15ull);
  auto sc = inst.scenario;
  sc.theta = 0.25 + 0.75 * draw.unit();
  sc.incentive_level = inst.level_policy.levels[draw.integer(0, 2)];
  return with_scenario(inst, sc);
}

FirstStageDecision random_decision(const Instance& inst, const DerivedParams& dp,
                                   std::mt19937_64& rng) {
  auto dec = initial_decision(inst, dp);
  for (auto& o : dec.open) o = rng() % 2;
  return dec;
}

// Row-indexed dual vector of the literal subproblem LP.
std::vector<double> dual_vector(const SubproblemModel& m, const SubproblemDuals& d,
                                const Instance& inst) {
  std::vector<double> y(m.lp.num_constraints(), 0.0);
  for (std::size_t i = 0; i < inst.num_sites(); ++i) {
    y[m.capacity_row[i]] = d.gamma[i];
    for (std::size_t j = 0; j < inst.num_zones(); ++j) {
      for (std::size_t p = 0; p < inst.num_profiles(); ++p) {
        y[m.assign_row(i, j, p)] = d.alpha(i, j, p);
        y[m.link_row(i, j, p)] = d.beta(i, j, p);
        y[m.accept_row(i, j, p)] = d.phi(i, j, p);
      }
    }
  }
  for (std::size_t j = 0; j < inst.num_zones(); ++j) {
    for (std::size_t p = 0; p < inst.num_profiles(); ++p) y[m.target_row(j, p)] = d.delta(j, p);
  }
  return y;
}

void expect_dual_certificate(const Instance& inst, const DerivedParams& dp,
                             const FirstStageDecision& dec, const SubproblemSolution& sol) {
  const auto model = build_subproblem_lp(inst, dp, dec);
  const auto check = lp::check_dual(model.lp, dual_vector(model, sol.duals, inst));
  const double scale = 1.0 + std::abs(sol.objective);
  EXPECT_LE(check.max_sign_violation, 1e-9);
  EXPECT_LE(check.max_unbounded_reduced_cost, 1e-9);
  EXPECT_NEAR(check.objective, sol.objective, 1e-8 * scale);
  EXPECT_NEAR(sol.dual_objective, sol.objective, 1e-8 * scale);
}

TEST(Subproblem, SingleSiteClosedForm) {
  const auto inst = testing::load_fixture("t1");
  const auto dp = derive_params(inst);
  const auto dec = initial_decision(inst, dp);
  EXPECT_DOUBLE_EQ(dec.incentive(0, 0, 0), 0.5 * 4.0 + 10.0);
  for (auto form : {SubproblemForm::Transportation, SubproblemForm::Full}) {
    const auto sub = solve_subproblem(inst, dp, dec, form);
    ASSERT_TRUE(sub.optimal);
    EXPECT_NEAR(sub.objective, 10000.0 * 12.0 / 18.0, 1e-9);
    EXPECT_NEAR(sub.returned(0, 0, 0), 10000.0, 1e-9);
    // Any assignment level between x / k and 1 is optimal.
    EXPECT_GE(sub.assigned(0, 0, 0), 10000.0 / 30000.0 - 1e-12);
    EXPECT_LE(sub.assigned(0, 0, 0), 1.0 + 1e-12);
    EXPECT_NEAR(sub.unreturned(0, 0), 0.0, 1e-9);
  }
}

TEST(Subproblem, AllClosedPaysFullPenalty) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = random_instance(seed, 4, 3, 2);
    const auto dp = derive_params(inst);
    auto dec = initial_decision(inst, dp);
    std::fill(dec.open.begin(), dec.open.end(), 0);
    double expected = 0.0;
    for (std::size_t j = 0; j < inst.num_zones(); ++j) {
      for (std::size_t p = 0; p < inst.num_profiles(); ++p) {
        expected += dp.per_pill_penalty * inst.scenario.theta * inst.unused_quantity(j, p);
      }
    }
    for (auto form : {SubproblemForm::Transportation, SubproblemForm::Full}) {
      const auto sub = solve_subproblem(inst, dp, dec, form);
      ASSERT_TRUE(sub.optimal);
      EXPECT_NEAR(sub.objective, expected, 1e-12 * (1.0 + expected)) << "seed " << seed;
    }
  }
}

TEST(Subproblem, FormsAgreeAndDualsCertify) {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto inst = random_instance(seed, 2 + seed % 4, 1 + seed % 3, 1 + seed % 2);
    const auto dp = derive_params(inst);
    const auto dec = random_decision(inst, dp, rng);
    const auto reduced = solve_subproblem(inst, dp, dec, SubproblemForm::Transportation);
    const auto full = solve_subproblem(inst, dp, dec, SubproblemForm::Full);
    ASSERT_TRUE(reduced.optimal && full.optimal);
    EXPECT_EQ(reduced.form, SubproblemForm::Transportation);
    EXPECT_EQ(full.form, SubproblemForm::Full);
    EXPECT_NEAR(reduced.objective, full.objective, 1e-8 * (1.0 + std::abs(full.objective)))
        << "seed " << seed;
    expect_dual_certificate(inst, dp, dec, reduced);
    expect_dual_certificate(inst, dp, dec, full);
  }
}

TEST(Subproblem, TransportationMatchesMinCostFlow) {
  std::mt19937_64 rng(9);
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    const auto inst = random_instance(seed, 1 + seed % 7, 1 + seed % 4, 1 + seed % 3);
    const auto dp = derive_params(inst);
    const auto dec = random_decision(inst, dp, rng);
    const auto sub = solve_subproblem(inst, dp, dec);
    const double flow = transportation_cost(inst, dp, dec.open);
    EXPECT_NEAR(sub.objective, flow, 1e-8 * (1.0 + flow)) << "seed " << seed;
  }
}

TEST(Subproblem, LowIncentiveFallsBackToFullForm) {
  const auto inst = testing::load_fixture("t1");
  const auto dp = derive_params(inst);
  auto dec = initial_decision(inst, dp);
  dec.incentive(0, 0, 0) = 6.0;  // half of c + a
  const auto sub = solve_subproblem(inst, dp, dec);
  ASSERT_TRUE(sub.optimal);
  EXPECT_EQ(sub.form, SubproblemForm::Full);
  // The relaxed assignment can reach w = 1/2, which caps x at k / 2.
  EXPECT_LE(sub.assigned(0, 0, 0), 0.5 + 1e-9);
  expect_dual_certificate(inst, dp, dec, sub);
}

TEST(Cuts, TightAtGeneratorAndValidElsewhere) {
  std::mt19937_64 rng(13);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = random_instance(seed, 5, 3, 2);
    const auto dp = derive_params(inst);
    const auto dec = random_decision(inst, dp, rng);
    const auto sub = solve_subproblem(inst, dp, dec);
    const auto cut = build_cut(inst, dp, dec, sub);
    const double scale = 1.0 + std::abs(sub.objective);
    EXPECT_NEAR(cut.evaluate(dec.open), sub.objective, 1e-8 * scale);
    for (std::uint32_t mask = 0; mask < 32; ++mask) {
      auto other = initial_decision(inst, dp);
      for (std::size_t i = 0; i < 5; ++i) other.open[i] = (mask >> i) & 1u;
      const double value = solve_subproblem(inst, dp, other).objective;
      EXPECT_LE(cut.evaluate(other.open), value + 1e-7 * (1.0 + std::abs(value)))
          << "seed " << seed << " mask " << mask;
    }
  }
}

TEST(Cuts, RequireOptimalSubproblem) {
  const auto inst = testing::load_fixture("t1");
  const auto dp = derive_params(inst);
  SubproblemSolution bad;
  EXPECT_THROW(build_cut(inst, dp, initial_decision(inst, dp), bad), Error);
}

TEST(Benders, SingleSiteInstance) {
  const auto inst = testing::load_fixture("t1");
  const auto dp = derive_params(inst);
  const auto res = benders_solve(inst, dp);
  const double expected = 2000.0 + 10000.0 * (0.5 * 4.0 + 10.0) / 18.0;
  EXPECT_NEAR(res.upper_bound, expected, 1e-9);
  EXPECT_NEAR(expected, 8666.67, 0.005);
  EXPECT_TRUE(res.converged());
  EXPECT_EQ(res.incumbent.opened_count(), 1u);
}

TEST(Benders, ThetaZeroOpensNothing) {
  auto inst = testing::with_theta_level(testing::load_fixture("middlesex"), 0.0, "low");
  const auto res = benders_solve(inst, derive_params(inst));
  EXPECT_EQ(res.incumbent.opened_count(), 0u);
  EXPECT_DOUBLE_EQ(res.upper_bound, 0.0);
}

TEST(Benders, NoUnusedPillsOpensNothing) {
  auto inst = random_instance(3, 6, 3, 2);
  for (auto& q : inst.unused_quantity.flat()) q = 0.0;
  const auto res = benders_solve(inst, derive_params(inst));
  EXPECT_EQ(res.incumbent.opened_count(), 0u);
  EXPECT_DOUBLE_EQ(res.upper_bound, 0.0);
  EXPECT_TRUE(res.converged());
}

TEST(Benders, MatchesOracleAndBoundsBehave) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto inst = random_instance(seed, 1 + seed % 8, 1 + seed % 4, 1 + seed % 3);
    const auto dp = derive_params(inst);
    const auto res = benders_solve(inst, dp);
    const auto ref = oracle_solve(inst, dp);
    EXPECT_LE(testing::rel_diff(res.upper_bound, ref.objective), 1e-6) << "seed " << seed;
    EXPECT_TRUE(res.converged());
    for (std::size_t k = 1; k < res.trace.size(); ++k) {
      EXPECT_GE(res.trace[k].lower_bound, res.trace[k - 1].lower_bound);
      EXPECT_LE(res.trace[k].upper_bound, res.trace[k - 1].upper_bound);
    }
    for (const auto& it : res.trace) EXPECT_LE(std::abs(it.cut_tightness), 1e-7 * (1.0 + it.sub_objective));
  }
}

TEST(Benders, FullFormGivesSameOptimum) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto inst = random_instance(seed, 3, 2, 2);
    const auto dp = derive_params(inst);
    BendersOptions opt;
    opt.form = SubproblemForm::Full;
    const auto full = benders_solve(inst, dp, opt);
    const auto reduced = benders_solve(inst, dp);
    EXPECT_LE(testing::rel_diff(full.upper_bound, reduced.upper_bound), 1e-8) << "seed " << seed;
  }
}

TEST(Benders, IncentivesAreTight) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = random_instance(seed, 6, 3, 2);
    const auto dp = derive_params(inst);
    const auto res = benders_solve(inst, dp);
    for (std::size_t i = 0; i < inst.num_sites(); ++i) {
      for (std::size_t j = 0; j < inst.num_zones(); ++j) {
        for (std::size_t p = 0; p < inst.num_profiles(); ++p) {
          if (res.incumbent_sub.returned(i, j, p) <= 0.0) continue;
          EXPECT_TRUE(dp.is_reachable(i, j, p));
          EXPECT_TRUE(res.incumbent.open[i]);
          EXPECT_NEAR(res.incumbent.incentive(i, j, p),
                      0.5 * inst.distance(i, j) +
                          inst.profiles[p].reservation_incentive[inst.level_index()],
                      1e-9);
        }
      }
    }
  }
}

TEST(Benders, IterationLimitIsReported) {
  const auto inst = testing::with_theta_level(testing::load_fixture("middlesex"), 0.8, "medium");
  BendersOptions opt;
  opt.max_iter = 1;
  const auto res = benders_solve(inst, derive_params(inst), opt);
  EXPECT_EQ(res.termination, Termination::IterationLimit);
  EXPECT_EQ(res.trace.size(), 1u);
  EXPECT_GT(res.gap, 0.0);
}

TEST(Benders, RejectsNonPositiveEps) {
  const auto inst = testing::load_fixture("t1");
  BendersOptions opt;
  opt.eps = 0.0;
  EXPECT_THROW(benders_solve(inst, derive_params(inst), opt), Error);
}

TEST(Master, FirstIterationOpensEverything) {
  const auto inst = testing::load_fixture("middlesex");
  const auto dp = derive_params(inst);
  const auto dec = initial_decision(inst, dp);
  EXPECT_EQ(dec.opened_count(), inst.num_sites());
}

TEST(Master, IncentiveBoundsFollowAssignment) {
  const auto inst = testing::load_fixture("t1");
  const auto dp = derive_params(inst);
  const auto dec = initial_decision(inst, dp);
  const auto sub = solve_subproblem(inst, dp, dec);
  const std::vector<OptimalityCut> cuts{build_cut(inst, dp, dec, sub)};
  const auto master = solve_master(inst, dp, cuts, sub.assigned);
  EXPECT_DOUBLE_EQ(master.master_incentive(0, 0, 0), 12.0);
  // With the kiosk open its capacity is slack, so the first cut is flat in Y
  // and the master prefers saving the fixed cost.
  EXPECT_EQ(master.decision.open[0], 0);
  EXPECT_NEAR(master.objective, sub.objective, 1e-6);
}

}  // namespace
}  // namespace rxreturn
