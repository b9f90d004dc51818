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

#include "rxreturn/mip.hpp"

namespace rxreturn::mip {
namespace {

using lp::kInf;
using lp::Relation;

// Pure binary program: min c'y s.t. rows; solved by enumerating 2^n points.
struct BinaryProgram {
  std::vector<double> cost;
  std::vector<std::vector<double>> rows;
  std::vector<Relation> rel;
  std::vector<double> rhs;
};

double enumerate(const BinaryProgram& bp) {
  const std::size_t n = bp.cost.size();
  double best = kInf;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    for (std::size_t r = 0; r < bp.rows.size() && ok; ++r) {
      double a = 0.0;
      for (std::size_t j = 0; j < n; ++j) a += ((mask >> j) & 1u) ? bp.rows[r][j] : 0.0;
      if (bp.rel[r] == Relation::LessEqual) ok = a <= bp.rhs[r] + 1e-9;
      if (bp.rel[r] == Relation::GreaterEqual) ok = a >= bp.rhs[r] - 1e-9;
      if (bp.rel[r] == Relation::Equal) ok = std::abs(a - bp.rhs[r]) <= 1e-9;
    }
    if (!ok) continue;
    double v = 0.0;
    for (std::size_t j = 0; j < n; ++j) v += ((mask >> j) & 1u) ? bp.cost[j] : 0.0;
    best = std::min(best, v);
  }
  return best;
}

MixedProgram to_mip(const BinaryProgram& bp) {
  MixedProgram mp;
  for (double c : bp.cost) mp.binaries.push_back(mp.lp.add_variable(0.0, 1.0, c));
  for (std::size_t r = 0; r < bp.rows.size(); ++r) {
    std::vector<lp::Term> t;
    for (std::size_t j = 0; j < bp.cost.size(); ++j) t.push_back({j, bp.rows[r][j]});
    mp.lp.add_constraint(std::move(t), bp.rel[r], bp.rhs[r]);
  }
  return mp;
}

TEST(Mip, KnapsackMatchesEnumeration) {
  // max 10a + 13b + 7c + 8d  s.t.  4a + 6b + 3c + 5d <= 10
  BinaryProgram bp{{-10, -13, -7, -8}, {{4, 6, 3, 5}}, {Relation::LessEqual}, {10}};
  const auto sol = solve_mip(to_mip(bp));
  ASSERT_EQ(sol.status, MipStatus::Optimal);
  EXPECT_DOUBLE_EQ(enumerate(bp), -23.0);
  EXPECT_NEAR(sol.objective, -23.0, 1e-9);
  for (double v : sol.primal) EXPECT_TRUE(v == 0.0 || v == 1.0);
}

TEST(Mip, RandomBinaryProgramsMatchEnumeration) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coef(-9, 9);
  std::uniform_int_distribution<int> rel(0, 2);
  int feasible = 0;
  for (int trial = 0; trial < 150; ++trial) {
    BinaryProgram bp;
    const std::size_t n = 2 + trial % 9;
    const std::size_t m = 1 + trial % 3;
    for (std::size_t j = 0; j < n; ++j) bp.cost.push_back(coef(rng));
    for (std::size_t r = 0; r < m; ++r) {
      std::vector<double> row;
      for (std::size_t j = 0; j < n; ++j) row.push_back(coef(rng));
      bp.rows.push_back(row);
      const auto kind = rel(rng);
      bp.rel.push_back(kind == 2 ? Relation::LessEqual : static_cast<Relation>(kind));
      bp.rhs.push_back(coef(rng));
    }
    const double expected = enumerate(bp);
    const auto sol = solve_mip(to_mip(bp));
    if (!std::isfinite(expected)) {
      EXPECT_EQ(sol.status, MipStatus::Infeasible) << "trial " << trial;
      continue;
    }
    ++feasible;
    ASSERT_EQ(sol.status, MipStatus::Optimal) << "trial " << trial;
    EXPECT_NEAR(sol.objective, expected, 1e-8) << "trial " << trial;
    EXPECT_LE(sol.best_bound, sol.objective + 1e-9);
    EXPECT_LE(sol.max_duality_residual, 1e-8);
  }
  EXPECT_GT(feasible, 60);
}

TEST(Mip, MixedFacilityProblem) {
  // Two facilities (open cost 5 and 8, capacity 4 and 10) serving demand 6
  // at unit cost 1 and 0.5 respectively; unmet demand is not allowed.
  // Options: both open: 13 + 4*1 + ... best is open only B: 8 + 3 = 11.
  MixedProgram mp;
  const auto ya = mp.lp.add_variable(0.0, 1.0, 5.0);
  const auto yb = mp.lp.add_variable(0.0, 1.0, 8.0);
  const auto xa = mp.lp.add_variable(0.0, kInf, 1.0);
  const auto xb = mp.lp.add_variable(0.0, kInf, 0.5);
  mp.binaries = {ya, yb};
  mp.lp.add_constraint({{xa, 1.0}, {ya, -4.0}}, Relation::LessEqual, 0.0);
  mp.lp.add_constraint({{xb, 1.0}, {yb, -10.0}}, Relation::LessEqual, 0.0);
  mp.lp.add_constraint({{xa, 1.0}, {xb, 1.0}}, Relation::GreaterEqual, 6.0);
  const auto sol = solve_mip(mp);
  ASSERT_EQ(sol.status, MipStatus::Optimal);
  EXPECT_NEAR(sol.objective, 11.0, 1e-9);
  EXPECT_EQ(sol.primal[ya], 0.0);
  EXPECT_EQ(sol.primal[yb], 1.0);
  // Best-first search never pops a node below an earlier popped bound.
  for (std::size_t k = 1; k < sol.bound_trace.size(); ++k) {
    EXPECT_GE(sol.bound_trace[k], sol.bound_trace[k - 1] - 1e-9);
  }
}

TEST(Mip, InfeasibleAndUnbounded) {
  MixedProgram inf;
  const auto y = inf.lp.add_variable(0.0, 1.0, 1.0);
  inf.binaries = {y};
  inf.lp.add_constraint({{y, 2.0}}, Relation::Equal, 1.0);  // y = 0.5 only
  EXPECT_EQ(solve_mip(inf).status, MipStatus::Infeasible);

  MixedProgram unb;
  const auto z = unb.lp.add_variable(0.0, 1.0, 0.0);
  const auto x = unb.lp.add_variable(0.0, kInf, -1.0);
  unb.binaries = {z};
  unb.lp.add_constraint({{x, 1.0}, {z, -1.0}}, Relation::GreaterEqual, 0.0);
  EXPECT_EQ(solve_mip(unb).status, MipStatus::Unbounded);
}

TEST(Mip, NodeLimitIsReported) {
  BinaryProgram bp{{-3, -4, -5, -6, -7, -8, -9, -10},
                   {{2.1, 3.1, 4.1, 5.1, 6.1, 7.1, 8.1, 9.1}},
                   {Relation::LessEqual},
                   {20}};
  MipOptions opt;
  opt.node_limit = 2;
  EXPECT_EQ(solve_mip(to_mip(bp), opt).status, MipStatus::NodeLimitExceeded);
}

TEST(Mip, RejectsNonBinaryBounds) {
  MixedProgram mp;
  const auto y = mp.lp.add_variable(0.0, 2.0, 1.0);
  mp.binaries = {y};
  EXPECT_THROW(solve_mip(mp), Error);
}

}  // namespace
}  // namespace rxreturn::mip
