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

// LP-based branch and bound for programs with binary variables.
// Node selection is best-bound (ties: creation order); branching picks the
// most fractional binary (ties: lowest variable index).

#ifndef RXRETURN_MIP_HPP_
#define RXRETURN_MIP_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "rxreturn/error.hpp"
#include "rxreturn/simplex.hpp"

namespace rxreturn::mip {

struct MixedProgram {
  lp::LinearProgram lp;
  std::vector<std::size_t> binaries;
};

enum class MipStatus { Optimal, Infeasible, Unbounded, NodeLimitExceeded };

inline const char* to_string(MipStatus s) {
  switch (s) {
    case MipStatus::Optimal: return "optimal";
    case MipStatus::Infeasible: return "infeasible";
    case MipStatus::Unbounded: return "unbounded";
    case MipStatus::NodeLimitExceeded: return "node_limit";
  }
  return "?";
}

struct MipOptions {
  double gap_tol = 1e-9;  // relative to max(1, |incumbent|)
  std::size_t node_limit = 1'000'000;
  double integrality_tol = 1e-6;
  lp::SimplexOptions simplex;
};

struct MipSolution {
  MipStatus status = MipStatus::Infeasible;
  std::vector<double> primal;  // binaries rounded to exactly 0 or 1
  double objective = lp::kInf;
  double best_bound = -lp::kInf;
  double gap = lp::kInf;
  std::size_t nodes = 0;
  // Bound of each node as it was taken off the queue.
  std::vector<double> bound_trace;
  // max |primal - dual| / (1 + |primal|) over every node LP solved to optimality.
  double max_duality_residual = 0.0;
};

namespace detail {

struct Node {
  double bound;
  std::uint64_t id;
  std::vector<std::pair<std::size_t, double>> fixings;
};

struct WorseNode {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

}  // namespace detail

inline MipSolution solve_mip(const MixedProgram& mp, const MipOptions& opt = {}) {
  std::vector<std::size_t> binaries = mp.binaries;
  std::sort(binaries.begin(), binaries.end());
  binaries.erase(std::unique(binaries.begin(), binaries.end()), binaries.end());
  for (auto j : binaries) {
    if (j >= mp.lp.num_variables()) {
      throw Error(ErrorCode::MalformedModel, "binary index out of range");
    }
    const double lo = mp.lp.lower(j), up = mp.lp.upper(j);
    if ((lo != 0.0 && lo != 1.0) || (up != 0.0 && up != 1.0)) {
      throw Error(ErrorCode::MalformedModel,
                  "binary variable " + std::to_string(j) + " must have bounds within [0, 1]");
    }
  }

  MipSolution out;
  std::priority_queue<detail::Node, std::vector<detail::Node>, detail::WorseNode> open;
  std::uint64_t next_id = 0;
  open.push({-lp::kInf, next_id++, {}});
  bool root = true;

  auto prune_level = [&]() {
    if (!std::isfinite(out.objective)) return lp::kInf;
    return out.objective - opt.gap_tol * std::max(1.0, std::abs(out.objective));
  };

  while (!open.empty()) {
    if (open.top().bound >= prune_level()) break;  // best-first: the rest is pruned too
    if (out.nodes >= opt.node_limit) {
      out.status = MipStatus::NodeLimitExceeded;
      out.best_bound = open.top().bound;
      out.gap = std::isfinite(out.objective)
                    ? (out.objective - out.best_bound) / std::max(1.0, std::abs(out.objective))
                    : lp::kInf;
      return out;
    }
    detail::Node node = open.top();
    open.pop();
    out.bound_trace.push_back(node.bound);
    ++out.nodes;

    lp::LinearProgram relax = mp.lp;
    for (auto [var, value] : node.fixings) relax.set_bounds(var, value, value);
    const auto sol = lp::solve_lp(relax, opt.simplex);

    if (sol.status == lp::LpStatus::Unbounded) {
      if (root) {
        out.status = MipStatus::Unbounded;
        return out;
      }
      continue;
    }
    root = false;
    if (sol.status == lp::LpStatus::Infeasible) continue;

    out.max_duality_residual =
        std::max(out.max_duality_residual,
                 std::abs(sol.objective - sol.dual_objective) / (1.0 + std::abs(sol.objective)));
    const double bound = std::max(node.bound, sol.objective);
    if (bound >= prune_level()) continue;

    std::size_t branch_var = mp.lp.num_variables();
    double worst = opt.integrality_tol;
    for (auto j : binaries) {
      const double frac = std::abs(sol.primal[j] - std::round(sol.primal[j]));
      if (frac > worst) {
        worst = frac;
        branch_var = j;
      }
    }

    if (branch_var == mp.lp.num_variables()) {
      out.objective = sol.objective;
      out.primal = sol.primal;
      for (auto j : binaries) out.primal[j] = std::round(out.primal[j]);
      continue;
    }

    for (double value : {0.0, 1.0}) {
      detail::Node child{bound, next_id++, node.fixings};
      child.fixings.emplace_back(branch_var, value);
      open.push(std::move(child));
    }
  }

  if (!std::isfinite(out.objective)) {
    out.status = MipStatus::Infeasible;
    return out;
  }
  out.status = MipStatus::Optimal;
  out.best_bound = open.empty() ? out.objective : std::min(open.top().bound, out.objective);
  out.gap = (out.objective - out.best_bound) / std::max(1.0, std::abs(out.objective));
  return out;
}

}  // namespace rxreturn::mip

#endif  // RXRETURN_MIP_HPP_
