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

// Exact reference solver for small instances.
//
// With incentives fixed at c_ij + a_p (no returning user needs more, and any
// surplus only adds cost), the model for a fixed set S of open kiosks is a
// transportation problem: ship theta Q_jp pills from each (zone, profile) to
// reachable open kiosks at unit cost (c_ij + a_p) / s, subject to kiosk
// capacities, or leave them unreturned at the per-pill penalty. The oracle
// enumerates every S and solves each transportation problem as a min-cost
// flow. It shares no code path with the decomposition or the LP engine.

#ifndef RXRETURN_ORACLE_HPP_
#define RXRETURN_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "rxreturn/error.hpp"
#include "rxreturn/model.hpp"

namespace rxreturn {

// Successive shortest paths with Dijkstra on reduced costs. Arc costs must
// be non-negative; capacities are real-valued.
class MinCostFlow {
 public:
  explicit MinCostFlow(std::size_t nodes) : graph_(nodes) {}

  void add_arc(std::size_t from, std::size_t to, double capacity, double cost) {
    graph_[from].push_back({to, graph_[to].size(), capacity, cost});
    graph_[to].push_back({from, graph_[from].size() - 1, 0.0, -cost});
  }

  // Sends `amount` from source to sink at minimum cost. Returns the cost, or
  // +inf if the network cannot carry `amount`.
  double solve(std::size_t source, std::size_t sink, double amount) {
    const double inf = std::numeric_limits<double>::infinity();
    const std::size_t n = graph_.size();
    const double eps = 1e-9 * std::max(1.0, amount);
    std::vector<double> potential(n, 0.0), dist(n);
    std::vector<std::size_t> prev_node(n), prev_arc(n);
    double sent = 0.0, cost = 0.0;
    while (amount - sent > eps) {
      std::fill(dist.begin(), dist.end(), inf);
      dist[source] = 0.0;
      using Item = std::pair<double, std::size_t>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      heap.push({0.0, source});
      while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[v]) continue;
        for (std::size_t k = 0; k < graph_[v].size(); ++k) {
          const Arc& a = graph_[v][k];
          if (a.capacity <= eps) continue;
          // Reduced costs are >= 0 up to rounding; clamp keeps Dijkstra valid.
          const double rc = std::max(0.0, a.cost + potential[v] - potential[a.to]);
          if (dist[v] + rc < dist[a.to]) {
            dist[a.to] = dist[v] + rc;
            prev_node[a.to] = v;
            prev_arc[a.to] = k;
            heap.push({dist[a.to], a.to});
          }
        }
      }
      if (!std::isfinite(dist[sink])) return inf;
      for (std::size_t v = 0; v < n; ++v) {
        if (std::isfinite(dist[v])) potential[v] += dist[v];
      }
      double push = amount - sent;
      for (std::size_t v = sink; v != source; v = prev_node[v]) {
        push = std::min(push, graph_[prev_node[v]][prev_arc[v]].capacity);
      }
      for (std::size_t v = sink; v != source; v = prev_node[v]) {
        Arc& a = graph_[prev_node[v]][prev_arc[v]];
        a.capacity -= push;
        graph_[v][a.rev].capacity += push;
        cost += push * a.cost;
      }
      sent += push;
    }
    return cost;
  }

 private:
  struct Arc {
    std::size_t to;
    std::size_t rev;
    double capacity;
    double cost;
  };
  std::vector<std::vector<Arc>> graph_;
};

// Transportation optimum (incentive + penalty, no fixed cost) for the kiosks
// marked open.
inline double transportation_cost(const Instance& inst, const DerivedParams& dp,
                                  const std::vector<unsigned char>& open) {
  const std::size_t ni = inst.num_sites(), nj = inst.num_zones(), np = inst.num_profiles();
  const double s = dp.pills_per_prescription;
  // Nodes: source, (j, p) demand nodes, sites, unreturned sink, sink.
  const std::size_t source = 0;
  const std::size_t first_demand = 1;
  const std::size_t first_site = first_demand + nj * np;
  const std::size_t sink = first_site + ni;
  MinCostFlow flow(sink + 1);
  double total = 0.0;
  for (std::size_t j = 0; j < nj; ++j) {
    for (std::size_t p = 0; p < np; ++p) {
      const double demand = dp.target(j, p);
      if (demand <= 0.0) continue;
      const std::size_t node = first_demand + j * np + p;
      total += demand;
      flow.add_arc(source, node, demand, 0.0);
      flow.add_arc(node, sink, demand, dp.per_pill_penalty);
      for (std::size_t i = 0; i < ni; ++i) {
        if (open[i] && dp.is_reachable(i, j, p)) {
          flow.add_arc(node, first_site + i, demand, dp.min_incentive(i, j, p) / s);
        }
      }
    }
  }
  for (std::size_t i = 0; i < ni; ++i) {
    if (open[i]) flow.add_arc(first_site + i, sink, inst.sites[i].capacity, 0.0);
  }
  if (total <= 0.0) return 0.0;
  return flow.solve(source, sink, total);
}

struct OracleResult {
  std::vector<unsigned char> best_open;
  double objective = std::numeric_limits<double>::infinity();
  // (subset bitmask over all sites, objective) per subset, when requested.
  // Logging disables the reachability reduction so every subset appears.
  std::vector<std::pair<std::uint32_t, double>> subset_log;
};

struct OracleOptions {
  std::size_t max_sites = 20;
  bool keep_log = false;
};

inline OracleResult oracle_solve(const Instance& inst, const DerivedParams& dp,
                                 const OracleOptions& opt = {}) {
  const std::size_t ni = inst.num_sites();
  if (ni > opt.max_sites) {
    throw Error(ErrorCode::TooManySites, std::to_string(ni) + " sites exceed the enumeration guard of " +
                                             std::to_string(opt.max_sites));
  }
  // A kiosk that reaches no (zone, profile) with a positive target only adds
  // fixed cost, so it stays closed in some optimum and is not enumerated.
  std::vector<std::size_t> useful;
  for (std::size_t i = 0; i < ni; ++i) {
    bool reaches = false;
    for (std::size_t j = 0; j < inst.num_zones() && !reaches; ++j) {
      for (std::size_t p = 0; p < inst.num_profiles() && !reaches; ++p) {
        reaches = dp.is_reachable(i, j, p) && dp.target(j, p) > 0.0;
      }
    }
    if (reaches || opt.keep_log) useful.push_back(i);
  }

  OracleResult out;
  std::vector<unsigned char> open(ni, 0);
  const std::uint32_t subsets = std::uint32_t{1} << useful.size();
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    double fixed = 0.0;
    for (std::size_t b = 0; b < useful.size(); ++b) {
      const std::size_t i = useful[b];
      open[i] = (mask >> b) & 1u;
      if (open[i]) fixed += inst.sites[i].fixed_cost;
    }
    if (fixed >= out.objective && !opt.keep_log) continue;
    const double value = fixed + transportation_cost(inst, dp, open);
    if (opt.keep_log) out.subset_log.emplace_back(mask, value);
    if (value < out.objective) {
      out.objective = value;
      out.best_open = open;
    }
  }
  return out;
}

}  // namespace rxreturn

#endif  // RXRETURN_ORACLE_HPP_
