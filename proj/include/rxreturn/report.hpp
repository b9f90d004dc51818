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

// Solve reports, their JSON/CSV forms, and an audit that re-checks a written
// report against raw instance data.

#ifndef RXRETURN_REPORT_HPP_
#define RXRETURN_REPORT_HPP_

#include <atomic>
#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "rxreturn/benders.hpp"
#include "rxreturn/io.hpp"
#include "rxreturn/model.hpp"

namespace rxreturn {

struct CostBreakdown {
  double fixed = 0.0;
  double incentive = 0.0;
  double penalty = 0.0;
  double total = 0.0;
};

struct IncentiveEntry {
  std::size_t site = 0, zone = 0, profile = 0;
  double incentive = 0.0;  // per prescription
  double pills = 0.0;
};

struct QuantityEntry {
  std::size_t zone = 0, profile = 0;
  double target = 0.0;
  double returned = 0.0;
  double unreturned = 0.0;
};

struct SolveReport {
  ScenarioParams scenario;
  IncentiveLevelPolicy policy;
  Termination termination = Termination::IterationLimit;
  std::size_t iterations = 0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double gap = 0.0;
  std::vector<std::size_t> opened;  // site indices
  std::vector<IncentiveEntry> incentives;
  std::vector<QuantityEntry> quantities;
  CostBreakdown cost;
  std::vector<BendersIteration> trace;
  double wall_seconds = 0.0;

  bool converged() const { return termination != Termination::IterationLimit; }
};

inline SolveReport make_report(const Instance& inst, const DerivedParams& dp,
                               const BendersResult& res) {
  const std::size_t ni = inst.num_sites(), nj = inst.num_zones(), np = inst.num_profiles();
  const double s = dp.pills_per_prescription;
  SolveReport rep;
  rep.scenario = inst.scenario;
  rep.policy = inst.level_policy;
  rep.termination = res.termination;
  rep.iterations = res.trace.size();
  rep.lower_bound = res.lower_bound;
  rep.upper_bound = res.upper_bound;
  rep.gap = res.gap;
  rep.trace = res.trace;
  rep.wall_seconds = res.wall_seconds;

  const auto& dec = res.incumbent;
  const auto& sub = res.incumbent_sub;
  for (std::size_t i = 0; i < ni; ++i) {
    if (dec.open[i]) {
      rep.opened.push_back(i);
      rep.cost.fixed += inst.sites[i].fixed_cost;
    }
  }
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      for (std::size_t p = 0; p < np; ++p) {
        const double x = sub.returned(i, j, p);
        if (x <= 0.0) continue;
        const double r = dec.incentive(i, j, p);
        rep.incentives.push_back({i, j, p, r, x});
        rep.cost.incentive += x * r / s;
      }
    }
  }
  for (std::size_t j = 0; j < nj; ++j) {
    for (std::size_t p = 0; p < np; ++p) {
      QuantityEntry q{j, p, dp.target(j, p), 0.0, sub.unreturned(j, p)};
      for (std::size_t i = 0; i < ni; ++i) q.returned += sub.returned(i, j, p);
      rep.quantities.push_back(q);
      rep.cost.penalty += dp.per_pill_penalty * q.unreturned;
    }
  }
  rep.cost.total = rep.cost.fixed + rep.cost.incentive + rep.cost.penalty;
  return rep;
}

// Derives parameters, runs the decomposition and summarizes the incumbent.
inline SolveReport solve(const Instance& inst, const BendersOptions& opt = {}) {
  const auto dp = derive_params(inst);
  return make_report(inst, dp, benders_solve(inst, dp, opt));
}

inline nlohmann::json trace_record(const BendersIteration& it) {
  return {{"iter", it.iter},
          {"lb", it.lower_bound},
          {"ub", it.upper_bound},
          {"gap", it.gap},
          {"opened_count", it.opened_count},
          {"cut_constant", it.cut_constant}};
}

inline nlohmann::json to_json(const Instance& inst, const SolveReport& rep) {
  using nlohmann::json;
  json opened = json::array();
  for (auto i : rep.opened) {
    opened.push_back({{"id", inst.sites[i].id}, {"name", inst.sites[i].name}});
  }
  json incentives = json::array();
  for (const auto& e : rep.incentives) {
    incentives.push_back({{"site", inst.sites[e.site].id},
                          {"zone", inst.zones[e.zone].id},
                          {"profile", inst.profiles[e.profile].id},
                          {"incentive", e.incentive},
                          {"pills", e.pills}});
  }
  json quantities = json::array();
  for (const auto& q : rep.quantities) {
    quantities.push_back({{"zone", inst.zones[q.zone].id},
                          {"profile", inst.profiles[q.profile].id},
                          {"target", q.target},
                          {"returned", q.returned},
                          {"unreturned", q.unreturned}});
  }
  json trace = json::array();
  for (const auto& it : rep.trace) trace.push_back(trace_record(it));
  return {{"scenario", scenario_to_json(rep.scenario, rep.policy)},
          {"status", rep.converged() ? "optimal" : "iteration_limit"},
          {"termination", to_string(rep.termination)},
          {"iterations", rep.iterations},
          {"lower_bound", rep.lower_bound},
          {"upper_bound", rep.upper_bound},
          {"gap", rep.gap},
          {"opened_sites", opened},
          {"cost",
           {{"fixed", rep.cost.fixed},
            {"incentive", rep.cost.incentive},
            {"penalty", rep.cost.penalty},
            {"total", rep.cost.total}}},
          {"incentives", incentives},
          {"quantities", quantities},
          {"trace", trace},
          {"wall_seconds", rep.wall_seconds}};
}

// Assignment edges for external mapping: one row per (site, zone, profile)
// with returned pills.
inline void write_assignments_csv(std::ostream& out, const Instance& inst,
                                  const SolveReport& rep) {
  using detail::format_number;
  out << "site_id,zone_id,profile_id,pills,incentive\n";
  for (const auto& e : rep.incentives) {
    out << csv::quote(inst.sites[e.site].id) << ',' << csv::quote(inst.zones[e.zone].id) << ','
        << csv::quote(inst.profiles[e.profile].id) << ',' << format_number(e.pills) << ','
        << format_number(e.incentive) << '\n';
  }
}

inline void write_quantities_csv(std::ostream& out, const Instance& inst,
                                 const SolveReport& rep) {
  using detail::format_number;
  out << "zone_id,profile_id,target,returned,unreturned\n";
  for (const auto& q : rep.quantities) {
    out << csv::quote(inst.zones[q.zone].id) << ',' << csv::quote(inst.profiles[q.profile].id)
        << ',' << format_number(q.target) << ',' << format_number(q.returned) << ','
        << format_number(q.unreturned) << '\n';
  }
}

// One JSON object per line and iteration.
inline void write_trace_jsonl(std::ostream& out, const SolveReport& rep) {
  for (const auto& it : rep.trace) out << trace_record(it).dump() << '\n';
}

// Re-checks a report (as written by to_json) against instance data loaded
// from files: reachability, assignment to open kiosks, capacities, targets,
// incentive acceptance and tightness, and the cost arithmetic. Returns one
// message per violation.
inline std::vector<std::string> audit_report(const Instance& raw, const nlohmann::json& report,
                                             double tol = 1e-6) {
  std::vector<std::string> issues;
  auto fail = [&](std::string msg) { issues.push_back(std::move(msg)); };

  const auto echo = parse_scenario(report.at("scenario"));
  if (!(echo.policy == raw.level_policy)) fail("report incentive levels differ from instance");
  const Instance inst = with_scenario(raw, echo.scenario);
  const std::size_t ni = inst.num_sites(), nj = inst.num_zones(), np = inst.num_profiles();
  const double radius = inst.level_policy.max_distance[inst.level_index()];
  const double s = inst.scenario.pills_per_prescription;
  const double m = inst.scenario.penalty_per_prescription / s;

  std::map<std::string, std::size_t> site_ix, zone_ix, profile_ix;
  for (std::size_t i = 0; i < ni; ++i) site_ix[inst.sites[i].id] = i;
  for (std::size_t j = 0; j < nj; ++j) zone_ix[inst.zones[j].id] = j;
  for (std::size_t p = 0; p < np; ++p) profile_ix[inst.profiles[p].id] = p;
  auto find = [&](const std::map<std::string, std::size_t>& ix, const std::string& id,
                  const char* what) -> std::size_t {
    auto it = ix.find(id);
    if (it == ix.end()) {
      fail(std::string("unknown ") + what + " '" + id + "'");
      return static_cast<std::size_t>(-1);
    }
    return it->second;
  };

  std::vector<unsigned char> open(ni, 0);
  double fixed = 0.0;
  for (const auto& o : report.at("opened_sites")) {
    const auto i = find(site_ix, o.at("id").get<std::string>(), "site");
    if (i >= ni) continue;
    open[i] = 1;
    fixed += inst.sites[i].fixed_cost;
  }

  std::vector<double> load(ni, 0.0);
  Grid2<double> returned(nj, np, 0.0);
  double incentive_cost = 0.0;
  for (const auto& e : report.at("incentives")) {
    const auto i = find(site_ix, e.at("site").get<std::string>(), "site");
    const auto j = find(zone_ix, e.at("zone").get<std::string>(), "zone");
    const auto p = find(profile_ix, e.at("profile").get<std::string>(), "profile");
    if (i >= ni || j >= nj || p >= np) continue;
    const double x = e.at("pills").get<double>();
    const double r = e.at("incentive").get<double>();
    const std::string where = "(" + inst.sites[i].id + ", " + inst.zones[j].id + ", " +
                              inst.profiles[p].id + ")";
    if (x < 0.0) fail("negative returned quantity at " + where);
    if (x > 0.0) {
      // w = 1 on this triple.
      if (!open[i]) fail("pills returned to closed kiosk at " + where);
      if (!(inst.distance(i, j) <= radius)) fail("kiosk out of reach at " + where);
      if (x > inst.sites[i].capacity * (1.0 + tol)) fail("x exceeds k w at " + where);
      const double floor = inst.scenario.mileage_rate * inst.distance(i, j) +
                           inst.profiles[p].reservation_incentive[inst.level_index()];
      if (r < floor - 1e-9) fail("incentive below c + a at " + where);
      if (std::abs(r - floor) > 1e-9) fail("incentive not tight at " + where);
    }
    load[i] += x;
    returned(j, p) += x;
    incentive_cost += x * r / s;
  }
  for (std::size_t i = 0; i < ni; ++i) {
    const double cap = open[i] ? inst.sites[i].capacity : 0.0;
    if (load[i] > cap + tol * (1.0 + cap)) fail("capacity exceeded at site " + inst.sites[i].id);
  }

  double penalty = 0.0;
  Grid2<unsigned char> seen(nj, np, 0);
  for (const auto& q : report.at("quantities")) {
    const auto j = find(zone_ix, q.at("zone").get<std::string>(), "zone");
    const auto p = find(profile_ix, q.at("profile").get<std::string>(), "profile");
    if (j >= nj || p >= np) continue;
    seen(j, p) = 1;
    const double b = q.at("unreturned").get<double>();
    if (b < -tol) fail("negative unreturned quantity");
    penalty += m * b;
    const double target = inst.scenario.theta * inst.unused_quantity(j, p);
    if (returned(j, p) + b < target - tol * (1.0 + target)) {
      fail("target not met for (" + inst.zones[j].id + ", " + inst.profiles[p].id + ")");
    }
  }
  for (std::size_t j = 0; j < nj; ++j) {
    for (std::size_t p = 0; p < np; ++p) {
      const double target = inst.scenario.theta * inst.unused_quantity(j, p);
      if (!seen(j, p) && returned(j, p) < target - tol * (1.0 + target)) {
        fail("no quantity record for (" + inst.zones[j].id + ", " + inst.profiles[p].id + ")");
      }
    }
  }

  const auto& cost = report.at("cost");
  const double total = cost.at("total").get<double>();
  auto close = [&](double a, double b) { return std::abs(a - b) <= tol * (1.0 + std::abs(b)); };
  if (!close(cost.at("fixed").get<double>(), fixed)) fail("fixed cost does not match open kiosks");
  if (!close(cost.at("incentive").get<double>(), incentive_cost))
    fail("incentive cost does not match the schedule");
  if (!close(cost.at("penalty").get<double>(), penalty))
    fail("penalty cost does not match unreturned quantities");
  if (!close(cost.at("fixed").get<double>() + cost.at("incentive").get<double>() +
                 cost.at("penalty").get<double>(),
             total)) {
    fail("cost components do not sum to the total");
  }
  return issues;
}

struct SweepCell {
  double theta = 0.0;
  std::string level;
  bool ok = false;
  std::string error;
  CostBreakdown cost;
  std::size_t opened_count = 0;
  bool converged = false;
  double gap = 0.0;
  std::size_t iterations = 0;
};

struct SweepReport {
  std::vector<SweepCell> cells;  // theta-major, in the order requested
};

inline SweepCell summarize(double theta, const std::string& level, const SolveReport& rep) {
  SweepCell cell;
  cell.theta = theta;
  cell.level = level;
  cell.ok = true;
  cell.cost = rep.cost;
  cell.opened_count = rep.opened.size();
  cell.converged = rep.converged();
  cell.gap = rep.gap;
  cell.iterations = rep.iterations;
  return cell;
}

// One solve per (theta, level) cell on up to `workers` threads. A failing
// cell is recorded and the sweep continues.
inline SweepReport run_sweep(const Instance& inst, const std::vector<double>& thetas,
                             const std::vector<std::string>& levels,
                             const BendersOptions& opt = {}, std::size_t workers = 1) {
  SweepReport out;
  for (double t : thetas) {
    for (const auto& l : levels) {
      SweepCell c;
      c.theta = t;
      c.level = l;
      out.cells.push_back(c);
    }
  }
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t k = next++; k < out.cells.size(); k = next++) {
      auto& cell = out.cells[k];
      try {
        ScenarioParams sc = inst.scenario;
        sc.theta = cell.theta;
        sc.incentive_level = cell.level;
        const auto scenario_inst = with_scenario(inst, sc);
        cell = summarize(cell.theta, cell.level, solve(scenario_inst, opt));
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
      }
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, out.cells.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

inline void write_sweep_csv(std::ostream& out, const SweepReport& sweep) {
  using detail::format_number;
  out << "theta,level,fixed,incentive,penalty,total,opened_count,status\n";
  for (const auto& c : sweep.cells) {
    out << format_number(c.theta) << ',' << csv::quote(c.level) << ',';
    if (c.ok) {
      out << format_number(c.cost.fixed) << ',' << format_number(c.cost.incentive) << ','
          << format_number(c.cost.penalty) << ',' << format_number(c.cost.total) << ','
          << c.opened_count << ',' << (c.converged ? "optimal" : "iteration_limit") << '\n';
    } else {
      out << ",,,,," << csv::quote("error: " + c.error) << '\n';
    }
  }
}

}  // namespace rxreturn

#endif  // RXRETURN_REPORT_HPP_
