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

// Domain model for the kiosk-location / return-incentive problem.
//
// Index sets:
//   sites    I  candidate pharmacy locations for a disposal kiosk
//   zones    J  zones the opioid users live in
//   profiles P  user profiles (gender, age band, opioid type)
//
// Quantities are in pills. Incentives and the penalty are quoted per
// prescription; `pills_per_prescription` converts them to per-pill terms.

#ifndef RXRETURN_MODEL_HPP_
#define RXRETURN_MODEL_HPP_

#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rxreturn/error.hpp"
#include "rxreturn/grid.hpp"

namespace rxreturn {

struct KioskSite {
  std::string id;
  std::string name;
  double fixed_cost = 0.0;  // currency per year
  double capacity = 0.0;    // pills
  std::optional<std::pair<double, double>> position;  // (lat, lon), export only

  bool operator==(const KioskSite&) const = default;
};

struct Zone {
  std::string id;
  std::string name;

  bool operator==(const Zone&) const = default;
};

struct Profile {
  std::string id;
  std::string descriptor;
  // Minimum reservation incentive per prescription, one entry per incentive
  // level in IncentiveLevelPolicy::levels order.
  std::vector<double> reservation_incentive;

  bool operator==(const Profile&) const = default;
};

// Incentive levels ordered from lowest to highest, each with the maximum
// distance (miles) a user will travel when offered that level.
struct IncentiveLevelPolicy {
  std::vector<std::string> levels;
  std::vector<double> max_distance;

  std::optional<std::size_t> find(const std::string& level) const {
    for (std::size_t k = 0; k < levels.size(); ++k) {
      if (levels[k] == level) return k;
    }
    return std::nullopt;
  }

  bool operator==(const IncentiveLevelPolicy&) const = default;
};

struct ScenarioParams {
  double theta = 1.0;  // fraction of unused pills targeted, in [0, 1]
  std::string incentive_level = "low";
  double penalty_per_prescription = 12.0;
  double pills_per_prescription = 18.0;
  double mileage_rate = 0.5;  // currency per mile

  bool operator==(const ScenarioParams&) const = default;
};

struct Instance {
  std::vector<KioskSite> sites;
  std::vector<Zone> zones;
  std::vector<Profile> profiles;
  Grid2<double> unused_quantity;  // (zone, profile) -> pills
  Grid2<double> distance;         // (site, zone) -> miles, one way
  IncentiveLevelPolicy level_policy;
  ScenarioParams scenario;

  std::size_t num_sites() const noexcept { return sites.size(); }
  std::size_t num_zones() const noexcept { return zones.size(); }
  std::size_t num_profiles() const noexcept { return profiles.size(); }

  std::size_t level_index() const {
    auto k = level_policy.find(scenario.incentive_level);
    if (!k) {
      throw Error(ErrorCode::InvalidValue,
                  "unknown incentive level '" + scenario.incentive_level + "'");
    }
    return *k;
  }

  bool operator==(const Instance&) const = default;
};

// Parameters computed once from an Instance.
struct DerivedParams {
  Grid2<double> travel_cost;             // (site, zone) -> c_ij
  Grid3<unsigned char> reachable;        // (site, zone, profile) -> A_ijp
  double per_pill_penalty = 0.0;         // M / pills_per_prescription
  std::vector<double> reservation;       // profile -> a_p at the active level
  Grid2<double> target;                  // (zone, profile) -> theta * Q_jp
  double pills_per_prescription = 18.0;

  bool is_reachable(std::size_t i, std::size_t j, std::size_t p) const {
    return reachable(i, j, p) != 0;
  }
  // Lowest incentive per prescription a user accepts for the (i, j, p) trip.
  double min_incentive(std::size_t i, std::size_t j, std::size_t p) const {
    return travel_cost(i, j) + reservation[p];
  }
};

namespace detail {

inline void require_unique(const std::vector<std::string>& ids,
                           const char* what) {
  std::set<std::string> seen;
  for (const auto& id : ids) {
    if (id.empty()) {
      throw Error(ErrorCode::InvalidValue, std::string("empty ") + what + " id");
    }
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::DuplicateId,
                  std::string("duplicate ") + what + " id '" + id + "'");
    }
  }
}

inline void require_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::InvalidValue, what + " is not finite");
  }
}

inline void require_nonnegative(double v, const std::string& what) {
  require_finite(v, what);
  if (v < 0.0) {
    throw Error(ErrorCode::NegativeValue,
                what + " is negative (" + std::to_string(v) + ")");
  }
}

}  // namespace detail

inline void validate_policy(const IncentiveLevelPolicy& policy) {
  if (policy.levels.empty()) {
    throw Error(ErrorCode::InvalidValue, "no incentive levels declared");
  }
  if (policy.levels.size() != policy.max_distance.size()) {
    throw Error(ErrorCode::InvalidValue,
                "incentive levels and max distances differ in length");
  }
  detail::require_unique(policy.levels, "incentive level");
  for (std::size_t k = 0; k < policy.levels.size(); ++k) {
    detail::require_nonnegative(policy.max_distance[k],
                                "max_distance[" + policy.levels[k] + "]");
    if (k > 0 && !(policy.max_distance[k] > policy.max_distance[k - 1])) {
      throw Error(ErrorCode::InvalidValue,
                  "max_distance must strictly increase across levels");
    }
  }
}

inline void validate_scenario(const ScenarioParams& s,
                              const IncentiveLevelPolicy& policy) {
  detail::require_finite(s.theta, "theta");
  // theta = 0 is accepted as the degenerate "no target" campaign.
  if (!(s.theta >= 0.0 && s.theta <= 1.0)) {
    throw Error(ErrorCode::InvalidValue, "theta must lie in [0, 1]");
  }
  detail::require_nonnegative(s.penalty_per_prescription,
                              "penalty_per_prescription");
  detail::require_finite(s.pills_per_prescription, "pills_per_prescription");
  if (!(s.pills_per_prescription > 0.0)) {
    throw Error(ErrorCode::InvalidValue, "pills_per_prescription must be > 0");
  }
  detail::require_nonnegative(s.mileage_rate, "mileage_rate");
  if (!policy.find(s.incentive_level)) {
    throw Error(ErrorCode::InvalidValue,
                "incentive_level '" + s.incentive_level + "' is not declared");
  }
}

// Throws rxreturn::Error on the first violated invariant.
inline void validate(const Instance& inst) {
  std::vector<std::string> ids;
  for (const auto& s : inst.sites) ids.push_back(s.id);
  detail::require_unique(ids, "site");
  ids.clear();
  for (const auto& z : inst.zones) ids.push_back(z.id);
  detail::require_unique(ids, "zone");
  ids.clear();
  for (const auto& p : inst.profiles) ids.push_back(p.id);
  detail::require_unique(ids, "profile");

  validate_policy(inst.level_policy);
  validate_scenario(inst.scenario, inst.level_policy);

  for (const auto& s : inst.sites) {
    detail::require_nonnegative(s.fixed_cost, "fixed_cost of site " + s.id);
    detail::require_nonnegative(s.capacity, "capacity of site " + s.id);
    if (s.capacity == 0.0) {
      throw Error(ErrorCode::InvalidValue,
                  "capacity of site " + s.id + " must be > 0");
    }
  }

  const std::size_t levels = inst.level_policy.levels.size();
  for (const auto& p : inst.profiles) {
    if (p.reservation_incentive.size() != levels) {
      throw Error(ErrorCode::MissingColumn,
                  "profile " + p.id + " lacks a reservation incentive per level");
    }
    for (std::size_t k = 0; k < levels; ++k) {
      detail::require_nonnegative(p.reservation_incentive[k],
                                  "reservation incentive of profile " + p.id);
      if (k > 0 &&
          !(p.reservation_incentive[k] > p.reservation_incentive[k - 1])) {
        throw Error(ErrorCode::InvalidValue,
                    "reservation incentive of profile " + p.id +
                        " must strictly increase across levels");
      }
    }
  }

  if (inst.unused_quantity.rows() != inst.num_zones() ||
      inst.unused_quantity.cols() != inst.num_profiles()) {
    throw Error(ErrorCode::InvalidValue, "unused_quantity has wrong shape");
  }
  for (std::size_t j = 0; j < inst.num_zones(); ++j) {
    for (std::size_t p = 0; p < inst.num_profiles(); ++p) {
      detail::require_nonnegative(inst.unused_quantity(j, p),
                                  "quantity for (" + inst.zones[j].id + ", " +
                                      inst.profiles[p].id + ")");
    }
  }

  if (inst.distance.rows() != inst.num_sites() ||
      inst.distance.cols() != inst.num_zones()) {
    throw Error(ErrorCode::InvalidValue, "distance has wrong shape");
  }
  for (std::size_t i = 0; i < inst.num_sites(); ++i) {
    for (std::size_t j = 0; j < inst.num_zones(); ++j) {
      const double d = inst.distance(i, j);
      if (std::isnan(d)) {
        throw Error(ErrorCode::MissingColumn,
                    "no distance for (" + inst.sites[i].id + ", " +
                        inst.zones[j].id + ")");
      }
      detail::require_nonnegative(d, "distance (" + inst.sites[i].id + ", " +
                                         inst.zones[j].id + ")");
    }
  }
}

// Total unused quantity; the loader additionally requires it to be positive.
inline double total_unused(const Instance& inst) {
  double total = 0.0;
  for (double q : inst.unused_quantity.flat()) total += q;
  return total;
}

inline DerivedParams derive_params(const Instance& inst) {
  const std::size_t ni = inst.num_sites();
  const std::size_t nj = inst.num_zones();
  const std::size_t np = inst.num_profiles();
  const std::size_t level = inst.level_index();
  const double radius = inst.level_policy.max_distance[level];
  const auto& sc = inst.scenario;

  DerivedParams dp;
  dp.pills_per_prescription = sc.pills_per_prescription;
  dp.per_pill_penalty = sc.penalty_per_prescription / sc.pills_per_prescription;

  dp.travel_cost = Grid2<double>(ni, nj);
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      dp.travel_cost(i, j) = sc.mileage_rate * inst.distance(i, j);
    }
  }

  // Willingness radii depend on the level only, so A_ijp is constant in p.
  dp.reachable = Grid3<unsigned char>(ni, nj, np, 0);
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      const unsigned char a = inst.distance(i, j) <= radius ? 1 : 0;
      for (std::size_t p = 0; p < np; ++p) dp.reachable(i, j, p) = a;
    }
  }

  dp.reservation.resize(np);
  for (std::size_t p = 0; p < np; ++p) {
    dp.reservation[p] = inst.profiles[p].reservation_incentive[level];
  }

  dp.target = Grid2<double>(nj, np);
  for (std::size_t j = 0; j < nj; ++j) {
    for (std::size_t p = 0; p < np; ++p) {
      dp.target(j, p) = sc.theta * inst.unused_quantity(j, p);
    }
  }
  return dp;
}

// Returns a copy with the scenario replaced; the result is re-validated.
inline Instance with_scenario(Instance inst, ScenarioParams scenario) {
  inst.scenario = std::move(scenario);
  validate_scenario(inst.scenario, inst.level_policy);
  return inst;
}

}  // namespace rxreturn

#endif  // RXRETURN_MODEL_HPP_
