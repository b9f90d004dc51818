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

// Seeded synthetic instances.

#ifndef RXRETURN_GENERATE_HPP_
#define RXRETURN_GENERATE_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rxreturn/error.hpp"
#include "rxreturn/model.hpp"

namespace rxreturn {

struct GeneratorConfig {
  std::uint64_t seed = 42;
  std::size_t sites = 6;
  std::size_t zones = 3;
  std::size_t profiles = 2;
  double region_miles = 16.0;  // side of the square holding sites and zones
  double fixed_cost_min = 1000.0, fixed_cost_max = 3000.0;
  double capacity_min = 10000.0, capacity_max = 40000.0;
  // Quantities are drawn log-uniformly in [min, max].
  double quantity_min = 500.0, quantity_max = 20000.0;
  // Lowest-level reservation incentive; each higher level adds 1 to 3 in
  // steps of 0.5.
  double reserve_min = 4.0, reserve_max = 15.0;
  ScenarioParams scenario{0.5, "low", 12.0, 18.0, 0.5};
  IncentiveLevelPolicy policy{{"low", "medium", "high"}, {4.0, 8.0, 20.0}};
};

// Uniform draws with a fixed mapping from engine output, so a seed gives the
// same instance on every standard library.
class SeededDraws {
 public:
  explicit SeededDraws(std::uint64_t seed) : engine_(seed) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  // Integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

 private:
  std::mt19937_64 engine_;
};

inline Instance generate_instance(const GeneratorConfig& cfg) {
  if (cfg.sites == 0 || cfg.zones == 0 || cfg.profiles == 0) {
    throw Error(ErrorCode::InvalidValue, "generator sizes must be positive");
  }
  if (!(cfg.fixed_cost_min <= cfg.fixed_cost_max) || !(cfg.capacity_min <= cfg.capacity_max) ||
      !(0.0 < cfg.quantity_min && cfg.quantity_min <= cfg.quantity_max) ||
      !(0.0 <= cfg.reserve_min && cfg.reserve_min <= cfg.reserve_max) ||
      !(cfg.region_miles > 0.0)) {
    throw Error(ErrorCode::InvalidValue, "generator ranges must satisfy 0 <= min <= max");
  }
  validate_policy(cfg.policy);

  SeededDraws draw(cfg.seed);
  auto round_to = [](double v, double step) { return std::round(v / step) * step; };

  Instance inst;
  inst.level_policy = cfg.policy;
  inst.scenario = cfg.scenario;

  std::vector<std::pair<double, double>> site_xy, zone_xy;
  for (std::size_t i = 0; i < cfg.sites; ++i) {
    KioskSite s;
    s.id = "S" + std::to_string(i + 1);
    s.name = "Site " + std::to_string(i + 1);
    s.fixed_cost = std::round(draw.uniform(cfg.fixed_cost_min, cfg.fixed_cost_max));
    s.capacity = round_to(draw.uniform(cfg.capacity_min, cfg.capacity_max), 100.0);
    site_xy.emplace_back(draw.uniform(0, cfg.region_miles), draw.uniform(0, cfg.region_miles));
    inst.sites.push_back(std::move(s));
  }
  for (std::size_t j = 0; j < cfg.zones; ++j) {
    inst.zones.push_back({"Z" + std::to_string(j + 1), "Zone " + std::to_string(j + 1)});
    zone_xy.emplace_back(draw.uniform(0, cfg.region_miles), draw.uniform(0, cfg.region_miles));
  }
  const std::size_t nlevels = cfg.policy.levels.size();
  for (std::size_t p = 0; p < cfg.profiles; ++p) {
    Profile prof;
    prof.id = "P" + std::to_string(p + 1);
    prof.descriptor = "generated profile " + std::to_string(p + 1);
    double a = round_to(draw.uniform(cfg.reserve_min, cfg.reserve_max), 0.5);
    for (std::size_t k = 0; k < nlevels; ++k) {
      prof.reservation_incentive.push_back(a);
      a += 0.5 * static_cast<double>(draw.integer(2, 6));
    }
    inst.profiles.push_back(std::move(prof));
  }
  inst.unused_quantity = Grid2<double>(cfg.zones, cfg.profiles, 0.0);
  for (std::size_t j = 0; j < cfg.zones; ++j) {
    for (std::size_t p = 0; p < cfg.profiles; ++p) {
      // Whole prescriptions' worth of leftover pills, like the county data.
      inst.unused_quantity(j, p) =
          std::max(6.0, round_to(draw.log_uniform(cfg.quantity_min, cfg.quantity_max), 6.0));
    }
  }
  inst.distance = Grid2<double>(cfg.sites, cfg.zones, 0.0);
  for (std::size_t i = 0; i < cfg.sites; ++i) {
    for (std::size_t j = 0; j < cfg.zones; ++j) {
      const double dx = site_xy[i].first - zone_xy[j].first;
      const double dy = site_xy[i].second - zone_xy[j].second;
      inst.distance(i, j) = round_to(std::hypot(dx, dy), 0.05);
    }
  }
  validate(inst);
  return inst;
}

}  // namespace rxreturn

#endif  // RXRETURN_GENERATE_HPP_
