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

// Shared helpers for the test binaries.

#ifndef RXRETURN_TESTS_TEST_SUPPORT_HPP_
#define RXRETURN_TESTS_TEST_SUPPORT_HPP_

#include <cmath>
#include <filesystem>
#include <string>

#include "rxreturn/rxreturn.hpp"

namespace rxreturn::testing {

inline std::filesystem::path data_dir() { return RXRETURN_DATA_DIR; }

inline Instance load_fixture(const std::string& name) {
  return load_instance(InstanceFiles::in_directory(data_dir() / name));
}

inline Instance with_theta_level(Instance inst, double theta, const std::string& level) {
  auto sc = inst.scenario;
  sc.theta = theta;
  sc.incentive_level = level;
  return with_scenario(std::move(inst), sc);
}

// First n sites of an instance, everything else unchanged.
inline Instance truncate_sites(const Instance& inst, std::size_t n) {
  Instance out = inst;
  out.sites.resize(n);
  out.distance = Grid2<double>(n, inst.num_zones(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < inst.num_zones(); ++j) out.distance(i, j) = inst.distance(i, j);
  }
  return out;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

// A fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("rxreturn_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace rxreturn::testing

#endif  // RXRETURN_TESTS_TEST_SUPPORT_HPP_
