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

// Loads an instance directory, solves the scenario in its scenario.json and
// prints the cost breakdown.
//
//   solve_fixture data/middlesex

#include <iostream>

#include "rxreturn/rxreturn.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: " << argv[0] << " INSTANCE_DIR\n";
    return 2;
  }
  try {
    const auto inst = rxreturn::load_instance(rxreturn::InstanceFiles::in_directory(argv[1]));
    const auto report = rxreturn::solve(inst);
    std::cout << rxreturn::to_json(inst, report)["cost"].dump(2) << '\n';
  } catch (const rxreturn::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
