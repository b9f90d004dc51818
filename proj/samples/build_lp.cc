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

// Builds a small LP by hand, solves it, and prints primal and dual values.

#include <iostream>

#include "rxreturn/simplex.hpp"

int main() {
  using namespace rxreturn::lp;
  LinearProgram lp;
  // min 2x + 3y  s.t.  x + y >= 4,  x <= 3
  const auto x = lp.add_variable(0.0, kInf, 2.0, "x");
  const auto y = lp.add_variable(0.0, kInf, 3.0, "y");
  lp.add_constraint({{x, 1.0}, {y, 1.0}}, Relation::GreaterEqual, 4.0, "demand");
  lp.add_constraint({{x, 1.0}}, Relation::LessEqual, 3.0, "cap");
  const auto sol = solve_lp(lp);
  std::cout << to_string(sol.status) << " objective " << sol.objective << '\n'
            << "x = " << sol.primal[x] << ", y = " << sol.primal[y] << '\n'
            << "duals: demand " << sol.duals[0] << ", cap " << sol.duals[1] << '\n';
  write_lp_text(std::cout, lp);
  return 0;
}
