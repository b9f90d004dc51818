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

// Convenience header pulling in the whole library.

#ifndef RXRETURN_RXRETURN_HPP_
#define RXRETURN_RXRETURN_HPP_

#include "rxreturn/benders.hpp"
#include "rxreturn/error.hpp"
#include "rxreturn/generate.hpp"
#include "rxreturn/grid.hpp"
#include "rxreturn/io.hpp"
#include "rxreturn/mip.hpp"
#include "rxreturn/model.hpp"
#include "rxreturn/oracle.hpp"
#include "rxreturn/report.hpp"
#include "rxreturn/simplex.hpp"

#endif  // RXRETURN_RXRETURN_HPP_
