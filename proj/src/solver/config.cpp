// Copyright 2026 The nvcool Authors
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

#include "nvcool/solver/config.hpp"

#include "nvcool/error.hpp"

namespace nvcool::solver {

std::string_view to_string(PreconditionerKind kind) {
  switch (kind) {
    case PreconditionerKind::none:
      return "none";
    case PreconditionerKind::jacobi:
      return "jacobi";
    case PreconditionerKind::ilu0:
      return "ilu0";
  }
  return "unknown";
}

PreconditionerKind parse_preconditioner(std::string_view name) {
  if (name == "none") return PreconditionerKind::none;
  if (name == "jacobi") return PreconditionerKind::jacobi;
  if (name == "ilu0") return PreconditionerKind::ilu0;
  throw InvalidArgument("unknown preconditioner '" + std::string(name) +
                        "' (expected none, jacobi or ilu0)");
}

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw InvalidArgument("solver tol must be positive");
  if (restart < 1) throw InvalidArgument("solver restart must be at least 1");
  if (max_iter < 1) throw InvalidArgument("solver max_iter must be at least 1");
  if (restart > max_iter) throw InvalidArgument("solver restart must not exceed max_iter");
  if (threads < 1) throw InvalidArgument("solver threads must be at least 1");
}

}  // namespace nvcool::solver
