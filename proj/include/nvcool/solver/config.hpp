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

#pragma once

#include <string>
#include <string_view>

namespace nvcool::solver {

enum class PreconditionerKind { none, jacobi, ilu0 };

std::string_view to_string(PreconditionerKind kind);
/// Accepts "none", "jacobi", "ilu0". Throws InvalidArgument otherwise.
PreconditionerKind parse_preconditioner(std::string_view name);

struct SolverConfig {
  double tol = 1e-10;
  int max_iter = 5000;
  int restart = 50;
  PreconditionerKind preconditioner = PreconditionerKind::ilu0;
  int threads = 1;
  bool record_history = false;

  /// Throws InvalidArgument when tol <= 0, restart < 1 or restart > max_iter.
  void validate() const;
};

}  // namespace nvcool::solver
