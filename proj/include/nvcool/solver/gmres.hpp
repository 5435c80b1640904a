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

#include <iosfwd>
#include <optional>
#include <vector>

#include "nvcool/linalg/dense.hpp"
#include "nvcool/linalg/sparse.hpp"
#include "nvcool/solver/config.hpp"
#include "nvcool/solver/preconditioner.hpp"

namespace nvcool::solver {

struct ResidualSample {
  int iteration = 0;
  double residual = 0.0;
  /// True residual recomputed from A x at the end of a restart cycle.
  bool explicit_check = false;
};

struct GmresResult {
  linalg::ComplexVector x;
  /// ||b - A x|| / ||b||, or ||b - A x|| when b = 0.
  double residual = 0.0;
  int iterations = 0;
  bool preconditioner_fell_back = false;
  PreconditionerKind preconditioner = PreconditionerKind::none;
  std::vector<ResidualSample> history;
};

/// Restarted, right-preconditioned GMRES(m) with modified Gram-Schmidt.
/// Throws ConvergenceError (with the best residual) when max_iter is reached
/// or a whole restart cycle makes no progress.
GmresResult gmres(const linalg::SparseMatrix& a, const linalg::ComplexVector& b,
                  const SolverConfig& cfg,
                  const std::optional<linalg::ComplexVector>& x0 = std::nullopt);

/// Same, with a prebuilt preconditioner.
GmresResult gmres(const linalg::SparseMatrix& a, const linalg::ComplexVector& b,
                  const SolverConfig& cfg, const Preconditioner& m,
                  const std::optional<linalg::ComplexVector>& x0 = std::nullopt);

/// CSV with header "iteration,residual,explicit".
void write_residual_history(std::ostream& os, const std::vector<ResidualSample>& history);

}  // namespace nvcool::solver
