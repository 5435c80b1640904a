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

#include <vector>

#include "nvcool/linalg/dense.hpp"
#include "nvcool/linalg/sparse.hpp"
#include "nvcool/solver/config.hpp"
#include "nvcool/solver/gmres.hpp"

namespace nvcool::solver {

struct SteadyStateResult {
  linalg::ComplexMatrix rho;
  /// Relative residual of the trace-constrained system, before symmetrization.
  double residual = 0.0;
  int iterations = 0;
  /// ||A vec(rho)|| of the final (symmetrized, renormalized) state.
  double liouvillian_residual = 0.0;
  /// Smallest eigenvalue of rho; NaN when dim > 200 and the check was skipped.
  double min_eigenvalue = 0.0;
  bool preconditioner_fell_back = false;
  std::vector<ResidualSample> history;
};

/// Steady state of d vec(rho)/dt = A vec(rho) via trace-row replacement.
/// Throws DegenerateSteadyState when the steady state is not unique.
SteadyStateResult steady_state(const linalg::SparseMatrix& a, Index dim, const SolverConfig& cfg);

/// Row 0 replaced by the trace functional; exposed for diagnostics.
linalg::SparseMatrix trace_constrained(const linalg::SparseMatrix& a, Index dim);

}  // namespace nvcool::solver
