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

#include <cstddef>

#include "nvcool/linalg/dense.hpp"
#include "nvcool/linalg/sparse.hpp"
#include "nvcool/nv/model.hpp"
#include "nvcool/solver/config.hpp"

// Full seven-level NV ensemble coupled to a truncated phonon mode. Times in
// us; lambda and omega_m are quoted as nu in MHz.
namespace nvcool::cooling {

using linalg::Index;

struct ValidationScenario {
  int n_nv = 1;
  int n_ph = 20;
  double lambda_mhz = 0.1;
  double omega_m_mhz = 475.0;
  double quality = 3.0e4;
  double n_th = 1.0;
  nv::NvParams nv;
  nv::DriveParams drive{0.0, 0.0, 60.0, 130.0};
  std::size_t memory_budget_bytes = std::size_t{2} << 30;
  solver::SolverConfig solver;

  Index nv_dim() const;
  Index hilbert_dim() const;
  double gamma() const;  // 1/us
  /// Throws BudgetExceeded (with N) or InvalidArgument.
  void validate() const;
};

/// Rough peak memory of assembling and solving the scenario, in bytes.
std::size_t estimated_memory(const ValidationScenario& s);

struct FullSystem {
  linalg::SparseMatrix liouvillian;
  Index dim = 0;
  Index nv_dim = 0;
  int n_ph = 0;
};

FullSystem build_full_system(const ValidationScenario& s);

/// Partial trace over the NV factors; the phonon is the last tensor factor.
linalg::ComplexMatrix phonon_marginal(const linalg::ComplexMatrix& rho, int n_ph);

/// Mean occupation of a thermal state restricted to Fock levels 0..n_ph-1.
double truncated_thermal_mean(double n_th, int n_ph);

struct ValidationResult {
  double alpha = 0.0;
  double lambda_eff_mhz = 0.0;
  double n_f_full_raw = 0.0;
  /// Raw value rescaled by n_th / truncated_thermal_mean.
  double n_f_full = 0.0;
  double truncation_baseline = 0.0;
  double n_f_two = 0.0;
  double relative_error = 0.0;
  int iterations = 0;
  double residual = 0.0;
  double trace_error = 0.0;
  double hermiticity = 0.0;
  double min_eigenvalue = 0.0;
  double mean_nnz_per_row = 0.0;
  Index max_nnz_per_row = 0;
  Index dim = 0;
};

ValidationResult validate_two_level(const ValidationScenario& s);

}  // namespace nvcool::cooling
