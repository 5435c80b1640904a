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

#include "nvcool/solver/steady_state.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/QR>

#include "nvcool/error.hpp"

namespace nvcool::solver {

using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::SparseMatrix;

namespace {

constexpr Index kDenseCheckMaxDim = 20;
constexpr Index kEigenCheckMaxDim = 200;

void check_unique(const SparseMatrix& a, Index dim) {
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(a.to_dense());
  qr.setThreshold(1e-10);
  const Index nullity = a.cols() - qr.rank();
  if (nullity > 1) {
    throw DegenerateSteadyState("steady_state: Liouvillian of dimension " + std::to_string(dim) +
                                " has " + std::to_string(nullity) +
                                " independent steady states; add a mixing process");
  }
}

}  // namespace

SparseMatrix trace_constrained(const SparseMatrix& a, Index dim) {
  if (a.rows() != dim * dim || a.cols() != dim * dim) {
    throw DimensionError("steady_state: Liouvillian is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", expected " + std::to_string(dim * dim) +
                         " square");
  }
  linalg::TripletBuilder t(a.rows(), a.cols());
  t.reserve(static_cast<std::size_t>(a.nnz() + dim));
  for (Index k = 0; k < dim; ++k) t.add(0, k * (dim + 1), 1.0);
  const auto off = a.row_offsets();
  const auto col = a.col_indices();
  const auto val = a.values();
  for (Index r = 1; r < a.rows(); ++r) {
    for (Index k = off[r]; k < off[r + 1]; ++k) t.add(r, col[k], val[k]);
  }
  return std::move(t).finalize();
}

SteadyStateResult steady_state(const SparseMatrix& a, Index dim, const SolverConfig& cfg) {
  cfg.validate();
  if (dim < 1) throw InvalidArgument("steady_state: dimension must be positive");
  const SparseMatrix c = trace_constrained(a, dim);
  if (dim <= kDenseCheckMaxDim) check_unique(a, dim);

  const Index n2 = dim * dim;
  ComplexVector rhs = ComplexVector::Zero(n2);
  rhs(0) = 1.0;
  ComplexVector x0 = ComplexVector::Zero(n2);
  for (Index k = 0; k < dim; ++k) x0(k * (dim + 1)) = 1.0 / static_cast<double>(dim);

  GmresResult g;
  try {
    g = gmres(c, rhs, cfg, x0);
  } catch (const StagnationError& e) {
    throw DegenerateSteadyState(std::string("steady_state: ") + e.what() +
                                "; the steady state is probably not unique");
  }

  SteadyStateResult out;
  out.residual = g.residual;
  out.iterations = g.iterations;
  out.preconditioner_fell_back = g.preconditioner_fell_back;
  out.history = std::move(g.history);

  ComplexMatrix rho = linalg::devectorize(g.x, dim);
  rho = (0.5 * (rho + rho.adjoint())).eval();
  const Complex tr = rho.trace();
  if (std::abs(tr) == 0.0 || !std::isfinite(std::abs(tr))) {
    throw DegenerateSteadyState("steady_state: solution has zero trace");
  }
  rho /= tr.real();
  out.rho = std::move(rho);
  out.liouvillian_residual = (a * linalg::vectorize(out.rho)).norm();
  out.min_eigenvalue = dim <= kEigenCheckMaxDim ? linalg::min_hermitian_eigenvalue(out.rho)
                                                : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace nvcool::solver
