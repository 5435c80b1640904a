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

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace nvcool::linalg {

using Complex = std::complex<double>;
using Index = std::int64_t;

/// Dense complex operator. Entries are addressed as (row, col).
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Vectorized density matrix (column stacking), length n^2.
using StateVector = ComplexVector;

inline constexpr Complex kI{0.0, 1.0};

/// Column-stacking vectorization: x[i + n*j] = rho(i, j).
StateVector vectorize(const ComplexMatrix& rho);

/// Inverse of vectorize. Throws DimensionError if x.size() != n*n.
ComplexMatrix devectorize(const StateVector& x, Index n);

/// Same as devectorize but infers n from the length (which must be a perfect square).
ComplexMatrix devectorize(const StateVector& x);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// max |A - A^dagger|.
double hermiticity_defect(const ComplexMatrix& a);

/// |i><j| in an n-dimensional space.
ComplexMatrix outer(Index n, Index i, Index j);

/// Smallest eigenvalue of the Hermitian part (A + A^dagger)/2.
double min_hermitian_eigenvalue(const ComplexMatrix& a);

}  // namespace nvcool::linalg
