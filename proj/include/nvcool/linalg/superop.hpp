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
#include <vector>

#include "nvcool/linalg/dense.hpp"
#include "nvcool/linalg/sparse.hpp"

namespace nvcool::linalg {

/// A Lindblad jump operator with its rate. The dissipator convention is
/// rate * (2 C rho C^dag - C^dag C rho - rho C^dag C).
struct LindbladTerm {
  SparseMatrix op;
  double rate = 0.0;
  std::string label;
};

/// Superoperator of rate * D[C] acting on column-stacked vec(rho).
SparseMatrix dissipator_superop(const SparseMatrix& c, double rate);
SparseMatrix dissipator_superop(const ComplexMatrix& c, double rate);

/// Superoperator of rho -> -i [H, rho].
SparseMatrix hamiltonian_superop(const SparseMatrix& h);
SparseMatrix hamiltonian_superop(const ComplexMatrix& h);

/// Pure dephasing rho -> rate * (Z rho Z - rho) for a Hermitian Z with Z^2 = 1.
/// Not a D[C] term; kept separate for the parity dephasing used in the
/// moments oracle.
SparseMatrix dephasing_superop(const SparseMatrix& z, double rate);

/// N^2 x N^2 Liouvillian of H plus the given dissipators.
SparseMatrix assemble_liouvillian(const SparseMatrix& h, const std::vector<LindbladTerm>& terms);
SparseMatrix assemble_liouvillian(const ComplexMatrix& h, const std::vector<LindbladTerm>& terms);

/// Applies the Liouvillian to a density matrix, returning d(rho)/dt.
ComplexMatrix apply_superop(const SparseMatrix& a, const ComplexMatrix& rho);

}  // namespace nvcool::linalg
