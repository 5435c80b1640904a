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

#include "nvcool/linalg/dense.hpp"

#include <cmath>
#include <string>

#include "nvcool/error.hpp"

namespace nvcool::linalg {

StateVector vectorize(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols()) {
    throw DimensionError("vectorize: matrix is " + std::to_string(rho.rows()) + "x" +
                         std::to_string(rho.cols()) + ", expected square");
  }
  // Eigen storage is column-major, so a flat copy is exactly column stacking.
  return Eigen::Map<const ComplexVector>(rho.data(), rho.size());
}

ComplexMatrix devectorize(const StateVector& x, Index n) {
  if (n < 0 || x.size() != n * n) {
    throw DimensionError("devectorize: vector length " + std::to_string(x.size()) +
                         " is not " + std::to_string(n) + "^2");
  }
  return Eigen::Map<const ComplexMatrix>(x.data(), n, n);
}

ComplexMatrix devectorize(const StateVector& x) {
  const auto n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(x.size()))));
  if (n * n != x.size()) {
    throw DimensionError("devectorize: length " + std::to_string(x.size()) +
                         " is not a perfect square");
  }
  return devectorize(x, n);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double hermiticity_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return INFINITY;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

ComplexMatrix outer(Index n, Index i, Index j) {
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

double min_hermitian_eigenvalue(const ComplexMatrix& a) {
  const ComplexMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace nvcool::linalg
