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

#include "nvcool/linalg/superop.hpp"

#include <cmath>

#include "nvcool/error.hpp"

namespace nvcool::linalg {

namespace {

void add_dissipator(TripletBuilder& t, const SparseMatrix& c, double rate) {
  const Index n = c.rows();
  const SparseMatrix id = SparseMatrix::identity(n);
  const SparseMatrix cdc = c.adjoint() * c;
  t.add_kron(c.conjugate(), c, 2.0 * rate);
  t.add_kron(id, cdc, -rate);
  t.add_kron(cdc.transpose(), id, -rate);
}

void add_hamiltonian(TripletBuilder& t, const SparseMatrix& h) {
  const SparseMatrix id = SparseMatrix::identity(h.rows());
  t.add_kron(id, h, -kI);
  t.add_kron(h.transpose(), id, kI);
}

void check_square(const SparseMatrix& m, const std::string& what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(what + ": operator is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square");
  }
}

void check_rate(double rate, const std::string& what) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw InvalidArgument(what + ": rate must be finite and non-negative, got " +
                          std::to_string(rate));
  }
}

}  // namespace

SparseMatrix dissipator_superop(const SparseMatrix& c, double rate) {
  check_square(c, "dissipator_superop");
  check_rate(rate, "dissipator_superop");
  const Index n2 = c.rows() * c.rows();
  TripletBuilder t(n2, n2);
  if (rate > 0.0) add_dissipator(t, c, rate);
  return std::move(t).finalize();
}

SparseMatrix dissipator_superop(const ComplexMatrix& c, double rate) {
  return dissipator_superop(SparseMatrix::from_dense(c), rate);
}

SparseMatrix hamiltonian_superop(const SparseMatrix& h) {
  check_square(h, "hamiltonian_superop");
  const Index n2 = h.rows() * h.rows();
  TripletBuilder t(n2, n2);
  add_hamiltonian(t, h);
  return std::move(t).finalize();
}

SparseMatrix hamiltonian_superop(const ComplexMatrix& h) {
  return hamiltonian_superop(SparseMatrix::from_dense(h));
}

SparseMatrix dephasing_superop(const SparseMatrix& z, double rate) {
  check_square(z, "dephasing_superop");
  check_rate(rate, "dephasing_superop");
  const Index n = z.rows();
  TripletBuilder t(n * n, n * n);
  if (rate > 0.0) {
    t.add_kron(z.conjugate(), z, rate);
    t.add_matrix(SparseMatrix::identity(n * n), -rate);
  }
  return std::move(t).finalize();
}

SparseMatrix assemble_liouvillian(const SparseMatrix& h, const std::vector<LindbladTerm>& terms) {
  check_square(h, "assemble_liouvillian (Hamiltonian)");
  const Index n = h.rows();
  // With K = sum rate C^dag C:
  // A = I (x) (-iH - K) + (iH - K)^T (x) I + sum 2 rate conj(C) (x) C.
  TripletBuilder k_sum(n, n);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& term = terms[i];
    const std::string name =
        "assemble_liouvillian: term " + std::to_string(i) +
        (term.label.empty() ? std::string() : " '" + term.label + "'");
    if (term.op.rows() != n || term.op.cols() != n) {
      throw DimensionError(name + " has dimension " + std::to_string(term.op.rows()) + "x" +
                           std::to_string(term.op.cols()) + ", Hilbert dimension is " +
                           std::to_string(n));
    }
    check_rate(term.rate, name);
    if (term.rate > 0.0) k_sum.add_matrix(term.op.adjoint() * term.op, term.rate);
  }
  const SparseMatrix k = std::move(k_sum).finalize();
  const SparseMatrix id = SparseMatrix::identity(n);
  TripletBuilder left(n, n);
  left.add_matrix(h, -kI);
  left.add_matrix(k, -1.0);
  TripletBuilder right(n, n);
  right.add_matrix(h, kI);
  right.add_matrix(k, -1.0);

  TripletBuilder t(n * n, n * n);
  t.add_kron(id, std::move(left).finalize());
  t.add_kron(std::move(right).finalize().transpose(), id);
  for (const auto& term : terms) {
    if (term.rate > 0.0) t.add_kron(term.op.conjugate(), term.op, 2.0 * term.rate);
  }
  return std::move(t).finalize();
}

SparseMatrix assemble_liouvillian(const ComplexMatrix& h, const std::vector<LindbladTerm>& terms) {
  return assemble_liouvillian(SparseMatrix::from_dense(h), terms);
}

ComplexMatrix apply_superop(const SparseMatrix& a, const ComplexMatrix& rho) {
  if (a.cols() != rho.size()) {
    throw DimensionError("apply_superop: superoperator does not match density matrix size");
  }
  return devectorize(a * vectorize(rho), rho.rows());
}

}  // namespace nvcool::linalg
