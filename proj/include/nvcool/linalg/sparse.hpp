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

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "nvcool/linalg/dense.hpp"

namespace nvcool::linalg {

/// Compressed sparse row matrix with complex entries.
///
/// Invariants (checked by the validating constructor and guaranteed by
/// TripletBuilder::finalize): offsets are monotone with offsets.front() == 0
/// and offsets.back() == nnz, column indices are strictly increasing within
/// each row, and no stored value is exactly zero.
///
/// A finalized matrix is immutable; concurrent readers are safe.
class SparseMatrix {
 public:
  using ColIndex = std::int32_t;

  SparseMatrix() = default;
  SparseMatrix(Index rows, Index cols, std::vector<Index> row_offsets,
               std::vector<ColIndex> col_indices, std::vector<Complex> values);

  static SparseMatrix identity(Index n);
  static SparseMatrix zero(Index rows, Index cols);
  /// Entries with |value| <= drop_tol are not stored.
  static SparseMatrix from_dense(const ComplexMatrix& dense, double drop_tol = 0.0);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  Index nnz() const noexcept { return static_cast<Index>(values_.size()); }

  std::span<const Index> row_offsets() const noexcept { return offsets_; }
  std::span<const ColIndex> col_indices() const noexcept { return cols_idx_; }
  std::span<const Complex> values() const noexcept { return values_; }

  /// Stored value at (i, j), or zero.
  Complex coeff(Index i, Index j) const;

  /// y = A x. Rows are split into contiguous blocks across `threads` workers;
  /// each row is summed in ascending column order, so the result does not
  /// depend on the thread count.
  void multiply(std::span<const Complex> x, std::span<Complex> y, int threads = 1) const;
  ComplexVector operator*(const ComplexVector& x) const;

  ComplexMatrix to_dense() const;
  SparseMatrix transpose() const;
  SparseMatrix conjugate() const;
  SparseMatrix adjoint() const;
  SparseMatrix scaled(Complex s) const;

  double max_abs() const;
  double mean_nnz_per_row() const;
  Index max_nnz_per_row() const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> offsets_{0};
  std::vector<ColIndex> cols_idx_;
  std::vector<Complex> values_;
};

SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);

/// Collects (i, j, v) triplets; finalize() sorts, sums duplicates and drops
/// entries that cancel to exactly zero.
class TripletBuilder {
 public:
  TripletBuilder(Index rows, Index cols);

  void reserve(std::size_t n) { entries_.reserve(n); }
  void add(Index i, Index j, Complex v);

  /// Adds scale * kron(a, b) without materializing the product.
  void add_kron(const SparseMatrix& a, const SparseMatrix& b, Complex scale = 1.0);
  void add_matrix(const SparseMatrix& a, Complex scale = 1.0);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return entries_.size(); }

  SparseMatrix finalize() &&;

 private:
  struct Entry {
    Index row;
    Index col;
    Complex value;
  };
  Index rows_;
  Index cols_;
  std::vector<Entry> entries_;
};

/// Kronecker product. Throws DimensionError when the product dimensions
/// overflow the index types.
SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b);

/// Matrix Market exchange format: coordinate complex general, 1-based.
void write_matrix_market(std::ostream& os, const SparseMatrix& a);

}  // namespace nvcool::linalg
