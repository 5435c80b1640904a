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

#include "nvcool/linalg/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

#include "nvcool/error.hpp"
#include "nvcool/parallel.hpp"

namespace nvcool::linalg {

namespace {

constexpr Index kMaxCols = std::numeric_limits<SparseMatrix::ColIndex>::max();

void check_cols(Index cols, const char* where) {
  if (cols < 0 || cols > kMaxCols) {
    throw DimensionError(std::string(where) + ": column count " + std::to_string(cols) +
                         " exceeds the 32-bit column index range");
  }
}

}  // namespace

SparseMatrix::SparseMatrix(Index rows, Index cols, std::vector<Index> row_offsets,
                           std::vector<ColIndex> col_indices, std::vector<Complex> values)
    : rows_(rows),
      cols_(cols),
      offsets_(std::move(row_offsets)),
      cols_idx_(std::move(col_indices)),
      values_(std::move(values)) {
  check_cols(cols_, "SparseMatrix");
  if (rows_ < 0 || static_cast<Index>(offsets_.size()) != rows_ + 1) {
    throw DimensionError("SparseMatrix: row offset array must have rows+1 entries");
  }
  if (offsets_.front() != 0 || offsets_.back() != static_cast<Index>(values_.size()) ||
      cols_idx_.size() != values_.size()) {
    throw DimensionError("SparseMatrix: offsets inconsistent with stored entries");
  }
  for (Index r = 0; r < rows_; ++r) {
    if (offsets_[r + 1] < offsets_[r]) {
      throw DimensionError("SparseMatrix: row offsets not monotone at row " + std::to_string(r));
    }
    for (Index k = offsets_[r]; k < offsets_[r + 1]; ++k) {
      if (cols_idx_[k] < 0 || cols_idx_[k] >= cols_) {
        throw DimensionError("SparseMatrix: column index out of range in row " +
                             std::to_string(r));
      }
      if (k > offsets_[r] && cols_idx_[k] <= cols_idx_[k - 1]) {
        throw DimensionError("SparseMatrix: column indices not strictly increasing in row " +
                             std::to_string(r));
      }
      if (values_[k] == Complex{}) {
        throw DimensionError("SparseMatrix: explicit zero stored in row " + std::to_string(r));
      }
    }
  }
}

SparseMatrix SparseMatrix::identity(Index n) {
  std::vector<Index> off(n + 1);
  std::vector<ColIndex> col(n);
  for (Index i = 0; i <= n; ++i) off[i] = i;
  for (Index i = 0; i < n; ++i) col[i] = static_cast<ColIndex>(i);
  return SparseMatrix(n, n, std::move(off), std::move(col), std::vector<Complex>(n, 1.0));
}

SparseMatrix SparseMatrix::zero(Index rows, Index cols) {
  return SparseMatrix(rows, cols, std::vector<Index>(rows + 1, 0), {}, {});
}

SparseMatrix SparseMatrix::from_dense(const ComplexMatrix& dense, double drop_tol) {
  check_cols(dense.cols(), "from_dense");
  std::vector<Index> off{0};
  std::vector<ColIndex> col;
  std::vector<Complex> val;
  for (Index i = 0; i < dense.rows(); ++i) {
    for (Index j = 0; j < dense.cols(); ++j) {
      const Complex v = dense(i, j);
      if (v != Complex{} && std::abs(v) > drop_tol) {
        col.push_back(static_cast<ColIndex>(j));
        val.push_back(v);
      }
    }
    off.push_back(static_cast<Index>(val.size()));
  }
  return SparseMatrix(dense.rows(), dense.cols(), std::move(off), std::move(col),
                      std::move(val));
}

Complex SparseMatrix::coeff(Index i, Index j) const {
  const auto first = cols_idx_.begin() + offsets_[i];
  const auto last = cols_idx_.begin() + offsets_[i + 1];
  const auto it = std::lower_bound(first, last, static_cast<ColIndex>(j));
  if (it == last || *it != j) return {};
  return values_[static_cast<std::size_t>(it - cols_idx_.begin())];
}

void SparseMatrix::multiply(std::span<const Complex> x, std::span<Complex> y, int threads) const {
  if (static_cast<Index>(x.size()) != cols_ || static_cast<Index>(y.size()) != rows_) {
    throw DimensionError("SparseMatrix::multiply: operand sizes do not match");
  }
  parallel_blocks(rows_, threads, [&](Index begin, Index end) {
    for (Index r = begin; r < end; ++r) {
      Complex acc{};
      for (Index k = offsets_[r]; k < offsets_[r + 1]; ++k) acc += values_[k] * x[cols_idx_[k]];
      y[r] = acc;
    }
  });
}

ComplexVector SparseMatrix::operator*(const ComplexVector& x) const {
  ComplexVector y(rows_);
  multiply({x.data(), static_cast<std::size_t>(x.size())},
           {y.data(), static_cast<std::size_t>(y.size())});
  return y;
}

ComplexMatrix SparseMatrix::to_dense() const {
  ComplexMatrix out = ComplexMatrix::Zero(rows_, cols_);
  for (Index r = 0; r < rows_; ++r) {
    for (Index k = offsets_[r]; k < offsets_[r + 1]; ++k) out(r, cols_idx_[k]) = values_[k];
  }
  return out;
}

SparseMatrix SparseMatrix::transpose() const {
  check_cols(rows_, "transpose");
  std::vector<Index> off(cols_ + 1, 0);
  for (auto c : cols_idx_) ++off[c + 1];
  for (Index c = 0; c < cols_; ++c) off[c + 1] += off[c];
  std::vector<ColIndex> col(values_.size());
  std::vector<Complex> val(values_.size());
  std::vector<Index> cursor(off.begin(), off.end() - 1);
  // Rows are visited in ascending order, so each transposed row comes out sorted.
  for (Index r = 0; r < rows_; ++r) {
    for (Index k = offsets_[r]; k < offsets_[r + 1]; ++k) {
      const Index dst = cursor[cols_idx_[k]]++;
      col[dst] = static_cast<ColIndex>(r);
      val[dst] = values_[k];
    }
  }
  return SparseMatrix(cols_, rows_, std::move(off), std::move(col), std::move(val));
}

SparseMatrix SparseMatrix::conjugate() const {
  SparseMatrix out = *this;
  for (auto& v : out.values_) v = std::conj(v);
  return out;
}

SparseMatrix SparseMatrix::adjoint() const { return transpose().conjugate(); }

SparseMatrix SparseMatrix::scaled(Complex s) const {
  if (s == Complex{}) return zero(rows_, cols_);
  SparseMatrix out = *this;
  for (auto& v : out.values_) v *= s;
  return out;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SparseMatrix::mean_nnz_per_row() const {
  return rows_ == 0 ? 0.0 : static_cast<double>(nnz()) / static_cast<double>(rows_);
}

Index SparseMatrix::max_nnz_per_row() const {
  Index m = 0;
  for (Index r = 0; r < rows_; ++r) m = std::max(m, offsets_[r + 1] - offsets_[r]);
  return m;
}

SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("sparse addition: dimension mismatch");
  }
  TripletBuilder t(a.rows(), a.cols());
  t.reserve(static_cast<std::size_t>(a.nnz() + b.nnz()));
  t.add_matrix(a);
  t.add_matrix(b);
  return std::move(t).finalize();
}

SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) { return a + b.scaled(-1.0); }

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("sparse product: inner dimensions differ");
  TripletBuilder t(a.rows(), b.cols());
  const auto ao = a.row_offsets();
  const auto ac = a.col_indices();
  const auto av = a.values();
  const auto bo = b.row_offsets();
  const auto bc = b.col_indices();
  const auto bv = b.values();
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index k = ao[i]; k < ao[i + 1]; ++k) {
      const Index m = ac[k];
      for (Index l = bo[m]; l < bo[m + 1]; ++l) t.add(i, bc[l], av[k] * bv[l]);
    }
  }
  return std::move(t).finalize();
}

TripletBuilder::TripletBuilder(Index rows, Index cols) : rows_(rows), cols_(cols) {
  check_cols(cols, "TripletBuilder");
  if (rows < 0) throw DimensionError("TripletBuilder: negative row count");
}

void TripletBuilder::add(Index i, Index j, Complex v) {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_) {
    throw DimensionError("TripletBuilder::add: (" + std::to_string(i) + ", " + std::to_string(j) +
                         ") outside " + std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  if (v != Complex{}) entries_.push_back({i, j, v});
}

void TripletBuilder::add_kron(const SparseMatrix& a, const SparseMatrix& b, Complex scale) {
  if (a.rows() * b.rows() != rows_ || a.cols() * b.cols() != cols_) {
    throw DimensionError("TripletBuilder::add_kron: product does not match builder shape");
  }
  if (scale == Complex{}) return;
  const auto ao = a.row_offsets();
  const auto ac = a.col_indices();
  const auto av = a.values();
  const auto bo = b.row_offsets();
  const auto bc = b.col_indices();
  const auto bv = b.values();
  entries_.reserve(entries_.size() + static_cast<std::size_t>(a.nnz() * b.nnz()));
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index ka = ao[i]; ka < ao[i + 1]; ++ka) {
      const Complex s = scale * av[ka];
      const Index col0 = static_cast<Index>(ac[ka]) * b.cols();
      for (Index k = 0; k < b.rows(); ++k) {
        const Index row = i * b.rows() + k;
        for (Index kb = bo[k]; kb < bo[k + 1]; ++kb) {
          entries_.push_back({row, col0 + bc[kb], s * bv[kb]});
        }
      }
    }
  }
}

void TripletBuilder::add_matrix(const SparseMatrix& a, Complex scale) {
  if (a.rows() != rows_ || a.cols() != cols_) {
    throw DimensionError("TripletBuilder::add_matrix: shape mismatch");
  }
  if (scale == Complex{}) return;
  const auto ao = a.row_offsets();
  const auto ac = a.col_indices();
  const auto av = a.values();
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index k = ao[i]; k < ao[i + 1]; ++k) entries_.push_back({i, ac[k], scale * av[k]});
  }
}

SparseMatrix TripletBuilder::finalize() && {
  // Counting sort by row, then a per-row sort by column keeps this O(nnz log row_nnz).
  std::vector<Index> off(rows_ + 1, 0);
  for (const auto& e : entries_) ++off[e.row + 1];
  for (Index r = 0; r < rows_; ++r) off[r + 1] += off[r];
  std::vector<std::pair<SparseMatrix::ColIndex, Complex>> sorted(entries_.size());
  {
    std::vector<Index> cursor(off.begin(), off.end() - 1);
    for (const auto& e : entries_) {
      sorted[cursor[e.row]++] = {static_cast<SparseMatrix::ColIndex>(e.col), e.value};
    }
  }
  entries_.clear();
  entries_.shrink_to_fit();

  std::vector<Index> out_off{0};
  out_off.reserve(rows_ + 1);
  std::vector<SparseMatrix::ColIndex> out_col;
  std::vector<Complex> out_val;
  out_col.reserve(sorted.size());
  out_val.reserve(sorted.size());
  for (Index r = 0; r < rows_; ++r) {
    auto first = sorted.begin() + off[r];
    auto last = sorted.begin() + off[r + 1];
    // Stable so duplicates are summed in insertion order (deterministic rounding).
    std::stable_sort(first, last, [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto it = first; it != last;) {
      const auto c = it->first;
      Complex sum{};
      for (; it != last && it->first == c; ++it) sum += it->second;
      if (sum != Complex{}) {
        out_col.push_back(c);
        out_val.push_back(sum);
      }
    }
    out_off.push_back(static_cast<Index>(out_val.size()));
  }
  return SparseMatrix(rows_, cols_, std::move(out_off), std::move(out_col), std::move(out_val));
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
  const Index rows = a.rows() * b.rows();
  const Index cols = a.cols() * b.cols();
  if ((a.rows() != 0 && rows / a.rows() != b.rows()) || cols > kMaxCols ||
      (a.cols() != 0 && cols / a.cols() != b.cols())) {
    throw DimensionError("kron: product dimensions overflow the index range");
  }
  TripletBuilder t(rows, cols);
  t.add_kron(a, b);
  return std::move(t).finalize();
}

void write_matrix_market(std::ostream& os, const SparseMatrix& a) {
  os << "%%MatrixMarket matrix coordinate complex general\n";
  os << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  os << std::setprecision(17);
  const auto off = a.row_offsets();
  const auto col = a.col_indices();
  const auto val = a.values();
  for (Index r = 0; r < a.rows(); ++r) {
    for (Index k = off[r]; k < off[r + 1]; ++k) {
      os << (r + 1) << ' ' << (col[k] + 1) << ' ' << val[k].real() << ' ' << val[k].imag() << '\n';
    }
  }
}

}  // namespace nvcool::linalg
