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

#include "nvcool/solver/preconditioner.hpp"

#include <cmath>

#include "nvcool/error.hpp"

namespace nvcool::solver {

namespace {

std::vector<Complex> inverse_diagonal(const linalg::SparseMatrix& a) {
  std::vector<Complex> inv(static_cast<std::size_t>(a.rows()), 1.0);
  for (Index i = 0; i < a.rows(); ++i) {
    const Complex d = a.coeff(i, i);
    if (d != Complex{}) inv[i] = 1.0 / d;
  }
  return inv;
}

bool usable_pivot(Complex p) { return p != Complex{} && std::isfinite(std::abs(p)); }

}  // namespace

Preconditioner build_preconditioner(const linalg::SparseMatrix& a, PreconditionerKind kind) {
  if (a.rows() != a.cols()) throw DimensionError("build_preconditioner: matrix is not square");
  Preconditioner m;
  m.requested_ = kind;
  m.kind_ = kind;
  m.n_ = a.rows();
  if (kind == PreconditionerKind::jacobi) {
    m.inv_diag_ = inverse_diagonal(a);
    return m;
  }
  if (kind != PreconditionerKind::ilu0) return m;

  const Index n = a.rows();
  m.offsets_.assign(a.row_offsets().begin(), a.row_offsets().end());
  m.cols_.assign(a.col_indices().begin(), a.col_indices().end());
  m.lu_.assign(a.values().begin(), a.values().end());
  m.diag_pos_.assign(static_cast<std::size_t>(n), -1);
  for (Index i = 0; i < n; ++i) {
    for (Index k = m.offsets_[i]; k < m.offsets_[i + 1]; ++k) {
      if (m.cols_[k] == i) m.diag_pos_[i] = k;
    }
  }

  bool ok = true;
  std::vector<Index> pos(static_cast<std::size_t>(n), -1);
  for (Index i = 0; i < n && ok; ++i) {
    const Index begin = m.offsets_[i];
    const Index end = m.offsets_[i + 1];
    for (Index k = begin; k < end; ++k) pos[m.cols_[k]] = k;
    for (Index kk = begin; kk < end; ++kk) {
      const Index k = m.cols_[kk];
      if (k >= i) break;
      const Complex pivot = m.lu_[m.diag_pos_[k]];
      const Complex lik = m.lu_[kk] / pivot;
      m.lu_[kk] = lik;
      for (Index jj = m.diag_pos_[k] + 1; jj < m.offsets_[k + 1]; ++jj) {
        const Index p = pos[m.cols_[jj]];
        if (p >= 0) m.lu_[p] -= lik * m.lu_[jj];
      }
    }
    for (Index k = begin; k < end; ++k) pos[m.cols_[k]] = -1;
    ok = m.diag_pos_[i] >= 0 && usable_pivot(m.lu_[m.diag_pos_[i]]);
  }

  if (!ok) {
    m.kind_ = PreconditionerKind::jacobi;
    m.fell_back_ = true;
    m.offsets_.clear();
    m.cols_.clear();
    m.lu_.clear();
    m.diag_pos_.clear();
    m.inv_diag_ = inverse_diagonal(a);
  }
  return m;
}

void Preconditioner::apply(std::span<const Complex> in, std::span<Complex> out) const {
  if (static_cast<Index>(in.size()) != n_ || static_cast<Index>(out.size()) != n_) {
    throw DimensionError("Preconditioner::apply: vector size mismatch");
  }
  switch (kind_) {
    case PreconditionerKind::none:
      std::copy(in.begin(), in.end(), out.begin());
      return;
    case PreconditionerKind::jacobi:
      for (Index i = 0; i < n_; ++i) out[i] = inv_diag_[i] * in[i];
      return;
    case PreconditionerKind::ilu0:
      break;
  }
  for (Index i = 0; i < n_; ++i) {
    Complex s = in[i];
    for (Index k = offsets_[i]; k < diag_pos_[i]; ++k) s -= lu_[k] * out[cols_[k]];
    out[i] = s;
  }
  for (Index i = n_ - 1; i >= 0; --i) {
    Complex s = out[i];
    for (Index k = diag_pos_[i] + 1; k < offsets_[i + 1]; ++k) s -= lu_[k] * out[cols_[k]];
    out[i] = s / lu_[diag_pos_[i]];
  }
}

}  // namespace nvcool::solver
