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

#include <span>
#include <vector>

#include "nvcool/linalg/sparse.hpp"
#include "nvcool/solver/config.hpp"

namespace nvcool::solver {

using linalg::Complex;
using linalg::Index;

/// Approximate inverse M^-1 applied by apply(). Immutable after construction.
class Preconditioner {
 public:
  Preconditioner() = default;

  PreconditionerKind requested() const noexcept { return requested_; }
  PreconditionerKind kind() const noexcept { return kind_; }
  /// True when ilu0 hit a zero pivot and jacobi was used instead.
  bool fell_back() const noexcept { return fell_back_; }
  Index size() const noexcept { return n_; }

  /// out = M^-1 in. `in` and `out` must not alias.
  void apply(std::span<const Complex> in, std::span<Complex> out) const;

 private:
  friend Preconditioner build_preconditioner(const linalg::SparseMatrix&, PreconditionerKind);

  PreconditionerKind requested_ = PreconditionerKind::none;
  PreconditionerKind kind_ = PreconditionerKind::none;
  bool fell_back_ = false;
  Index n_ = 0;
  std::vector<Complex> inv_diag_;
  // ILU(0) factors share A's pattern: strict lower part holds L (unit
  // diagonal implied), the rest holds U.
  std::vector<Index> offsets_;
  std::vector<linalg::SparseMatrix::ColIndex> cols_;
  std::vector<Complex> lu_;
  std::vector<Index> diag_pos_;
};

Preconditioner build_preconditioner(const linalg::SparseMatrix& a, PreconditionerKind kind);

}  // namespace nvcool::solver
