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

#include "nvcool/solver/gmres.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <span>
#include <string>

#include "nvcool/error.hpp"

namespace nvcool::solver {

using linalg::ComplexMatrix;
using linalg::ComplexVector;

namespace {

std::span<const Complex> view(const ComplexVector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
std::span<Complex> view(ComplexVector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// Complex Givens rotation zeroing the second component of (f, g).
struct Givens {
  double c = 1.0;
  Complex s{};

  static Givens make(Complex f, Complex g) {
    Givens r;
    const double af = std::abs(f);
    const double ag = std::abs(g);
    if (ag == 0.0) return r;
    if (af == 0.0) {
      r.c = 0.0;
      r.s = std::conj(g) / ag;
      return r;
    }
    const double norm = std::hypot(af, ag);
    r.c = af / norm;
    r.s = (f / af) * std::conj(g) / norm;
    return r;
  }

  void apply(Complex& x, Complex& y) const {
    const Complex t = c * x + s * y;
    y = -std::conj(s) * x + c * y;
    x = t;
  }
};

}  // namespace

GmresResult gmres(const linalg::SparseMatrix& a, const ComplexVector& b, const SolverConfig& cfg,
                  const std::optional<ComplexVector>& x0) {
  cfg.validate();
  const Preconditioner m = build_preconditioner(a, cfg.preconditioner);
  return gmres(a, b, cfg, m, x0);
}

GmresResult gmres(const linalg::SparseMatrix& a, const ComplexVector& b, const SolverConfig& cfg,
                  const Preconditioner& m, const std::optional<ComplexVector>& x0) {
  cfg.validate();
  const Index n = a.rows();
  if (a.cols() != n) throw DimensionError("gmres: matrix is not square");
  if (b.size() != n) throw DimensionError("gmres: right-hand side has wrong length");
  if (m.size() != n) throw DimensionError("gmres: preconditioner has wrong size");
  if (!b.allFinite()) throw InvalidArgument("gmres: right-hand side is not finite");

  GmresResult out;
  out.preconditioner = m.kind();
  out.preconditioner_fell_back = m.fell_back();
  out.x = x0 ? *x0 : ComplexVector::Zero(n);
  if (out.x.size() != n) throw DimensionError("gmres: start vector has wrong length");

  const double bnorm = b.norm();
  const double scale = bnorm > 0.0 ? bnorm : 1.0;
  const int mdim = static_cast<int>(std::min<Index>(cfg.restart, std::max<Index>(n, 1)));

  ComplexVector r(n), w(n), z(n);
  auto residual_of = [&](const ComplexVector& x) {
    a.multiply(view(x), view(r), cfg.threads);
    r = b - r;
    return r.norm();
  };

  double rnorm = residual_of(out.x);
  double best = rnorm / scale;
  if (cfg.record_history) out.history.push_back({0, best, true});
  if (best <= cfg.tol || n == 0) {
    out.residual = best;
    return out;
  }

  std::vector<ComplexVector> v(static_cast<std::size_t>(mdim) + 1, ComplexVector(n));
  ComplexMatrix h = ComplexMatrix::Zero(mdim + 1, mdim);
  std::vector<Givens> rot(static_cast<std::size_t>(mdim));
  ComplexVector g(mdim + 1);

  int iter = 0;
  while (iter < cfg.max_iter) {
    const double cycle_start = rnorm;
    v[0] = r / rnorm;
    g.setZero();
    g(0) = rnorm;
    h.setZero();

    int j = 0;
    bool done = false;
    for (; j < mdim && iter < cfg.max_iter; ++j) {
      ++iter;
      m.apply(view(v[j]), view(z));
      a.multiply(view(z), view(w), cfg.threads);
      for (int i = 0; i <= j; ++i) {
        const Complex hij = v[i].dot(w);
        h(i, j) = hij;
        w -= hij * v[i];
      }
      const double hnext = w.norm();
      h(j + 1, j) = hnext;
      const bool breakdown = hnext <= std::numeric_limits<double>::epsilon() * h.col(j).norm();
      if (!breakdown) v[j + 1] = w / hnext;

      for (int i = 0; i < j; ++i) rot[i].apply(h(i, j), h(i + 1, j));
      rot[j] = Givens::make(h(j, j), h(j + 1, j));
      rot[j].apply(h(j, j), h(j + 1, j));
      rot[j].apply(g(j), g(j + 1));

      const double est = std::abs(g(j + 1)) / scale;
      if (cfg.record_history) out.history.push_back({iter, est, false});
      if (est <= cfg.tol || breakdown) {
        ++j;
        done = true;
        break;
      }
    }

    // Back substitution on the triangular Hessenberg part, then x += M^-1 V y.
    ComplexVector y = ComplexVector::Zero(j);
    for (int i = j - 1; i >= 0; --i) {
      Complex s = g(i);
      for (int k = i + 1; k < j; ++k) s -= h(i, k) * y(k);
      y(i) = h(i, i) == Complex{} ? Complex{} : s / h(i, i);
    }
    ComplexVector update = ComplexVector::Zero(n);
    for (int i = 0; i < j; ++i) update += y(i) * v[i];
    m.apply(view(update), view(z));
    out.x += z;

    rnorm = residual_of(out.x);
    const double rel = rnorm / scale;
    if (cfg.record_history) out.history.push_back({iter, rel, true});
    best = std::min(best, rel);
    if (rel <= cfg.tol) {
      out.residual = rel;
      out.iterations = iter;
      return out;
    }
    if (!(rnorm < cycle_start * (1.0 - 1e-9))) {
      throw StagnationError(std::string("gmres: ") + (done ? "Krylov breakdown" : "stagnation") +
                                 " with residual " + std::to_string(best) + " after " +
                                 std::to_string(iter) + " iterations",
                             best, iter);
    }
  }
  throw ConvergenceError("gmres: no convergence within " + std::to_string(cfg.max_iter) +
                             " iterations (best residual " + std::to_string(best) + ")",
                         best, iter);
}

void write_residual_history(std::ostream& os, const std::vector<ResidualSample>& history) {
  os << "iteration,residual,explicit\n";
  os.precision(10);
  for (const auto& s : history) {
    os << s.iteration << ',' << s.residual << ',' << (s.explicit_check ? 1 : 0) << '\n';
  }
}

}  // namespace nvcool::solver
