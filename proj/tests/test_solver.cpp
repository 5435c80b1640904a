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

#include <doctest.h>

#include <sstream>

#include "nvcool/cooling/full_system.hpp"
#include "nvcool/error.hpp"
#include "nvcool/linalg/superop.hpp"
#include "nvcool/nv/model.hpp"
#include "nvcool/solver/gmres.hpp"
#include "nvcool/solver/preconditioner.hpp"
#include "nvcool/solver/steady_state.hpp"
#include "support.hpp"

using namespace nvcool;
using namespace nvcool::linalg;
using namespace nvcool::solver;

namespace {

SparseMatrix two_level(double omega, double gamma, double delta = 0.0) {
  const ComplexMatrix h{{0.0, omega / 2}, {omega / 2, delta}};
  return assemble_liouvillian(h, {{SparseMatrix::from_dense(outer(2, 0, 1)), gamma / 2, "decay"}});
}

SolverConfig config(PreconditionerKind kind) {
  SolverConfig c;
  c.preconditioner = kind;
  return c;
}

}  // namespace

TEST_CASE("solver config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.tol = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.restart = 10;
  c.max_iter = 5;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  CHECK(parse_preconditioner("ilu0") == PreconditionerKind::ilu0);
  CHECK(to_string(PreconditionerKind::jacobi) == "jacobi");
  CHECK_THROWS_AS(parse_preconditioner("schwarz"), InvalidArgument);
}

TEST_CASE("gmres on the identity converges in one iteration") {
  std::mt19937_64 rng(20);
  const ComplexVector b = test::random_matrix(30, 1, rng);
  const auto r = gmres(SparseMatrix::identity(30), b, config(PreconditionerKind::none));
  CHECK(r.iterations == 1);
  CHECK((r.x - b).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("gmres matches a dense LU solve") {
  std::mt19937_64 rng(21);
  const Index n = 100;
  ComplexMatrix a = test::random_sparse_dense(n, n, 0.05, rng);
  for (Index i = 0; i < n; ++i) a(i, i) += Complex(a.row(i).cwiseAbs().sum() + 1.0, 0.5);
  const ComplexVector b = test::random_matrix(n, 1, rng);
  const ComplexVector ref = a.partialPivLu().solve(b);
  const auto s = SparseMatrix::from_dense(a);
  for (auto kind : {PreconditionerKind::none, PreconditionerKind::jacobi, PreconditionerKind::ilu0}) {
    CAPTURE(to_string(kind));
    const auto r = gmres(s, b, config(kind));
    CHECK(r.residual <= 1e-10);
    CHECK((r.x - ref).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("gmres with restarts and a start vector") {
  std::mt19937_64 rng(22);
  const Index n = 80;
  ComplexMatrix a = test::random_sparse_dense(n, n, 0.1, rng);
  for (Index i = 0; i < n; ++i) a(i, i) += a.row(i).cwiseAbs().sum();
  const ComplexVector b = test::random_matrix(n, 1, rng);
  SolverConfig c = config(PreconditionerKind::none);
  c.restart = 5;
  c.record_history = true;
  const auto s = SparseMatrix::from_dense(a);
  const auto r = gmres(s, b, c, ComplexVector(ComplexVector::Ones(n)));
  CHECK(r.residual <= 1e-10);
  CHECK(((s * r.x) - b).norm() / b.norm() <= 1e-10 * 1.001);
  CHECK(r.iterations > 5);
  bool saw_explicit = false;
  for (const auto& h : r.history) saw_explicit = saw_explicit || h.explicit_check;
  CHECK(saw_explicit);
  std::ostringstream os;
  write_residual_history(os, r.history);
  CHECK(os.str().rfind("iteration,residual,explicit\n", 0) == 0);
}

TEST_CASE("gmres reports the best residual on failure") {
  std::mt19937_64 rng(23);
  const Index n = 60;
  const ComplexMatrix a = test::random_matrix(n, n, rng);
  const ComplexVector b = test::random_matrix(n, 1, rng);
  SolverConfig c = config(PreconditionerKind::none);
  c.restart = 2;
  c.max_iter = 4;
  try {
    gmres(SparseMatrix::from_dense(a), b, c);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.best_residual() > 1e-10);
    CHECK(e.best_residual() <= 1.0 + 1e-12);
  }
}

TEST_CASE("gmres with zero right-hand side") {
  const auto r = gmres(SparseMatrix::identity(4), ComplexVector::Zero(4), config(PreconditionerKind::none));
  CHECK(r.x.norm() == 0.0);
  CHECK(r.residual == 0.0);
}

TEST_CASE("gmres is deterministic") {
  const auto a = nv::build_nv_liouvillian(nv::NvParams{}, {5.0, 1.0, 60.0, 130.0});
  const auto c = trace_constrained(a, 7);
  ComplexVector b = ComplexVector::Zero(49);
  b(0) = 1.0;
  const auto r1 = gmres(c, b, config(PreconditionerKind::ilu0));
  const auto r2 = gmres(c, b, config(PreconditionerKind::ilu0));
  CHECK(r1.iterations == r2.iterations);
  CHECK((r1.x.array() == r2.x.array()).all());
}

TEST_CASE("jacobi on a diagonal matrix is the exact inverse") {
  ComplexMatrix d = ComplexMatrix::Zero(6, 6);
  for (Index i = 0; i < 6; ++i) d(i, i) = Complex(1.0 + i, -0.5 * i);
  const auto s = SparseMatrix::from_dense(d);
  const auto p = build_preconditioner(s, PreconditionerKind::jacobi);
  CHECK(p.kind() == PreconditionerKind::jacobi);
  const ComplexVector b = ComplexVector::LinSpaced(6, 1.0, 6.0);
  const auto r = gmres(s, b, config(PreconditionerKind::jacobi));
  CHECK(r.iterations == 1);
  CHECK((d * r.x - b).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("jacobi uses unit scaling on zero diagonals") {
  TripletBuilder tb(2, 2);
  tb.add(0, 1, 2.0);
  tb.add(1, 0, 3.0);
  tb.add(1, 1, 4.0);
  const auto p = build_preconditioner(std::move(tb).finalize(), PreconditionerKind::jacobi);
  std::vector<Complex> in{1.0, 1.0};
  std::vector<Complex> out(2);
  p.apply(in, out);
  CHECK(out[0] == Complex(1.0));
  CHECK(out[1] == Complex(0.25));
}

TEST_CASE("ilu0 falls back to jacobi on a zero pivot") {
  TripletBuilder tb(2, 2);
  tb.add(0, 1, 1.0);
  tb.add(1, 0, 1.0);
  const auto a = std::move(tb).finalize();
  const auto p = build_preconditioner(a, PreconditionerKind::ilu0);
  CHECK(p.requested() == PreconditionerKind::ilu0);
  CHECK(p.kind() == PreconditionerKind::jacobi);
  CHECK(p.fell_back());
  const auto r = gmres(a, ComplexVector::Ones(2), config(PreconditionerKind::ilu0));
  CHECK(r.preconditioner_fell_back);
  CHECK(r.residual < 1e-10);
}

TEST_CASE("ilu0 is exact on a triangular matrix") {
  std::mt19937_64 rng(24);
  ComplexMatrix l = test::random_sparse_dense(20, 20, 0.3, rng).triangularView<Eigen::Lower>();
  for (Index i = 0; i < 20; ++i) l(i, i) = 2.0;
  const auto r = gmres(SparseMatrix::from_dense(l), ComplexVector::Ones(20),
                       config(PreconditionerKind::ilu0));
  CHECK(r.iterations == 1);
}

TEST_CASE("steady state of pure decay is the ground state") {
  const auto r = steady_state(two_level(0.0, 1.0), 2, {});
  CHECK(std::abs(r.rho(0, 0) - 1.0) < 1e-10);
  CHECK(std::abs(r.rho(1, 1)) < 1e-10);
}

TEST_CASE("driven damped two-level atom matches the optical Bloch solution") {
  for (double omega : {0.3, 1.0, 4.0}) {
    for (double gamma : {0.5, 2.0}) {
      const auto r = steady_state(two_level(omega, gamma), 2, {});
      const double ref = omega * omega / (2.0 * omega * omega + gamma * gamma);
      CHECK(r.rho(1, 1).real() == doctest::Approx(ref).epsilon(1e-9));
      // Coherence: rho_eg = i gamma Omega / (gamma^2 + 2 Omega^2) up to sign convention.
      CHECK(std::abs(r.rho(1, 0)) ==
            doctest::Approx(gamma * omega / (gamma * gamma + 2.0 * omega * omega)).epsilon(1e-9));
    }
  }
}

TEST_CASE("steady states are physical and satisfy the residual bound") {
  std::vector<std::pair<SparseMatrix, Index>> problems;
  problems.emplace_back(two_level(1.0, 0.7, 0.3), 2);
  problems.emplace_back(nv::build_nv_liouvillian(nv::NvParams{}, {8.0, 2.0, 60.0, 130.0}), 7);
  problems.emplace_back(nv::build_nv_liouvillian(nv::NvParams{}, {0.0, 0.0, 60.0, 130.0}), 7);
  cooling::ValidationScenario s;
  s.n_ph = 9;
  s.n_th = 0.2;
  const auto fs = cooling::build_full_system(s);
  problems.emplace_back(fs.liouvillian, fs.dim);
  for (const auto& [a, dim] : problems) {
    CAPTURE(dim);
    SolverConfig cfg;
    const auto r = steady_state(a, dim, cfg);
    CHECK(std::abs(r.rho.trace() - 1.0) < 1e-9);
    CHECK(hermiticity_defect(r.rho) < 1e-9);
    CHECK(r.min_eigenvalue >= -1e-8);
    CHECK(r.iterations < 5000);
    CHECK(r.liouvillian_residual <= 10.0 * cfg.tol * a.max_abs());
  }
}

TEST_CASE("seven-level NV steady state converges with ilu0") {
  const auto a = nv::build_nv_liouvillian(nv::NvParams{}, {0.0, 0.0, 60.0, 130.0});
  const auto r = steady_state(a, 7, config(PreconditionerKind::ilu0));
  CHECK(r.iterations < 5000);
  CHECK_FALSE(r.preconditioner_fell_back);
}

TEST_CASE("preconditioned and unpreconditioned steady states agree") {
  const auto a = nv::build_nv_liouvillian(nv::NvParams{}, {8.0, 2.0, 60.0, 130.0});
  const auto r0 = steady_state(a, 7, config(PreconditionerKind::none));
  const auto r1 = steady_state(a, 7, config(PreconditionerKind::jacobi));
  const auto r2 = steady_state(a, 7, config(PreconditionerKind::ilu0));
  CHECK(test::max_abs(r0.rho - r2.rho) < 1e-8);
  CHECK(test::max_abs(r1.rho - r2.rho) < 1e-8);
}

TEST_CASE("degenerate steady states are rejected") {
  // No dynamics at all: every state is stationary.
  const auto a = assemble_liouvillian(ComplexMatrix(ComplexMatrix::Zero(2, 2)), {});
  CHECK_THROWS_AS(steady_state(a, 2, {}), DegenerateSteadyState);
  // Two independent decaying pairs in a 4-level space.
  const std::vector<LindbladTerm> terms{{SparseMatrix::from_dense(outer(4, 0, 1)), 1.0, "a"},
                                        {SparseMatrix::from_dense(outer(4, 2, 3)), 1.0, "b"}};
  CHECK_THROWS_AS(steady_state(assemble_liouvillian(ComplexMatrix(ComplexMatrix::Zero(4, 4)), terms), 4, {}),
                  DegenerateSteadyState);
}

TEST_CASE("ilu0 reduces iterations on a two-NV scenario" * doctest::timeout(600)) {
  cooling::ValidationScenario s;
  s.n_nv = 2;
  s.n_ph = 10;
  s.n_th = 0.1;
  const auto fs = cooling::build_full_system(s);
  const auto a = trace_constrained(fs.liouvillian, fs.dim);
  ComplexVector b = ComplexVector::Zero(a.rows());
  b(0) = 1.0;
  const ComplexVector x0 = vectorize(ComplexMatrix::Identity(fs.dim, fs.dim) / double(fs.dim));
  SolverConfig ilu = config(PreconditionerKind::ilu0);
  ilu.threads = 4;
  const auto r_ilu = gmres(a, b, ilu, x0);
  MESSAGE("ilu0 iterations: " << r_ilu.iterations);
  // The unpreconditioned solve only needs to be followed far enough to show the 2x gap.
  SolverConfig none = config(PreconditionerKind::none);
  none.threads = 4;
  none.max_iter = std::max(2 * r_ilu.iterations, none.restart);
  int none_iters = 0;
  try {
    none_iters = gmres(a, b, none, x0).iterations;
  } catch (const ConvergenceError&) {
    none_iters = none.max_iter + 1;
  }
  const std::string shown = none_iters > none.max_iter ? "> " + std::to_string(none.max_iter)
                                                       : std::to_string(none_iters);
  MESSAGE("unpreconditioned iterations: " << shown);
  CHECK(none_iters >= 2 * r_ilu.iterations);
}
