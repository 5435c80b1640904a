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

#include "nvcool/error.hpp"
#include "nvcool/linalg/superop.hpp"
#include "nvcool/nv/model.hpp"
#include "support.hpp"

using namespace nvcool;
using namespace nvcool::linalg;
using test::max_abs;

namespace {

// Reference action of the Lindblad generator on a dense rho.
ComplexMatrix lindblad_action(const ComplexMatrix& h, const std::vector<LindbladTerm>& terms,
                              const ComplexMatrix& rho) {
  ComplexMatrix out = -kI * (h * rho - rho * h);
  for (const auto& t : terms) {
    const ComplexMatrix c = t.op.to_dense();
    const ComplexMatrix cdc = c.adjoint() * c;
    out += t.rate * (2.0 * c * rho * c.adjoint() - cdc * rho - rho * cdc);
  }
  return out;
}

}  // namespace

TEST_CASE("kron of identities is the identity") {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  CHECK(max_abs(linalg::kron(i2, i2) - ComplexMatrix::Identity(4, 4)) == 0.0);
  const auto s = linalg::kron(SparseMatrix::identity(2), SparseMatrix::identity(2));
  CHECK(max_abs(s.to_dense() - ComplexMatrix::Identity(4, 4)) == 0.0);
}

TEST_CASE("kron block structure and vec identity") {
  std::mt19937_64 rng(1);
  const ComplexMatrix a = test::random_matrix(3, 2, rng);
  const ComplexMatrix b = test::random_matrix(2, 4, rng);
  const ComplexMatrix k = linalg::kron(a, b);
  REQUIRE(k.rows() == 6);
  REQUIRE(k.cols() == 8);
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j < 2; ++j) {
      CHECK(max_abs(k.block(i * 2, j * 4, 2, 4) - a(i, j) * b) == 0.0);
    }
  }

  for (Index n : {3, 4}) {
    const ComplexMatrix x = test::random_matrix(n, n, rng);
    const ComplexMatrix aa = test::random_matrix(n, n, rng);
    const ComplexMatrix bb = test::random_matrix(n, n, rng);
    const ComplexVector lhs = linalg::kron(bb.transpose(), aa) * vectorize(x);
    CHECK((lhs - vectorize(aa * x * bb)).cwiseAbs().maxCoeff() < 1e-12);
  }

  const ComplexMatrix sx{{0.0, 1.0}, {1.0, 0.0}};
  const ComplexMatrix rho = test::random_matrix(2, 2, rng);
  const ComplexVector v = linalg::kron(sx, ComplexMatrix::Identity(2, 2)) * vectorize(rho);
  CHECK(max_abs(devectorize(v) - rho * sx.transpose()) < 1e-15);
}

TEST_CASE("sparse kron stores n1 * n2 entries and matches dense") {
  std::mt19937_64 rng(2);
  const ComplexMatrix a = test::random_sparse_dense(5, 4, 0.4, rng);
  const ComplexMatrix b = test::random_sparse_dense(3, 6, 0.3, rng);
  const auto sa = SparseMatrix::from_dense(a);
  const auto sb = SparseMatrix::from_dense(b);
  const auto k = linalg::kron(sa, sb);
  CHECK(k.nnz() == sa.nnz() * sb.nnz());
  CHECK(max_abs(k.to_dense() - linalg::kron(a, b)) == 0.0);
}

TEST_CASE("kron is associative") {
  std::mt19937_64 rng(3);
  const ComplexMatrix a = test::random_matrix(2, 3, rng);
  const ComplexMatrix b = test::random_matrix(3, 2, rng);
  const ComplexMatrix c = test::random_matrix(2, 2, rng);
  CHECK(max_abs(linalg::kron(linalg::kron(a, b), c) - linalg::kron(a, linalg::kron(b, c))) <
        1e-13);
  const auto sa = SparseMatrix::from_dense(a);
  const auto sb = SparseMatrix::from_dense(b);
  const auto sc = SparseMatrix::from_dense(c);
  CHECK(max_abs((linalg::kron(linalg::kron(sa, sb), sc) - linalg::kron(sa, linalg::kron(sb, sc)))
                    .to_dense()) < 1e-13);
}

TEST_CASE("kron rejects index overflow") {
  const auto big = SparseMatrix::zero(1, Index{1} << 20);
  CHECK_THROWS_AS(linalg::kron(big, big), DimensionError);
}

TEST_CASE("vectorize uses column stacking") {
  const ComplexMatrix m{{1.0, 2.0}, {3.0, 4.0}};
  const ComplexVector v = vectorize(m);
  REQUIRE(v.size() == 4);
  CHECK(v(0) == Complex(1.0));
  CHECK(v(1) == Complex(3.0));
  CHECK(v(2) == Complex(2.0));
  CHECK(v(3) == Complex(4.0));
}

TEST_CASE("vectorize round trip is bit exact") {
  std::mt19937_64 rng(4);
  const ComplexMatrix rho = test::random_matrix(7, 7, rng);
  CHECK((devectorize(vectorize(rho), 7).array() == rho.array()).all());
  CHECK((devectorize(vectorize(rho)).array() == rho.array()).all());
}

TEST_CASE("vectorize rejects bad shapes") {
  CHECK_THROWS_AS(vectorize(ComplexMatrix::Zero(2, 3)), DimensionError);
  CHECK_THROWS_AS(devectorize(ComplexVector::Zero(5), 2), DimensionError);
  CHECK_THROWS_AS(devectorize(ComplexVector::Zero(5)), DimensionError);
}

TEST_CASE("sparse matrix invariants") {
  SUBCASE("builder sums duplicates and drops cancellations") {
    TripletBuilder b(3, 3);
    b.add(0, 2, 1.0);
    b.add(0, 0, 2.0);
    b.add(0, 2, 0.5);
    b.add(1, 1, 1.0);
    b.add(1, 1, -1.0);
    b.add(2, 0, Complex(0.0, 1.0));
    const auto m = std::move(b).finalize();
    CHECK(m.nnz() == 3);
    CHECK(m.coeff(0, 2) == Complex(1.5));
    CHECK(m.coeff(1, 1) == Complex(0.0));
    const auto offs = m.row_offsets();
    const auto cols = m.col_indices();
    for (Index i = 0; i < m.rows(); ++i) {
      CHECK(offs[i] <= offs[i + 1]);
      for (Index k = offs[i] + 1; k < offs[i + 1]; ++k) CHECK(cols[k - 1] < cols[k]);
    }
    for (const auto& v : m.values()) CHECK(v != Complex(0.0));
  }
  SUBCASE("validating constructor") {
    CHECK_THROWS_AS(SparseMatrix(2, 2, {0, 2, 2}, {1, 0}, {1.0, 1.0}), DimensionError);
    CHECK_THROWS_AS(SparseMatrix(2, 2, {0, 1, 2}, {0, 1}, {1.0, 0.0}), DimensionError);
    CHECK_THROWS_AS(SparseMatrix(2, 2, {0, 1, 1}, {0, 1}, {1.0, 1.0}), DimensionError);
    CHECK_NOTHROW(SparseMatrix(2, 2, {0, 1, 2}, {1, 0}, {1.0, 2.0}));
  }
  SUBCASE("out of range triplets") {
    TripletBuilder b(2, 2);
    CHECK_THROWS_AS(b.add(2, 0, 1.0), DimensionError);
    CHECK_THROWS_AS(b.add(0, -1, 1.0), DimensionError);
  }
}

TEST_CASE("sparse arithmetic matches dense") {
  std::mt19937_64 rng(5);
  const ComplexMatrix a = test::random_sparse_dense(6, 6, 0.4, rng);
  const ComplexMatrix b = test::random_sparse_dense(6, 6, 0.4, rng);
  const auto sa = SparseMatrix::from_dense(a);
  const auto sb = SparseMatrix::from_dense(b);
  CHECK(max_abs((sa + sb).to_dense() - (a + b)) < 1e-15);
  CHECK(max_abs((sa - sb).to_dense() - (a - b)) < 1e-15);
  CHECK(max_abs((sa * sb).to_dense() - a * b) < 1e-13);
  CHECK(max_abs(sa.transpose().to_dense() - a.transpose()) == 0.0);
  CHECK(max_abs(sa.adjoint().to_dense() - a.adjoint()) == 0.0);
  CHECK(max_abs(sa.conjugate().to_dense() - a.conjugate()) == 0.0);
  CHECK(max_abs(sa.scaled(Complex(0.0, 2.0)).to_dense() - Complex(0.0, 2.0) * a) < 1e-15);
}

TEST_CASE("sparse matvec agrees with dense up to dimension 200") {
  std::mt19937_64 rng(6);
  for (Index n : {1, 7, 50, 200}) {
    const ComplexMatrix a = test::random_sparse_dense(n, n, 0.05, rng);
    const ComplexVector x = test::random_matrix(n, 1, rng);
    const auto s = SparseMatrix::from_dense(a);
    CHECK((s * x - a * x).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("threaded matvec is bitwise deterministic") {
  std::mt19937_64 rng(7);
  const Index n = 997;
  const auto s = SparseMatrix::from_dense(test::random_sparse_dense(n, n, 0.02, rng));
  const ComplexVector x = test::random_matrix(n, 1, rng);
  ComplexVector y1(n);
  ComplexVector y4(n);
  s.multiply(std::span<const Complex>(x.data(), n), std::span<Complex>(y1.data(), n), 1);
  s.multiply(std::span<const Complex>(x.data(), n), std::span<Complex>(y4.data(), n), 4);
  CHECK((y1.array() == y4.array()).all());
}

TEST_CASE("matrix market dump") {
  TripletBuilder b(2, 3);
  b.add(0, 1, Complex(1.5, -2.0));
  b.add(1, 2, 3.0);
  std::ostringstream os;
  write_matrix_market(os, std::move(b).finalize());
  const std::string s = os.str();
  CHECK(s.rfind("%%MatrixMarket matrix coordinate complex general", 0) == 0);
  CHECK(s.find("2 3 2\n") != std::string::npos);
  CHECK(s.find("1 2 1.5 -2") != std::string::npos);
  CHECK(s.find("2 3 3 0") != std::string::npos);
}

TEST_CASE("dissipator on two-level decay") {
  // Basis (g, e); C = |g><e|.
  const ComplexMatrix c = outer(2, 0, 1);
  const double gamma = 0.7;
  const auto d = dissipator_superop(c, gamma);
  const ComplexMatrix rho = outer(2, 1, 1);
  const ComplexMatrix drho = apply_superop(d, rho);
  CHECK(std::abs(drho(1, 1) - Complex(-2.0 * gamma)) < 1e-15);
  CHECK(std::abs(drho(0, 0) - Complex(2.0 * gamma)) < 1e-15);

  CHECK(dissipator_superop(c, 0.0).nnz() == 0);
  CHECK_THROWS_AS(dissipator_superop(c, -1.0), InvalidArgument);
}

TEST_CASE("dissipators preserve trace") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix c = test::random_matrix(5, 5, rng);
    const ComplexMatrix rho = test::random_density(5, rng);
    const auto d = dissipator_superop(c, 0.3 + trial);
    CHECK(std::abs(apply_superop(d, rho).trace()) < 1e-12);
    const ComplexMatrix ref =
        (0.3 + trial) * (2.0 * c * rho * c.adjoint() - c.adjoint() * c * rho - rho * c.adjoint() * c);
    CHECK(max_abs(apply_superop(d, rho) - ref) < 1e-12);
  }
}

TEST_CASE("hamiltonian superop") {
  SUBCASE("commuting diagonal case") {
    const ComplexMatrix h = ComplexMatrix(Eigen::VectorXcd::LinSpaced(3, 1.0, 3.0).asDiagonal());
    const ComplexMatrix rho = ComplexMatrix(Eigen::VectorXcd::LinSpaced(3, 0.2, 0.5).asDiagonal());
    CHECK(max_abs(apply_superop(hamiltonian_superop(h), rho)) == 0.0);
  }
  SUBCASE("sigma_x on |0><0|") {
    const ComplexMatrix sx{{0.0, 1.0}, {1.0, 0.0}};
    const ComplexMatrix drho = apply_superop(hamiltonian_superop(sx), outer(2, 0, 0));
    // -i [sx, |0><0|] = -i (|1><0| - |0><1|)
    CHECK(std::abs(drho(0, 1) - Complex(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(drho(1, 0) - Complex(0.0, -1.0)) < 1e-15);
    CHECK(std::abs(drho(0, 0)) == 0.0);
  }
  SUBCASE("general complex H uses the transpose") {
    std::mt19937_64 rng(9);
    ComplexMatrix g = test::random_matrix(4, 4, rng);
    const ComplexMatrix h = g + g.adjoint();
    const ComplexMatrix rho = test::random_density(4, rng);
    const ComplexMatrix drho = apply_superop(hamiltonian_superop(h), rho);
    CHECK(max_abs(drho - (-kI * (h * rho - rho * h))) < 1e-12);
    CHECK(hermiticity_defect(drho) < 1e-12);
    // The untransposed form differs for complex H.
    const ComplexMatrix i4 = ComplexMatrix::Identity(4, 4);
    const ComplexMatrix naive = -kI * (linalg::kron(i4, h) - linalg::kron(h, i4));
    CHECK((naive * vectorize(rho) - vectorize(drho)).cwiseAbs().maxCoeff() > 1e-6);
  }
}

TEST_CASE("dephasing superop") {
  const ComplexMatrix z{{1.0, 0.0}, {0.0, -1.0}};
  const ComplexMatrix rho{{0.6, Complex(0.1, 0.2)}, {Complex(0.1, -0.2), 0.4}};
  const ComplexMatrix d = apply_superop(dephasing_superop(SparseMatrix::from_dense(z), 0.5), rho);
  CHECK(std::abs(d(0, 0)) < 1e-15);
  CHECK(std::abs(d(0, 1) - (-1.0) * rho(0, 1)) < 1e-15);
}

TEST_CASE("assemble_liouvillian") {
  SUBCASE("empty") {
    const auto a = assemble_liouvillian(ComplexMatrix::Zero(3, 3), {});
    CHECK(a.rows() == 9);
    CHECK(a.nnz() == 0);
  }
  SUBCASE("hand-built two-level atom") {
    // H = (Omega/2) sx + Delta |e><e|, decay rate g on D[|g><e|]. Basis (g, e),
    // vec order (gg, eg, ge, ee).
    const double om = 1.3;
    const double de = 0.4;
    const double g = 0.25;
    const ComplexMatrix h{{0.0, om / 2}, {om / 2, de}};
    const std::vector<LindbladTerm> terms{{SparseMatrix::from_dense(outer(2, 0, 1)), g, "decay"}};
    const ComplexMatrix a = assemble_liouvillian(h, terms).to_dense();
    const Complex i = kI;
    ComplexMatrix ref(4, 4);
    const double w = om / 2;
    // d rho_gg, d rho_eg, d rho_ge, d rho_ee
    ref << 0.0, -i * w, i * w, 2.0 * g,
           -i * w, -i * de - g, 0.0, i * w,
           i * w, 0.0, i * de - g, -i * w,
           0.0, i * w, -i * w, -2.0 * g;
    CHECK(max_abs(a - ref) < 1e-14);
  }
  SUBCASE("matches dense generator and preserves trace") {
    std::mt19937_64 rng(10);
    ComplexMatrix g = test::random_matrix(5, 5, rng);
    const ComplexMatrix h = g + g.adjoint();
    std::vector<LindbladTerm> terms;
    for (int k = 0; k < 3; ++k) {
      terms.push_back({SparseMatrix::from_dense(test::random_matrix(5, 5, rng)), 0.2 * (k + 1),
                       "t" + std::to_string(k)});
    }
    const auto a = assemble_liouvillian(h, terms);
    for (int trial = 0; trial < 4; ++trial) {
      const ComplexMatrix rho = test::random_density(5, rng);
      const ComplexMatrix d = apply_superop(a, rho);
      CHECK(max_abs(d - lindblad_action(h, terms, rho)) < 1e-11);
      CHECK(std::abs(d.trace()) < 1e-12);
    }
  }
  SUBCASE("dimension mismatch names the term") {
    const std::vector<LindbladTerm> terms{
        {SparseMatrix::identity(2), 1.0, "ok"},
        {SparseMatrix::identity(3), 1.0, "wrong size"},
    };
    try {
      assemble_liouvillian(ComplexMatrix::Zero(2, 2), terms);
      FAIL("expected DimensionError");
    } catch (const DimensionError& e) {
      CHECK(std::string(e.what()).find("wrong size") != std::string::npos);
    }
  }
  SUBCASE("seven-level NV has fewer than 10 nonzeros per row") {
    nv::DriveParams d{12.0, 3.0, 60.0, 130.0};
    const auto a = nv::build_nv_liouvillian(nv::NvParams{}, d);
    CHECK(a.rows() == 49);
    CHECK(a.max_nnz_per_row() < 10);
    std::mt19937_64 rng(11);
    CHECK(std::abs(apply_superop(a, test::random_density(7, rng)).trace()) < 1e-12);
  }
}

TEST_CASE("dense helpers") {
  const ComplexMatrix h{{1.0, Complex(0.0, 2.0)}, {Complex(0.0, -2.0), 1.0}};
  CHECK(hermiticity_defect(h) == 0.0);
  CHECK(min_hermitian_eigenvalue(h) == doctest::Approx(-1.0));
  CHECK(hermiticity_defect(outer(3, 0, 2)) == 1.0);
}
