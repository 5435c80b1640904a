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

#include "nvcool/cooling/full_system.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "nvcool/constants.hpp"
#include "nvcool/cooling/moments.hpp"
#include "nvcool/error.hpp"
#include "nvcool/linalg/superop.hpp"
#include "nvcool/solver/steady_state.hpp"

namespace nvcool::cooling {

using linalg::ComplexMatrix;
using linalg::LindbladTerm;
using linalg::SparseMatrix;

namespace {

SparseMatrix annihilation(int n_ph) {
  linalg::TripletBuilder t(n_ph, n_ph);
  for (int k = 1; k < n_ph; ++k) t.add(k - 1, k, std::sqrt(static_cast<double>(k)));
  return std::move(t).finalize();
}

// I_before (x) op (x) I_after.
SparseMatrix lift(const SparseMatrix& op, Index before, Index after) {
  return linalg::kron(linalg::kron(SparseMatrix::identity(before), op),
                      SparseMatrix::identity(after));
}

Index ipow(Index base, int e) {
  Index r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

Index ValidationScenario::nv_dim() const { return ipow(nv::kNumLevels, n_nv); }

Index ValidationScenario::hilbert_dim() const { return nv_dim() * n_ph; }

double ValidationScenario::gamma() const {
  return constants::mhz_to_rad_per_us(omega_m_mhz) / quality;
}

void ValidationScenario::validate() const {
  if (n_nv < 1 || n_nv > 4) throw InvalidArgument("scenario: n_nv must be between 1 and 4");
  if (n_ph < 2) throw InvalidArgument("scenario: n_ph must be at least 2");
  if (!(n_th >= 0.0)) throw InvalidArgument("scenario: n_th must be non-negative");
  if (!(quality > 0.0) || !(omega_m_mhz > 0.0)) {
    throw InvalidArgument("scenario: omega_m and Q must be positive");
  }
  if (lambda_mhz < 0.0) throw InvalidArgument("scenario: lambda must be non-negative");
  if (n_ph < 4.0 * n_th + 8.0) {
    throw InvalidArgument("scenario: n_ph = " + std::to_string(n_ph) +
                          " is below the truncation rule 4 n_th + 8");
  }
  nv.validate();
  const std::size_t need = estimated_memory(*this);
  if (need > memory_budget_bytes) {
    throw BudgetExceeded("scenario: N = " + std::to_string(hilbert_dim()) + " needs about " +
                         std::to_string(need >> 20) + " MiB, budget is " +
                         std::to_string(memory_budget_bytes >> 20) +
                         " MiB; lower n_ph or the NV count");
  }
}

std::size_t estimated_memory(const ValidationScenario& s) {
  const auto n = static_cast<double>(s.hilbert_dim());
  const double n2 = n * n;
  const double nnz = 10.0 * n2;
  // Liouvillian, constrained copy and ILU factors in CSR, plus the Krylov basis.
  const double csr = 3.0 * (nnz * 20.0 + n2 * 8.0);
  const double krylov = (s.solver.restart + 4.0) * n2 * 16.0;
  return static_cast<std::size_t>(csr + krylov);
}

FullSystem build_full_system(const ValidationScenario& s) {
  s.validate();
  const Index nv_dim = s.nv_dim();
  const Index n = s.hilbert_dim();
  const SparseMatrix h_nv = SparseMatrix::from_dense(nv::build_nv_hamiltonian(s.drive));
  const auto nv_terms = nv::build_nv_dissipators(s.nv, s.drive.gamma_opt);
  const SparseMatrix a = lift(annihilation(s.n_ph), nv_dim, 1);
  const SparseMatrix ad = a.adjoint();
  const SparseMatrix raise =
      SparseMatrix::from_dense(linalg::outer(nv::kNumLevels, nv::e_plus, nv::e_minus));
  const double lambda = constants::mhz_to_rad_per_us(s.lambda_mhz);

  linalg::TripletBuilder h(n, n);
  std::vector<LindbladTerm> terms;
  for (int k = 0; k < s.n_nv; ++k) {
    const Index before = ipow(nv::kNumLevels, k);
    const Index after = ipow(nv::kNumLevels, s.n_nv - k - 1) * s.n_ph;
    h.add_matrix(lift(h_nv, before, after));
    const SparseMatrix sp = lift(raise, before, after);
    if (lambda != 0.0) {
      h.add_matrix(sp * a, lambda);
      h.add_matrix(sp.adjoint() * ad, lambda);
    }
    for (const auto& t : nv_terms) {
      terms.push_back({lift(t.op, before, after), t.rate, "nv" + std::to_string(k) + " " + t.label});
    }
  }
  const double g = s.gamma();
  terms.push_back({a, 0.5 * g * (s.n_th + 1.0), "phonon loss"});
  terms.push_back({ad, 0.5 * g * s.n_th, "phonon gain"});

  FullSystem out;
  out.liouvillian = linalg::assemble_liouvillian(std::move(h).finalize(), terms);
  out.dim = n;
  out.nv_dim = nv_dim;
  out.n_ph = s.n_ph;
  return out;
}

ComplexMatrix phonon_marginal(const ComplexMatrix& rho, int n_ph) {
  if (n_ph < 1 || rho.rows() % n_ph != 0 || rho.rows() != rho.cols()) {
    throw DimensionError("phonon_marginal: density matrix does not factor over the phonon space");
  }
  const Index blocks = rho.rows() / n_ph;
  ComplexMatrix out = ComplexMatrix::Zero(n_ph, n_ph);
  for (Index s = 0; s < blocks; ++s) out += rho.block(s * n_ph, s * n_ph, n_ph, n_ph);
  return out;
}

double truncated_thermal_mean(double n_th, int n_ph) {
  if (n_th < 0.0 || n_ph < 1) throw InvalidArgument("truncated_thermal_mean: bad arguments");
  if (n_th == 0.0) return 0.0;
  const double q = n_th / (n_th + 1.0);
  double z = 0.0;
  double m = 0.0;
  double w = 1.0;
  for (int k = 0; k < n_ph; ++k) {
    z += w;
    m += k * w;
    w *= q;
  }
  return m / z;
}

ValidationResult validate_two_level(const ValidationScenario& s) {
  const FullSystem sys = build_full_system(s);
  ValidationResult r;
  r.dim = sys.dim;
  r.mean_nnz_per_row = sys.liouvillian.mean_nnz_per_row();
  r.max_nnz_per_row = sys.liouvillian.max_nnz_per_row();

  const auto ss = solver::steady_state(sys.liouvillian, sys.dim, s.solver);
  r.iterations = ss.iterations;
  r.residual = ss.residual;
  r.trace_error = std::abs(ss.rho.trace() - 1.0);
  r.hermiticity = linalg::hermiticity_defect(ss.rho);
  r.min_eigenvalue = std::isnan(ss.min_eigenvalue) ? linalg::min_hermitian_eigenvalue(ss.rho)
                                                   : ss.min_eigenvalue;

  const ComplexMatrix ph = phonon_marginal(ss.rho, s.n_ph);
  double n = 0.0;
  for (int k = 0; k < s.n_ph; ++k) n += k * ph(k, k).real();
  r.n_f_full_raw = n;
  r.truncation_baseline = truncated_thermal_mean(s.n_th, s.n_ph);
  r.n_f_full = r.truncation_baseline > 0.0 ? n * s.n_th / r.truncation_baseline : n;

  solver::SolverConfig small = s.solver;
  small.threads = 1;
  r.alpha = nv::steady_state_alpha(s.drive.omega_mag_mhz, s.drive.gamma_opt, s.nv, small).alpha;
  r.lambda_eff_mhz = s.lambda_mhz * std::sqrt(s.n_nv * std::max(r.alpha, 0.0));

  CoolingParams p;
  p.lambda_eff = constants::mhz_to_rad_per_us(r.lambda_eff_mhz);
  p.omega_m = constants::mhz_to_rad_per_us(s.omega_m_mhz);
  p.quality = s.quality;
  p.n_th = s.n_th;
  p.gamma_perp = constants::ns_per_us / s.nv.t1e_ns;
  p.gamma_par = constants::ns_per_us / s.nv.t2e_ns;
  r.n_f_two = steady_state_moments(p).n_f;
  r.relative_error = r.n_f_full > 0.0 ? std::abs(r.n_f_two - r.n_f_full) / r.n_f_full : 0.0;
  return r;
}

}  // namespace nvcool::cooling
