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

#include "nvcool/nv/model.hpp"

#include <cmath>
#include <string>

#include "nvcool/constants.hpp"
#include "nvcool/error.hpp"
#include "nvcool/solver/steady_state.hpp"

namespace nvcool::nv {

using constants::mhz_to_rad_per_us;
using linalg::LindbladTerm;
using linalg::SparseMatrix;

namespace {

// k * L_{i,f} equals (k/2) D[|f><i|].
LindbladTerm jump(int from, int to, double rate, std::string label) {
  return {SparseMatrix::from_dense(linalg::outer(kNumLevels, to, from)), 0.5 * rate,
          std::move(label)};
}

const char* level_name(int i) {
  static constexpr const char* names[] = {"g+1", "g0", "g-1", "e+1", "e0", "e-1", "S1"};
  return names[i];
}

}  // namespace

void NvParams::validate() const {
  for (double k : {k42, k31, k45, k35, k52, k51}) {
    if (!(k >= 0.0)) throw InvalidArgument("NvParams: relaxation rates must be non-negative");
  }
  if (!(t2e_ns > 0.0) || !(t1e_ns > 0.0)) {
    throw InvalidArgument("NvParams: T1e and T2e must be positive");
  }
  if (!(gamma_nv_mhz_per_g > 0.0)) throw InvalidArgument("NvParams: gamma_nv must be positive");
  if (t2g_ns && !(*t2g_ns > 0.0)) throw InvalidArgument("NvParams: T2g must be positive");
}

SpinLevels spin_levels(double b_z_gauss, Orbital orbital, int m_i, double strain,
                       const NvParams& p) {
  if (b_z_gauss < 0.0) throw InvalidArgument("spin_levels: B_z must be non-negative");
  if (m_i < -1 || m_i > 1) throw InvalidArgument("spin_levels: m_I must be -1, 0 or +1");
  const bool ground = orbital == Orbital::ground;
  const double d0 = 1e3 * (ground ? p.d0g_ghz : p.d0e_ghz);
  const double a_par = ground ? p.a_par_g_mhz : p.a_par_e_mhz;
  const double d_perp = 1e3 * (ground ? p.d_perp_g_ghz : p.d_perp_e_ghz);
  // The m_s = 0 state decouples; +1 and -1 mix through the strain term.
  const double zeeman = p.gamma_nv_mhz_per_g * b_z_gauss + a_par * m_i;
  const double coupling = d_perp * strain;
  const double root = std::hypot(zeeman, coupling);
  return {d0 + root, d0 - root};
}

double resonance_field(double omega_m_mhz, int m_i, double a_par_mhz, double gamma_nv_mhz_per_g) {
  if (!(omega_m_mhz > 0.0)) throw InvalidArgument("resonance_field: omega_m must be positive");
  if (!(gamma_nv_mhz_per_g > 0.0)) {
    throw InvalidArgument("resonance_field: gamma_nv must be positive");
  }
  return (0.5 * omega_m_mhz - a_par_mhz * m_i) / gamma_nv_mhz_per_g;
}

ComplexMatrix build_nv_hamiltonian(const DriveParams& d) {
  ComplexMatrix h = ComplexMatrix::Zero(kNumLevels, kNumLevels);
  const double half_e = 0.5 * mhz_to_rad_per_us(d.omega_e_mhz);
  h(e_plus, e_minus) = half_e;
  h(e_minus, e_plus) = half_e;
  h(e_plus, e_plus) = mhz_to_rad_per_us(d.delta_m_mhz);
  const double half_mag = 0.5 * mhz_to_rad_per_us(d.omega_mag_mhz);
  h(g_zero, g_minus) = half_mag;
  h(g_minus, g_zero) = half_mag;
  return h;
}

std::vector<LindbladTerm> build_nv_dissipators(const NvParams& p, double gamma_opt) {
  p.validate();
  if (!(gamma_opt >= 0.0)) throw InvalidArgument("optical pumping rate must be non-negative");
  std::vector<LindbladTerm> terms;
  auto add = [&](int from, int to, double rate, const char* kind) {
    terms.push_back(jump(from, to, rate,
                         std::string(kind) + " " + level_name(from) + "->" + level_name(to)));
  };
  add(g_plus, e_plus, gamma_opt, "pump");
  add(g_zero, e_zero, gamma_opt, "pump");
  add(g_minus, e_minus, gamma_opt, "pump");
  for (int s : {+1, -1}) {
    const int g = s > 0 ? g_plus : g_minus;
    const int e = s > 0 ? e_plus : e_minus;
    add(e, g, p.k42, "k42");
    add(e, singlet, p.k45, "k45");
    add(singlet, g, p.k52, "k52");
  }
  add(e_zero, g_zero, p.k31, "k31");
  add(e_zero, singlet, p.k35, "k35");
  add(singlet, g_zero, p.k51, "k51");
  const double dephase = constants::ns_per_us / p.t2e_ns;
  for (int e : {e_plus, e_zero, e_minus}) add(e, e, dephase, "T2e");
  if (p.t2g_ns) {
    const double gs = constants::ns_per_us / *p.t2g_ns;
    for (int g : {g_plus, g_zero, g_minus}) add(g, g, gs, "T2g");
  }
  return terms;
}

SparseMatrix build_nv_liouvillian(const NvParams& p, const DriveParams& d) {
  return linalg::assemble_liouvillian(build_nv_hamiltonian(d), build_nv_dissipators(p, d.gamma_opt));
}

AlphaResult steady_state_alpha(double omega_mag_mhz, double gamma_opt, const NvParams& p,
                               const solver::SolverConfig& cfg) {
  if (omega_mag_mhz < 0.0 || gamma_opt < 0.0) {
    throw InvalidArgument("steady_state_alpha: fields must be non-negative");
  }
  DriveParams d;
  d.omega_mag_mhz = omega_mag_mhz;
  d.gamma_opt = gamma_opt;
  const auto ss = solver::steady_state(build_nv_liouvillian(p, d), kNumLevels, cfg);
  AlphaResult out;
  for (int i = 0; i < kNumLevels; ++i) out.populations[i] = ss.rho(i, i).real();
  out.alpha = out.populations[e_minus] - out.populations[e_plus];
  out.iterations = ss.iterations;
  out.residual = ss.residual;
  return out;
}

}  // namespace nvcool::nv
