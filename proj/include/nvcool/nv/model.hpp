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

#include <array>
#include <optional>
#include <vector>

#include "nvcool/linalg/dense.hpp"
#include "nvcool/linalg/sparse.hpp"
#include "nvcool/linalg/superop.hpp"
#include "nvcool/solver/config.hpp"

// Seven-level room-temperature NV model. Internally time is in microseconds
// and coherent couplings in rad/us. Rates k_ij and the pumping rate are
// plain inverse-time rates (1/us, quoted as "MHz"); coherent fields are
// quoted as nu = omega / 2 pi in MHz.
namespace nvcool::nv {

using linalg::ComplexMatrix;

enum Level : int {
  g_plus = 0,
  g_zero = 1,
  g_minus = 2,
  e_plus = 3,
  e_zero = 4,
  e_minus = 5,
  singlet = 6,
};
inline constexpr int kNumLevels = 7;

struct NvParams {
  double k42 = 65.3;
  double k31 = 64.9;
  double k45 = 79.8;
  double k35 = 10.6;
  double k52 = 2.61;
  double k51 = 3.00;
  double t2e_ns = 6.0;
  double t1e_ns = 6.89;
  double d0g_ghz = 2.87;
  double d0e_ghz = 1.42;
  double gamma_nv_mhz_per_g = 2.8;
  double a_par_g_mhz = -2.166;
  double a_par_e_mhz = 40.0;
  double d_perp_g_ghz = 21.5;
  double d_perp_e_ghz = 290.0;
  /// Optional ground-state dephasing time; off when unset.
  std::optional<double> t2g_ns;

  void validate() const;
};

struct DriveParams {
  double omega_e_mhz = 0.0;
  double delta_m_mhz = 0.0;
  double omega_mag_mhz = 0.0;
  double gamma_opt = 0.0;
};

enum class Orbital { ground, excited };

struct SpinLevels {
  /// Energies (MHz) of the upper and lower m_s = +-1 mixed states relative to m_s = 0.
  double upper = 0.0;
  double lower = 0.0;
  double splitting() const noexcept { return upper - lower; }
};

SpinLevels spin_levels(double b_z_gauss, Orbital orbital, int m_i, double strain,
                       const NvParams& p = {});

/// Field (G) at which omega_m matches the +1 <-> -1 splitting.
double resonance_field(double omega_m_mhz, int m_i, double a_par_mhz,
                       double gamma_nv_mhz_per_g = 2.8);

/// Rotating-frame Hamiltonian in rad/us.
ComplexMatrix build_nv_hamiltonian(const DriveParams& d);

std::vector<linalg::LindbladTerm> build_nv_dissipators(const NvParams& p, double gamma_opt);

linalg::SparseMatrix build_nv_liouvillian(const NvParams& p, const DriveParams& d);

struct AlphaResult {
  double alpha = 0.0;
  std::array<double, kNumLevels> populations{};
  int iterations = 0;
  double residual = 0.0;
};

/// Steady-state population difference rho(e-1) - rho(e+1) with the magnetic
/// drive and optical pumping on and no mechanical drive.
AlphaResult steady_state_alpha(double omega_mag_mhz, double gamma_opt, const NvParams& p = {},
                               const solver::SolverConfig& cfg = {});

}  // namespace nvcool::nv
