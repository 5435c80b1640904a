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

#include <functional>
#include <vector>

namespace nvcool::nv {

/// Depth profile of the ensemble: pumping rate Gamma0 sinc^2(kappa (z - z0))
/// and strain amplitude |sin(2 pi z / lambda)|. Lengths in um.
struct EnsembleProfile {
  double gamma0 = 19.1;
  double z0 = 7.9;
  double kappa_psf = 0.2783;
  double lambda_strain = 31.0;
  double z_max = 100.0;
  int n_z = 400;

  void validate() const;
  double pumping_rate(double z) const;
  double strain_factor(double z) const;
};

/// Quadrature nodes over [0, z_max] with the PSF weight folded in.
struct PsfGrid {
  std::vector<double> z;
  /// Quadrature weight times Gamma_opt(z).
  std::vector<double> weight;
  std::vector<double> gamma_opt;
  std::vector<double> strain_factor;
  /// Integral of Gamma_opt over [0, z_max].
  double norm = 0.0;
};

/// Composite Gauss-Legendre grid with roughly n_z nodes. Panels break at the
/// kinks of |sin| and around the PSF focus.
PsfGrid make_psf_grid(const EnsembleProfile& prof);

using EnsembleSignal = std::function<double(double gamma_opt, double omega_e_mhz)>;

/// Integral of signal(Gamma(z), Omega0 s(z)) Gamma(z) dz divided by the integral of Gamma(z).
/// Node evaluations may run on `threads` workers; the sum is taken in node order.
double psf_average(const EnsembleSignal& signal, const EnsembleProfile& prof, double omega0_mhz,
                   int threads = 1);

/// a_plus P(0) + a_zero P(A) + a_minus P(2A).
double hyperfine_sum(const std::function<double(double delta_m_mhz)>& p, double a_plus,
                     double a_zero, double a_minus, double a_par_mhz);

}  // namespace nvcool::nv
