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
#include <span>
#include <vector>

#include "nvcool/nv/ensemble.hpp"
#include "nvcool/nv/measurement.hpp"

namespace nvcool::fit {

/// Linear nuclear-polarization weights a_i(B) = 1/3 + s_i B for m_I = +1, 0, -1.
struct PolarizationSlopes {
  double s_plus = 0.0;
  double s_zero = 0.0;
  double s_minus = 0.0;
};

/// a_i(B), clipped at zero. Sums to one whenever no weight is clipped.
std::array<double, 3> hyperfine_weights(double b_z, const PolarizationSlopes& s);

struct SpectrumParams {
  double c_e = 0.0;
  double c_g = 0.0;
  double gamma_e = 1.0;  // FWHM, G
  double gamma_g = 1.0;
  double b0 = 0.0;
  PolarizationSlopes slopes;

  void validate() const;
};

/// Sum of six Lorentzians in B_z (G). Hyperfine constants in MHz, gamma in MHz/G.
double spectrum_model(double b_z, const SpectrumParams& p, double a_par_e_mhz = 40.0,
                      double a_par_g_mhz = -2.166, double gamma_nv = 2.8);

struct EsrParams {
  double contrast = -1.0;
  double a_plus = 1.0 / 3.0;
  double a_zero = 1.0 / 3.0;
  double a_minus = 1.0 / 3.0;
  double gamma_g = 1.0;  // FWHM, MHz
  double x0 = 0.0;       // m_I = 0 line position, MHz
  double p0 = 1.0;

  void validate() const;
};

/// Hyperfine triplet on a frequency axis (MHz) with line spacing |A_par|.
double esr_triplet_model(double x_mhz, const EsrParams& p, double a_par_g_mhz = -2.166);

/// Linear fits through 1/3 of the triplet weights against B_z. The +1 and -1
/// slopes are fitted and the 0 slope closes the sum.
PolarizationSlopes polarization_calibration(std::span<const double> b_z,
                                            std::span<const std::array<double, 3>> weights);

/// Ring-up time in ns: 2Q / omega0, with omega0 quoted as nu in MHz.
double tau_q_ns(double quality, double nu0_mhz);

/// Effective interaction time (ns) of a ringing-up drive.
double ring_up_time(double t_ns, double tau_q);

/// Single-centre GS Rabi population; omega_g is nu in MHz, times in ns.
double gs_rabi_model(double t_ns, double omega_g_mhz, double t_rabi_ns, double tau_q);

/// PSF and standing-wave average of gs_rabi_model.
double gs_rabi_ensemble(double t_ns, double omega_g_mhz, const nv::PsfGrid& grid, double t_rabi_ns,
                        double tau_q);
double gs_rabi_ensemble(double t_ns, double omega_g_mhz, const nv::EnsembleProfile& prof,
                        double t_rabi_ns, double tau_q);

double lorentzian(double x, double amplitude, double center, double fwhm);

/// Hyperfine-weighted driven population at the m_I resonances for a single
/// centre with the given pumping rate.
double driven_hyperfine_signal(const nv::MeasurementModel& m, const nv::Initialization& init,
                               double tau_opt_ns, double omega_e_mhz, double gamma_opt,
                               const std::array<double, 3>& weights, double a_par_e_mhz);

}  // namespace nvcool::fit
