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

#include "nvcool/fit/models.hpp"

#include <algorithm>
#include <cmath>

#include "nvcool/constants.hpp"
#include "nvcool/error.hpp"

namespace nvcool::fit {

using constants::two_pi;

namespace {

double line(double x, double center, double fwhm) {
  const double d = x - center;
  return 1.0 / (0.25 * fwhm * fwhm + d * d);
}

}  // namespace

std::array<double, 3> hyperfine_weights(double b_z, const PolarizationSlopes& s) {
  return {std::max(0.0, 1.0 / 3.0 + s.s_plus * b_z), std::max(0.0, 1.0 / 3.0 + s.s_zero * b_z),
          std::max(0.0, 1.0 / 3.0 + s.s_minus * b_z)};
}

void SpectrumParams::validate() const {
  if (!(gamma_e > 0.0) || !(gamma_g > 0.0)) {
    throw InvalidArgument("spectrum: linewidths must be positive");
  }
  if (std::abs(slopes.s_plus + slopes.s_zero + slopes.s_minus) > 1e-12) {
    throw InvalidArgument("spectrum: polarization slopes must sum to zero");
  }
}

double spectrum_model(double b_z, const SpectrumParams& p, double a_par_e_mhz, double a_par_g_mhz,
                      double gamma_nv) {
  p.validate();
  const auto a = hyperfine_weights(b_z, p.slopes);
  auto triplet = [&](double fwhm, double a_par) {
    const double off = a_par / gamma_nv;
    return a[0] * line(b_z, p.b0 - off, fwhm) + a[1] * line(b_z, p.b0, fwhm) +
           a[2] * line(b_z, p.b0 + off, fwhm);
  };
  return p.c_e * triplet(p.gamma_e, a_par_e_mhz) + p.c_g * triplet(p.gamma_g, a_par_g_mhz);
}

void EsrParams::validate() const {
  if (std::abs(a_plus + a_zero + a_minus - 1.0) > 1e-9) {
    throw InvalidArgument("esr: hyperfine amplitudes must sum to 1");
  }
  if (!(gamma_g > 0.0)) throw InvalidArgument("esr: linewidth must be positive");
}

double esr_triplet_model(double x_mhz, const EsrParams& p, double a_par_g_mhz) {
  p.validate();
  return p.contrast * (p.a_plus * line(x_mhz, p.x0 - a_par_g_mhz, p.gamma_g) +
                       p.a_zero * line(x_mhz, p.x0, p.gamma_g) +
                       p.a_minus * line(x_mhz, p.x0 + a_par_g_mhz, p.gamma_g)) +
         p.p0;
}

PolarizationSlopes polarization_calibration(std::span<const double> b_z,
                                            std::span<const std::array<double, 3>> weights) {
  if (b_z.size() != weights.size()) {
    throw InvalidArgument("polarization_calibration: field and weight counts differ");
  }
  if (b_z.size() < 2) throw InvalidArgument("polarization_calibration: need at least two fields");
  const auto [lo, hi] = std::minmax_element(b_z.begin(), b_z.end());
  double bb = 0.0;
  for (double b : b_z) bb += b * b;
  if (*hi - *lo <= 1e-12 * std::max(1.0, std::abs(*hi)) || bb == 0.0) {
    throw InvalidArgument("polarization_calibration: degenerate field grid");
  }
  double sp = 0.0;
  double sm = 0.0;
  for (std::size_t i = 0; i < b_z.size(); ++i) {
    sp += b_z[i] * (weights[i][0] - 1.0 / 3.0);
    sm += b_z[i] * (weights[i][2] - 1.0 / 3.0);
  }
  PolarizationSlopes s;
  s.s_plus = sp / bb;
  s.s_minus = sm / bb;
  s.s_zero = -s.s_plus - s.s_minus;
  return s;
}

double tau_q_ns(double quality, double nu0_mhz) {
  if (!(quality > 0.0) || !(nu0_mhz > 0.0)) {
    throw InvalidArgument("tau_q: Q and frequency must be positive");
  }
  return 2.0 * quality / (two_pi * nu0_mhz) * constants::ns_per_us;
}

double ring_up_time(double t_ns, double tau_q) {
  if (!(tau_q > 0.0)) throw InvalidArgument("ring_up_time: tau_Q must be positive");
  // expm1 keeps tau(t) accurate for t << tau_Q.
  return std::expm1(-t_ns / tau_q) * tau_q + t_ns;
}

double gs_rabi_model(double t_ns, double omega_g_mhz, double t_rabi_ns, double tau_q) {
  const double phase = two_pi * omega_g_mhz * ring_up_time(t_ns, tau_q) / constants::ns_per_us;
  return 0.5 * (1.0 - std::exp(-t_ns / t_rabi_ns) * std::cos(phase));
}

double gs_rabi_ensemble(double t_ns, double omega_g_mhz, const nv::PsfGrid& grid, double t_rabi_ns,
                        double tau_q) {
  if (!(grid.norm > 0.0)) throw InvalidArgument("gs_rabi_ensemble: PSF has zero weight");
  double s = 0.0;
  for (std::size_t i = 0; i < grid.z.size(); ++i) {
    s += grid.weight[i] *
         gs_rabi_model(t_ns, omega_g_mhz * grid.strain_factor[i], t_rabi_ns, tau_q);
  }
  return s / grid.norm;
}

double gs_rabi_ensemble(double t_ns, double omega_g_mhz, const nv::EnsembleProfile& prof,
                        double t_rabi_ns, double tau_q) {
  return gs_rabi_ensemble(t_ns, omega_g_mhz, nv::make_psf_grid(prof), t_rabi_ns, tau_q);
}

double lorentzian(double x, double amplitude, double center, double fwhm) {
  return amplitude * 0.25 * fwhm * fwhm * line(x, center, fwhm);
}

double driven_hyperfine_signal(const nv::MeasurementModel& m, const nv::Initialization& init,
                               double tau_opt_ns, double omega_e_mhz, double gamma_opt,
                               const std::array<double, 3>& weights, double a_par_e_mhz) {
  return nv::hyperfine_sum(
      [&](double delta) {
        nv::DriveParams d;
        d.omega_e_mhz = omega_e_mhz;
        d.delta_m_mhz = delta;
        d.gamma_opt = gamma_opt;
        return m.driven_population(tau_opt_ns, d, init);
      },
      weights[0], weights[1], weights[2], a_par_e_mhz);
}

}  // namespace nvcool::fit
