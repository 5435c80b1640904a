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

#include "nvcool/cooling/curve.hpp"

#include <algorithm>
#include <cmath>

#include "nvcool/constants.hpp"
#include "nvcool/error.hpp"
#include "nvcool/parallel.hpp"

namespace nvcool::cooling {

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi >= lo) || n < 1) throw InvalidArgument("log_grid: bad range");
  std::vector<double> out;
  if (n == 1) return {lo};
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < n; ++i) out.push_back(std::pow(10.0, a + (b - a) * i / (n - 1)));
  return out;
}

mech::ResonatorGeometry resolved_geometry(const CurveConfig& cfg) {
  mech::ResonatorGeometry g = cfg.geometry;
  g.validate();
  if (cfg.frequency_ghz) {
    const auto d = mech::design_for_frequency(constants::ghz_to_rad_per_s(*cfg.frequency_ghz),
                                              g.kind, g.t / g.l, g.youngs_gpa, g.density_g_cm3);
    g.l = d.l;
    g.t = d.t;
  }
  return g;
}

CoolingParams operating_point(const CurveConfig& cfg, double density_cm3, double quality,
                              double alpha, const mech::ResonatorGeometry& geometry) {
  CoolingParams p;
  p.omega_m = mech::eigenfrequency(geometry);
  p.quality = quality;
  p.n_th = thermal_occupancy(cfg.temperature_k, p.omega_m, cfg.bose);
  p.gamma_perp = 1e9 / cfg.nv.t1e_ns;
  p.gamma_par = 1e9 / cfg.nv.t2e_ns;
  p.lambda_eff = cfg.lambda_override
                     ? *cfg.lambda_override
                     : mech::lambda_eff(geometry, density_cm3, alpha, cfg.nv.d_perp_e_ghz).quadrature;
  return p;
}

CoolingCurve cooling_curve(const CurveConfig& cfg) {
  if (cfg.qualities.empty()) throw InvalidArgument("cooling_curve: no Q values");
  std::vector<double> densities = cfg.densities_cm3;
  if (cfg.include_reference) {
    for (const auto& r : kReferenceDensities) densities.push_back(r.density_cm3);
  }
  if (densities.empty()) throw InvalidArgument("cooling_curve: no densities");
  for (double d : densities) {
    if (!(d >= 0.0)) throw InvalidArgument("cooling_curve: densities must be non-negative");
  }
  std::sort(densities.begin(), densities.end());
  densities.erase(std::unique(densities.begin(), densities.end(),
                              [](double a, double b) { return std::abs(a - b) <= 1e-12 * b; }),
                  densities.end());

  CoolingCurve out;
  out.geometry = resolved_geometry(cfg);
  out.alpha = cfg.alpha_override
                  ? *cfg.alpha_override
                  : nv::steady_state_alpha(cfg.omega_mag_mhz, cfg.gamma_opt, cfg.nv).alpha;
  out.omega_m = mech::eigenfrequency(out.geometry);
  out.n_th = thermal_occupancy(cfg.temperature_k, out.omega_m, cfg.bose);

  out.rows.resize(cfg.qualities.size() * densities.size());
  parallel_for(static_cast<std::int64_t>(out.rows.size()), cfg.threads, [&](std::int64_t i) {
    const double q = cfg.qualities[static_cast<std::size_t>(i) / densities.size()];
    const double rho = densities[static_cast<std::size_t>(i) % densities.size()];
    const CoolingParams p = operating_point(cfg, rho, q, out.alpha, out.geometry);
    CurveRow& row = out.rows[static_cast<std::size_t>(i)];
    row.density_cm3 = rho;
    row.quality = q;
    row.lambda_eff = p.lambda_eff;
    row.n_f = steady_state_moments(p, cfg.closure).n_f;
    row.ratio = p.n_th > 0.0 ? row.n_f / p.n_th : 1.0;
    for (const auto& r : kReferenceDensities) {
      if (std::abs(rho - r.density_cm3) <= 1e-12 * r.density_cm3) row.annotation = r.label;
    }
  });
  return out;
}

}  // namespace nvcool::cooling
