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
#include <string>
#include <vector>

#include "nvcool/cooling/moments.hpp"
#include "nvcool/mech/resonator.hpp"
#include "nvcool/nv/model.hpp"

namespace nvcool::cooling {

struct ReferenceDensity {
  double density_cm3;
  const char* label;
};

inline constexpr std::array<ReferenceDensity, 3> kReferenceDensities{{
    {7.0e17, "single-crystal"},
    {1.1e18, "single-crystal"},
    {4.4e20, "nanodiamond"},
}};

struct CurveConfig {
  std::vector<double> densities_cm3;
  std::vector<double> qualities{1e5, 5e5, 1e6, 2e6};
  mech::ResonatorGeometry geometry;
  /// When set, the geometry is rescaled (keeping t/l) to this frequency.
  std::optional<double> frequency_ghz = 2.9;
  double temperature_k = 300.0;
  bool bose = false;
  double omega_mag_mhz = 60.0;
  double gamma_opt = 130.0;
  nv::NvParams nv;
  std::optional<double> alpha_override;
  /// Fixes lambda_eff (rad/s) for every point, bypassing the mechanics.
  std::optional<double> lambda_override;
  bool include_reference = true;
  MomentClosure closure = MomentClosure::derived;
  int threads = 1;
};

struct CurveRow {
  double density_cm3 = 0.0;
  double quality = 0.0;
  double lambda_eff = 0.0;  // rad/s
  double n_f = 0.0;
  double ratio = 0.0;
  std::string annotation;
};

struct CoolingCurve {
  double alpha = 0.0;
  double omega_m = 0.0;  // rad/s
  double n_th = 0.0;
  mech::ResonatorGeometry geometry;
  std::vector<CurveRow> rows;
};

/// n_lo..n_hi in n log-spaced points.
std::vector<double> log_grid(double lo, double hi, int n);

/// Rows are ordered by Q, then density; reference densities are merged into the grid.
CoolingCurve cooling_curve(const CurveConfig& cfg);

/// Two-level cooling parameters at one density and Q.
CoolingParams operating_point(const CurveConfig& cfg, double density_cm3, double quality,
                              double alpha, const mech::ResonatorGeometry& geometry);

mech::ResonatorGeometry resolved_geometry(const CurveConfig& cfg);

}  // namespace nvcool::cooling
