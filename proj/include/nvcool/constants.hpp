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

#include <numbers>

// Physical constants (CODATA 2018, exact SI values where defined) and unit
// conversions. Everything else in the library pulls from here.
namespace nvcool::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double hbar = 1.054571817e-34;     // J s
inline constexpr double k_boltzmann = 1.380649e-23;  // J / K

// Frequencies quoted as nu = omega / 2 pi in MHz become angular rad/us.
constexpr double mhz_to_rad_per_us(double nu_mhz) { return two_pi * nu_mhz; }
constexpr double rad_per_us_to_mhz(double omega) { return omega / two_pi; }

constexpr double ghz_to_rad_per_s(double nu_ghz) { return two_pi * nu_ghz * 1e9; }
constexpr double mhz_to_rad_per_s(double nu_mhz) { return two_pi * nu_mhz * 1e6; }
constexpr double rad_per_s_to_ghz(double omega) { return omega / two_pi * 1e-9; }

inline constexpr double ns_per_us = 1e3;
inline constexpr double m_per_um = 1e-6;
inline constexpr double pa_per_gpa = 1e9;
inline constexpr double kg_m3_per_g_cm3 = 1e3;
inline constexpr double per_m3_per_per_cm3 = 1e6;

// kappa is quoted in GHz*um; in SI it is m/s (1 GHz*um = 1e3 m/s).
inline constexpr double m_per_s_per_ghz_um = 1e3;

}  // namespace nvcool::constants
