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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nvcool/cooling/curve.hpp"
#include "nvcool/fit/registry.hpp"
#include "nvcool/nv/ensemble.hpp"
#include "nvcool/nv/model.hpp"
#include "nvcool/solver/config.hpp"

namespace nvcool::io {

struct DensityGrid {
  double lo = 1e15;
  double hi = 1e21;
  int n = 50;
  /// Replaces the log grid when non-empty.
  std::vector<double> values;

  std::vector<double> expand() const;
};

struct CoolingBlock {
  DensityGrid densities;
  std::vector<double> qualities{1e5, 5e5, 1e6, 2e6};
  std::optional<double> frequency_ghz = 2.9;
  double temperature_k = 300.0;
  bool bose = false;
  double omega_mag_mhz = 60.0;
  double gamma_opt = 130.0;
  std::optional<double> alpha;
  std::optional<double> lambda_eff;  // rad/s
  bool include_reference = true;
  cooling::MomentClosure closure = cooling::MomentClosure::derived;
};

struct ValidateBlock {
  std::vector<int> n_nv{1, 2};
  std::vector<double> n_th{0.1, 0.25, 0.5, 1.0, 1.5, 2.0};
  /// Thermal occupancies solved for the multi-NV runs; empty means n_th.
  std::vector<double> n_th_multi{0.1, 0.5, 1.0};
  int n_ph = 20;
  int n_ph_multi = 12;
  double lambda_mhz = 0.1;
  double omega_m_mhz = 475.0;
  double quality = 3.0e4;
  double omega_mag_mhz = 60.0;
  double gamma_opt = 130.0;
  double memory_budget_mib = 4096.0;
  double error_bound = 0.01;
};

struct FitBlock {
  std::string model = "linear_zero_intercept";
  std::string data;
  std::map<std::string, double> initial;
  std::vector<std::string> fixed;
  std::map<std::string, double> lower;
  std::map<std::string, double> upper;
  fit::ModelSettings settings;
  int max_iter = 500;
  /// Synthetic data used when no data file is given.
  std::vector<double> synthetic_x;
  std::map<std::string, double> synthetic_truth;
  double synthetic_noise = 0.0;
};

struct AlphaBlock {
  std::vector<double> omega_mag_mhz{10, 20, 30, 40, 60, 80, 120};
  std::vector<double> gamma_opt{20, 40, 80, 130, 160};
};

struct ResonatorBlock {
  int modes = 4;
  int table_points = 101;
  double density_cm3 = 1.1e18;
  double alpha = 0.017;
};

struct RunConfig {
  nv::NvParams nv;
  nv::EnsembleProfile ensemble;
  mech::ResonatorGeometry geometry;
  CoolingBlock cooling;
  solver::SolverConfig solver;
  ValidateBlock validate;
  FitBlock fit;
  AlphaBlock alpha;
  ResonatorBlock resonator;
  std::string output_dir = "out";
  std::uint64_t seed = 12345;

  /// Runs every module's parameter validation.
  void check() const;
  cooling::CurveConfig curve_config(int threads) const;
};

/// Unknown keys, wrong types and invalid values are errors naming the key path.
RunConfig parse_config(const std::string& yaml_text);
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& cfg);

}  // namespace nvcool::io
