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

#include <string>
#include <vector>

#include "nvcool/fit/least_squares.hpp"
#include "nvcool/fit/models.hpp"

namespace nvcool::fit {

struct ModelSettings {
  PolarizationSlopes slopes;
  double a_par_e_mhz = 40.0;
  double a_par_g_mhz = -2.166;
  double gamma_nv = 2.8;
};

struct NamedModel {
  std::string name;
  std::vector<std::string> params;
  std::vector<double> defaults;
  Model model;

  std::size_t index_of(const std::string& param) const;
};

/// Known names: linear_zero_intercept, linear, lorentzian, esr_triplet,
/// spectrum, gs_rabi.
NamedModel make_model(const std::string& name, const ModelSettings& settings = {});
std::vector<std::string> model_names();

}  // namespace nvcool::fit
