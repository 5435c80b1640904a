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

#include "nvcool/fit/registry.hpp"

#include <algorithm>

#include "nvcool/error.hpp"

namespace nvcool::fit {

std::size_t NamedModel::index_of(const std::string& param) const {
  const auto it = std::find(params.begin(), params.end(), param);
  if (it == params.end()) {
    throw InvalidArgument("model '" + name + "' has no parameter '" + param + "'");
  }
  return static_cast<std::size_t>(it - params.begin());
}

std::vector<std::string> model_names() {
  return {"linear_zero_intercept", "linear", "lorentzian", "esr_triplet", "spectrum", "gs_rabi"};
}

NamedModel make_model(const std::string& name, const ModelSettings& s) {
  NamedModel m;
  m.name = name;
  if (name == "linear_zero_intercept") {
    m.params = {"slope"};
    m.defaults = {1.0};
    m.model = pointwise([](double x, std::span<const double> p) { return p[0] * x; });
  } else if (name == "linear") {
    m.params = {"slope", "intercept"};
    m.defaults = {1.0, 0.0};
    m.model = pointwise([](double x, std::span<const double> p) { return p[0] * x + p[1]; });
  } else if (name == "lorentzian") {
    m.params = {"amplitude", "center", "fwhm", "offset"};
    m.defaults = {1.0, 0.0, 1.0, 0.0};
    m.model = pointwise([](double x, std::span<const double> p) {
      return lorentzian(x, p[0], p[1], p[2]) + p[3];
    });
  } else if (name == "esr_triplet") {
    // a_minus is slaved to the other two amplitudes.
    m.params = {"contrast", "a_plus", "a_zero", "gamma_g", "x0", "p0"};
    m.defaults = {-0.1, 1.0 / 3.0, 1.0 / 3.0, 1.0, 0.0, 1.0};
    m.model = pointwise([a_par = s.a_par_g_mhz](double x, std::span<const double> p) {
      EsrParams e;
      e.contrast = p[0];
      e.a_plus = p[1];
      e.a_zero = p[2];
      e.a_minus = 1.0 - p[1] - p[2];
      e.gamma_g = p[3];
      e.x0 = p[4];
      e.p0 = p[5];
      return esr_triplet_model(x, e, a_par);
    });
  } else if (name == "spectrum") {
    m.params = {"c_e", "c_g", "gamma_e", "gamma_g", "b0"};
    m.defaults = {1.0, 1.0, 10.0, 1.0, 0.0};
    m.model = pointwise([s](double x, std::span<const double> p) {
      SpectrumParams sp;
      sp.c_e = p[0];
      sp.c_g = p[1];
      sp.gamma_e = p[2];
      sp.gamma_g = p[3];
      sp.b0 = p[4];
      sp.slopes = s.slopes;
      return spectrum_model(x, sp, s.a_par_e_mhz, s.a_par_g_mhz, s.gamma_nv);
    });
  } else if (name == "gs_rabi") {
    m.params = {"omega_g", "t_rabi", "tau_q"};
    m.defaults = {1.0, 1000.0, 100.0};
    m.model = pointwise([](double x, std::span<const double> p) {
      return gs_rabi_model(x, p[0], p[1], p[2]);
    });
  } else {
    std::string known;
    for (const auto& n : model_names()) known += (known.empty() ? "" : ", ") + n;
    throw InvalidArgument("unknown fit model '" + name + "' (known: " + known + ")");
  }
  return m;
}

}  // namespace nvcool::fit
