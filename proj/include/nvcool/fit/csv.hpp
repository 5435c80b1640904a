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

#include <filesystem>
#include <iosfwd>

#include "nvcool/fit/least_squares.hpp"

namespace nvcool::fit {

/// Two- or three-column CSV (x, y[, sigma]). A first line that does not parse
/// as numbers is treated as a header. Errors name the offending line.
Series read_series(std::istream& in);
Series read_series(const std::filesystem::path& path);

}  // namespace nvcool::fit
