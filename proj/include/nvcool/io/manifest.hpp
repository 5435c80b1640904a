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
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace nvcool::io {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest round-trip decimal form, '.' separator regardless of locale.
std::string format_number(double v);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

  void row(std::initializer_list<std::string> cells);
  void row(const std::vector<std::string>& cells);
  void close();
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

struct OracleOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

class Manifest {
 public:
  Manifest(std::string command, nlohmann::json config);

  void add_output(const std::filesystem::path& path);
  void add_oracle(std::string name, bool passed, std::string detail = {});
  nlohmann::json& results() noexcept { return results_; }

  bool all_passed() const noexcept;
  const std::vector<OracleOutcome>& oracles() const noexcept { return oracles_; }

  nlohmann::json to_json() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::string command_;
  nlohmann::json config_;
  nlohmann::json results_ = nlohmann::json::object();
  std::vector<std::string> outputs_;
  std::vector<OracleOutcome> oracles_;
};

}  // namespace nvcool::io
