// Copyright 2026 The QEstim Authors.
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
#include <string>
#include <vector>

#include <json.hpp>

#include "qestim/types.hpp"

namespace qestim::cli {

using Json = nlohmann::ordered_json;

/// "{:.17g}"; non-finite values become "inf", "-inf" or "nan".
std::string format_double(double v);

/// Serializes with every floating-point number at 17 significant digits.
/// Non-finite numbers are written as the strings above.
std::string dump_json(const Json& j, int indent = 2);

Json matrix_json(const RMatrix& m);
/// Real part, plus an "imag" block when any imaginary part is nonzero.
Json complex_matrix_json(const CMatrix& m);
Json vector_json(const RVector& v);
Json complex_vector_json(const CVector& v);

/// "2026-10-16T08:30:00Z" (iso) or "20261016T083000Z" (compact, for file names).
std::string utc_timestamp(bool compact);

void write_text(const std::filesystem::path& path, const std::string& content);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace qestim::cli
