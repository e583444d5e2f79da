// Copyright 2026 The entcap Authors
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
#include <optional>
#include <string>
#include <string_view>

#include "entcap/qcore.hpp"

namespace entcap {

/// json: {"matrix": [[[re, im] x 4] x 4]}.
/// txt: four lines of four tokens a+bi, a-bi, a or bi.
enum class MatrixFormat { Json, Txt };

std::optional<MatrixFormat> parse_matrix_format(std::string_view name);
/// .json selects Json, anything else Txt.
MatrixFormat matrix_format_for(const std::filesystem::path &path);

/// Throws ParseError.
Complex parse_complex_token(std::string_view token);
/// Throws ParseError.
Eigen::Matrix4cd parse_matrix_text(std::string_view content, MatrixFormat format);

/// Reads and validates a unitary. Throws IoError, ParseError, or NotUnitary
/// (message carries the residual).
TwoQubitUnitary parse_matrix_file(const std::filesystem::path &path,
                                  MatrixFormat format,
                                  double unitary_tolerance = 1e-8);

std::string to_json_text(const Eigen::Matrix4cd &m);
std::string to_txt_text(const Eigen::Matrix4cd &m);

/// Twelve significant digits, "." separator; negative zero prints as 0.
std::string format_number(double x);
/// a+bi form readable by parse_complex_token.
std::string format_complex(Complex z);

}  // namespace entcap
