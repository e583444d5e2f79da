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

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "entcap/optimize.hpp"

namespace entcap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsageError = 2;

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

/// Header alpha,capacity,e0,ef,converged, or a1,a2,a3,... when `triples`.
std::string sweep_csv(const std::vector<SweepRow> &rows, bool triples);
/// Inverse of sweep_csv. Throws ParseError.
std::vector<SweepRow> parse_sweep_csv(std::string_view text);

/// One triple per non-empty line, separated by whitespace or commas; lines
/// starting with '#' are skipped. Throws ParseError or NotCanonical.
std::vector<CanonicalParams> parse_triples(std::string_view text);

}  // namespace entcap::cli
