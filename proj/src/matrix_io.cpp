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

#include "entcap/matrix_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <vector>

#include "entcap/error.hpp"

namespace entcap {

std::optional<MatrixFormat> parse_matrix_format(std::string_view name) {
  if (name == "json") return MatrixFormat::Json;
  if (name == "txt") return MatrixFormat::Txt;
  return std::nullopt;
}

MatrixFormat matrix_format_for(const std::filesystem::path &path) {
  return path.extension() == ".json" ? MatrixFormat::Json : MatrixFormat::Txt;
}

namespace {

double parse_real(std::string_view s, std::string_view token) {
  if (s.empty() || s == "+") return 1.0;
  if (s == "-") return -1.0;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw ParseError("malformed number in token '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

Complex parse_complex_token(std::string_view token) {
  if (token.empty()) throw ParseError("empty token");
  if (token.back() != 'i' && token.back() != 'j') {
    return {parse_real(token, token), 0.0};
  }
  const std::string_view body = token.substr(0, token.size() - 1);
  // The imaginary part starts at the last sign that is not an exponent sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' &&
        body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string_view::npos) {
    if (body.empty() || body == "+" || body == "-" ||
        std::isdigit(static_cast<unsigned char>(body.back())) ||
        body.back() == '.') {
      return {0.0, parse_real(body, token)};
    }
    throw ParseError("malformed token '" + std::string(token) + "'");
  }
  return {parse_real(body.substr(0, split), token),
          parse_real(body.substr(split), token)};
}

Eigen::Matrix4cd parse_matrix_text(std::string_view content,
                                   MatrixFormat format) {
  Eigen::Matrix4cd m;
  if (format == MatrixFormat::Json) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(content);
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("matrix")) {
      throw ParseError("expected an object with a \"matrix\" field");
    }
    const nlohmann::json &rows = doc["matrix"];
    if (!rows.is_array() || rows.size() != 4) {
      throw ParseError("\"matrix\" must hold 4 rows");
    }
    for (int r = 0; r < 4; ++r) {
      const nlohmann::json &row = rows[r];
      if (!row.is_array() || row.size() != 4) {
        throw ParseError("row " + std::to_string(r) + " must hold 4 entries");
      }
      for (int c = 0; c < 4; ++c) {
        const nlohmann::json &entry = row[c];
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
            !entry[1].is_number()) {
          throw ParseError("entry (" + std::to_string(r) + ", " +
                           std::to_string(c) + ") must be [re, im]");
        }
        m(r, c) = Complex(entry[0].get<double>(), entry[1].get<double>());
      }
    }
    return m;
  }

  std::istringstream in{std::string(content)};
  std::string line;
  int r = 0;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    if (r == 4) throw ParseError("more than 4 non-empty lines");
    if (tokens.size() != 4) {
      throw ParseError("line " + std::to_string(r + 1) + " has " +
                       std::to_string(tokens.size()) + " tokens, expected 4");
    }
    for (int c = 0; c < 4; ++c) m(r, c) = parse_complex_token(tokens[c]);
    ++r;
  }
  if (r != 4) throw ParseError("expected 4 rows, found " + std::to_string(r));
  return m;
}

TwoQubitUnitary parse_matrix_file(const std::filesystem::path &path,
                                  MatrixFormat format,
                                  double unitary_tolerance) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream content;
  content << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return TwoQubitUnitary(parse_matrix_text(content.str(), format),
                         unitary_tolerance);
}

std::string format_number(double x) {
  if (x == 0.0) return "0";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string format_complex(Complex z) {
  const std::string im = format_number(std::abs(z.imag()));
  if (z.imag() == 0.0) return format_number(z.real());
  return format_number(z.real()) + (z.imag() < 0 ? "-" : "+") + im + "i";
}

std::string to_json_text(const Eigen::Matrix4cd &m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < 4; ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return nlohmann::json{{"matrix", rows}}.dump() + "\n";
}

std::string to_txt_text(const Eigen::Matrix4cd &m) {
  std::ostringstream out;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      if (c > 0) out << ' ';
      out << format_complex(m(r, c));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace entcap
