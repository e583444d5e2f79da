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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "entcap/cli.hpp"
#include "entcap/error.hpp"
#include "entcap/matrix_io.hpp"

using namespace entcap;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Scratch file removed on destruction.
class TempFile {
 public:
  TempFile(const std::string &name, const std::string &content)
      : path_(std::filesystem::temp_directory_path() /
              ("entcap_test_" + name)) {
    std::ofstream(path_) << content;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

const char *kCnotTxt =
    "1 0 0 0\n"
    "0 1 0 0\n"
    "0 0 0 1\n"
    "0 0 1 0\n";

}  // namespace

TEST_CASE("complex tokens") {
  CHECK(parse_complex_token("1") == Complex(1, 0));
  CHECK(parse_complex_token("-2.5") == Complex(-2.5, 0));
  CHECK(parse_complex_token("i") == Complex(0, 1));
  CHECK(parse_complex_token("-i") == Complex(0, -1));
  CHECK(parse_complex_token("+i") == Complex(0, 1));
  CHECK(parse_complex_token("0.5i") == Complex(0, 0.5));
  CHECK(parse_complex_token("1+2i") == Complex(1, 2));
  CHECK(parse_complex_token("1-i") == Complex(1, -1));
  CHECK(parse_complex_token("-1e-3+2.5E+2i") == Complex(-1e-3, 250));
  CHECK(parse_complex_token("0.70710678118654757-0.70710678118654757i") ==
        Complex(0.70710678118654757, -0.70710678118654757));
  for (const char *bad : {"", "abc", "1+", "1+2", "2i+1", "1..0", "ii"}) {
    CHECK_THROWS_AS(parse_complex_token(bad), ParseError);
  }
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.78539816339744828) == "0.785398163397");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_complex(Complex(1, -2)) == "1-2i");
  CHECK(format_complex(Complex(0, 1)) == "0+1i");
  CHECK(parse_complex_token(format_complex(Complex(0.25, -1e-20))) ==
        Complex(0.25, -1e-20));
}

TEST_CASE("matrix text formats") {
  const Eigen::Matrix4cd cnot = parse_matrix_text(kCnotTxt, MatrixFormat::Txt);
  CHECK(cnot.isApprox(TwoQubitUnitary::cnot().matrix()));
  CHECK(parse_matrix_text(to_json_text(cnot), MatrixFormat::Json) == cnot);
  CHECK(parse_matrix_text(to_txt_text(cnot), MatrixFormat::Txt) == cnot);

  const Eigen::Matrix4cd s = TwoQubitUnitary::swap().matrix() * Complex(0, 1);
  CHECK(parse_matrix_text(to_json_text(s), MatrixFormat::Json) == s);
  CHECK(parse_matrix_text(to_txt_text(s), MatrixFormat::Txt) == s);

  // Wrong counts.
  CHECK_THROWS_AS(parse_matrix_text("1 0 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n",
                                    MatrixFormat::Txt),
                  ParseError);
  CHECK_THROWS_AS(parse_matrix_text("1 0 0 0\n0 1 0 0\n0 0 1 0\n", MatrixFormat::Txt),
                  ParseError);
  CHECK_THROWS_AS(parse_matrix_text("{\"matrix\": [[1]]}", MatrixFormat::Json),
                  ParseError);
  CHECK_THROWS_AS(parse_matrix_text("not json", MatrixFormat::Json), ParseError);

  CHECK(matrix_format_for("a/b.json") == MatrixFormat::Json);
  CHECK(matrix_format_for("gate.txt") == MatrixFormat::Txt);
  CHECK(parse_matrix_format("json") == MatrixFormat::Json);
  CHECK_FALSE(parse_matrix_format("xml").has_value());
}

TEST_CASE("matrix files") {
  const TempFile good("cnot.txt", kCnotTxt);
  CHECK(parse_matrix_file(good.path(), MatrixFormat::Txt).matrix() ==
        TwoQubitUnitary::cnot().matrix());

  // Perturbed so that |U^dag U - I| is about 0.1.
  const TempFile off("off.txt",
                     "1.05 0 0 0\n0 1 0 0\n0 0 0 1\n0 0 1 0\n");
  CHECK_THROWS_AS(parse_matrix_file(off.path(), MatrixFormat::Txt), NotUnitary);
  CHECK_NOTHROW(parse_matrix_file(off.path(), MatrixFormat::Txt, 0.2));

  CHECK_THROWS_AS(parse_matrix_file("/nonexistent/entcap.json", MatrixFormat::Json),
                  IoError);
}

TEST_CASE("decompose and invariants commands") {
  const TempFile f("cnot_cmd.txt", kCnotTxt);
  const Run d = run_cli({"decompose", "--matrix", f.path()});
  CHECK(d.code == cli::kExitOk);
  CHECK(d.out.find("alpha = (0.785398163397, 0, 0)\n") != std::string::npos);
  CHECK(d.out.find("conjugated = false") != std::string::npos);
  const Run inv = run_cli({"invariants", "--matrix", f.path()});
  CHECK(inv.code == cli::kExitOk);
  CHECK(inv.out.rfind("invariants = (", 0) == 0);
}

TEST_CASE("capacity command") {
  const TempFile f("cnot_cap.txt", kCnotTxt);
  const Run c = run_cli({"capacity", "--matrix", f.path(), "--measure", "c2"});
  CHECK(c.code == cli::kExitOk);
  CHECK(c.out.find("capacity = 1\n") != std::string::npos);
  CHECK(c.out.find("region = OneEbit") != std::string::npos);
  CHECK(c.out.find("source = analytic") != std::string::npos);

  // Ancillas only through the optimizer.
  const Run no = run_cli(
      {"capacity", "--matrix", f.path(), "--measure", "entropy", "--anc-a", "1"});
  CHECK(no.code == cli::kExitDomainError);
  const Run yes = run_cli({"capacity", "--matrix", f.path(), "--measure",
                           "entropy", "--anc-a", "1", "--anc-b", "1",
                           "--numeric-fallback"});
  CHECK(yes.code == cli::kExitOk);
  CHECK(yes.out.find("source = numeric") != std::string::npos);
}

TEST_CASE("optimize command") {
  const Run r = run_cli({"optimize", "--family", "cnot", "--alpha", "0.785398163397",
                         "--measure", "entropy"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("capacity = 1\n") != std::string::npos);
  const Run bad = run_cli({"optimize", "--family", "cnot", "--alpha", "1.0"});
  CHECK(bad.code == cli::kExitDomainError);
  CHECK(bad.err.find("OutOfRange") != std::string::npos);
  const Run concurrence_anc =
      run_cli({"optimize", "--family", "cnot", "--alpha", "0.5", "--measure",
               "concurrence", "--anc-a", "1"});
  CHECK(concurrence_anc.code == cli::kExitDomainError);
}

TEST_CASE("sweep command writes one row per step") {
  const Run r = run_cli({"sweep", "--family", "cnot", "--measure", "entropy",
                         "--steps", "16"});
  CHECK(r.code == cli::kExitOk);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "alpha,capacity,e0,ef,converged");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 16);
  const std::vector<SweepRow> parsed = cli::parse_sweep_csv(r.out);
  REQUIRE(parsed.size() == 16);
  CHECK(parsed.front().alpha == 0.0);
  CHECK(std::abs(parsed.back().capacity - 1.0) <= 1e-9);
}

TEST_CASE("sweep output does not depend on the worker count") {
  std::vector<std::string> base = {"sweep", "--family", "dcnot", "--measure",
                                   "entropy", "--steps", "6", "--anc-a", "1",
                                   "--anc-b", "1", "--seed", "5"};
  const Run one = run_cli(base);
  base.insert(base.end(), {"--workers", "4"});
  const Run four = run_cli(base);
  CHECK(one.code == cli::kExitOk);
  CHECK(one.out == four.out);
}

TEST_CASE("sweep over triples") {
  const TempFile f("triples.txt",
                   "# a1 a2 a3\n0.3 0.2 0.1\n0.5, 0.45, -0.4\n\n");
  const Run r = run_cli({"sweep", "--triples", f.path(), "--measure", "c2"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.rfind("a1,a2,a3,capacity,e0,ef,converged\n", 0) == 0);
  const std::vector<SweepRow> rows = cli::parse_sweep_csv(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].params.alpha[2] == -0.4);
  CHECK(std::abs(rows[0].capacity - std::sin(2 * 0.5)) <= 1e-6);
  CHECK_THROWS_AS(cli::parse_triples("0.3 0.2\n"), ParseError);
  CHECK_THROWS_AS(cli::parse_triples("0.3 0.5 0.1\n"), NotCanonical);
}

TEST_CASE("sweep csv round trip") {
  std::vector<SweepRow> rows(3);
  rows[0] = {0.1, {}, 0.123456789012345, 1e-17, 0.5, 32, ""};
  rows[1] = {0.2, {}, 2.0, 0.0, 2.0, 7, ""};
  rows[2] = {0.3, {}, std::nan(""), std::nan(""), std::nan(""), 0, "failed"};
  for (SweepRow &r : rows) r.params.alpha = {r.alpha, 0, 0};
  const std::string text = cli::sweep_csv(rows, false);
  const std::vector<SweepRow> back = cli::parse_sweep_csv(text);
  REQUIRE(back.size() == 3);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(back[k].alpha == doctest::Approx(rows[k].alpha).epsilon(1e-12));
    CHECK(back[k].capacity == doctest::Approx(rows[k].capacity).epsilon(1e-12));
    CHECK(back[k].converged_restarts == rows[k].converged_restarts);
  }
  CHECK(std::isnan(back[2].capacity));
  CHECK(cli::sweep_csv(back, false) == text);
  CHECK_THROWS_AS(cli::parse_sweep_csv("alpha,capacity\n1,2\n"), ParseError);
}

TEST_CASE("usage errors exit with status 2") {
  for (const char *cmd : {"decompose", "invariants", "capacity", "optimize", "sweep"}) {
    const Run r = run_cli({cmd, "--bogus"});
    CHECK(r.code == cli::kExitUsageError);
    CHECK(r.err.find("Usage") != std::string::npos);
  }
  CHECK(run_cli({}).code == cli::kExitUsageError);
  CHECK(run_cli({"frobnicate"}).code == cli::kExitUsageError);
  CHECK(run_cli({"sweep", "--family", "cnot", "--measure", "volume"}).code ==
        cli::kExitUsageError);
  CHECK(run_cli({"--help"}).code == cli::kExitOk);
}

TEST_CASE("installed tool runs") {
  const std::string cmd = std::string(ENTCAP_TOOL_PATH) + " sweep --family swap --steps 2";
  FILE *pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[256];
  while (std::fgets(buf, sizeof buf, pipe)) out += buf;
  CHECK(pclose(pipe) == 0);
  CHECK(out.rfind("alpha,capacity,e0,ef,converged\n", 0) == 0);
}
