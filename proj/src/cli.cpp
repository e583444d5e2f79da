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

#include "entcap/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "entcap/canonical.hpp"
#include "entcap/capacity.hpp"
#include "entcap/error.hpp"
#include "entcap/matrix_io.hpp"
#include "entcap/measures.hpp"

namespace entcap::cli {

namespace {

// Raised after parsing when flags are individually valid but do not combine.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string matrix;
  std::string format;
  double unitary_tol = 1e-8;
  std::string measure = "c2";
  int anc_a = 0;
  int anc_b = 0;
  std::optional<int> restarts;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  int workers = 1;
  std::string family;
  std::optional<double> alpha;
  double alpha_min = 0.0;
  double alpha_max = kPi / 4;
  int steps = 16;
  std::string triples;
  std::string out;
  bool numeric_fallback = false;
  bool product_start = false;
  bool min_e0 = false;
};

const std::vector<std::string> kMeasureNames = {"c2", "concurrence", "entropy",
                                                "linear"};
const std::vector<std::string> kFamilyNames = {"cnot", "dcnot", "swap"};

void add_matrix_options(CLI::App &sub, Options &o, bool required) {
  auto *m = sub.add_option("--matrix", o.matrix, "4x4 unitary file");
  if (required) m->required();
  sub.add_option("--format", o.format, "json or txt (default: by extension)")
      ->check(CLI::IsMember({"json", "txt"}));
  sub.add_option("--unitary-tol", o.unitary_tol,
                 "max |U^dag U - I| accepted on input")
      ->check(CLI::PositiveNumber);
}

void add_optimizer_options(CLI::App &sub, Options &o) {
  sub.add_option("--measure", o.measure, "c2, concurrence, entropy or linear")
      ->check(CLI::IsMember(kMeasureNames));
  sub.add_option("--anc-a", o.anc_a, "ancilla qubits held by A")
      ->check(CLI::NonNegativeNumber);
  sub.add_option("--anc-b", o.anc_b, "ancilla qubits held by B")
      ->check(CLI::NonNegativeNumber);
  sub.add_option("--restarts", o.restarts, "random restarts")
      ->check(CLI::PositiveNumber);
  sub.add_option("--seed", o.seed, "master seed");
  sub.add_option("--tol", o.tol, "objective tolerance")
      ->check(CLI::PositiveNumber);
  sub.add_option("--workers", o.workers, "threads for restarts")
      ->check(CLI::PositiveNumber);
}

void add_mode_options(CLI::App &sub, Options &o) {
  auto *ps = sub.add_flag("--product-start", o.product_start,
                          "restrict to product initial states");
  sub.add_flag("--min-e0", o.min_e0,
               "prefer the optimum with least initial entanglement")
      ->excludes(ps);
}

OptimizerConfig optimizer_config(const Options &o) {
  OptimizerConfig cfg;
  cfg.restarts = o.restarts;
  cfg.master_seed = o.seed;
  cfg.workers = o.workers;
  if (o.tol) cfg.objective_tolerance = *o.tol;
  cfg.validate();
  return cfg;
}

MeasureKind measure_of(const Options &o) { return *parse_measure(o.measure); }

SweepMode sweep_mode_of(const Options &o) {
  if (o.product_start) return SweepMode::ProductStart;
  if (o.min_e0) return SweepMode::MinInitialEntanglement;
  return SweepMode::Full;
}

TwoQubitUnitary load_matrix(const Options &o) {
  const std::filesystem::path path(o.matrix);
  const MatrixFormat format = o.format.empty()
                                  ? matrix_format_for(path)
                                  : *parse_matrix_format(o.format);
  return parse_matrix_file(path, format, o.unitary_tol);
}

std::string read_text(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

template <typename Range, typename Fmt>
std::string tuple_text(const Range &values, Fmt fmt) {
  std::string s = "(";
  bool first = true;
  for (const auto &v : values) {
    if (!first) s += ", ";
    s += fmt(v);
    first = false;
  }
  return s + ")";
}

std::string alpha_text(const CanonicalParams &p) {
  return tuple_text(p.alpha, format_number);
}

void print_state(std::ostream &out, const PureState &psi) {
  out << "state = "
      << tuple_text(psi.amplitudes(), [](Complex z) { return format_complex(z); })
      << '\n';
}

void print_numeric(std::ostream &out, const CapacityResult &r) {
  out << "capacity = " << format_number(r.value) << '\n'
      << "e0 = " << format_number(r.initial_entanglement) << '\n'
      << "ef = " << format_number(r.final_entanglement) << '\n'
      << "converged_restarts = " << r.converged_restarts << '\n'
      << "best_seed = " << r.best_restart_seed << '\n';
  print_state(out, r.optimal_state);
}

CapacityResult numeric_run(const TwoQubitUnitary &u, const Options &o) {
  const OptimizerConfig cfg = optimizer_config(o);
  const MeasureKind measure = measure_of(o);
  switch (sweep_mode_of(o)) {
    case SweepMode::ProductStart:
      return product_start_capacity(u, measure, o.anc_a, o.anc_b, cfg);
    case SweepMode::MinInitialEntanglement:
      return min_initial_entanglement_capacity(u, measure, o.anc_a, o.anc_b,
                                               cfg);
    case SweepMode::Full:
      break;
  }
  return numeric_capacity(u, measure, o.anc_a, o.anc_b, cfg);
}

int cmd_decompose(const Options &o, std::ostream &out) {
  const CanonicalParams p = decompose(load_matrix(o));
  out << "alpha = " << alpha_text(p) << '\n'
      << "conjugated = " << (p.conjugated ? "true" : "false") << '\n'
      << "lambdas = " << tuple_text(p.lambdas(), format_number) << '\n';
  return kExitOk;
}

int cmd_invariants(const Options &o, std::ostream &out) {
  const LocalInvariants inv = local_invariants(load_matrix(o));
  out << "invariants = "
      << tuple_text(inv, [](Complex z) { return format_complex(z); }) << '\n';
  return kExitOk;
}

int cmd_capacity(const Options &o, std::ostream &out, std::ostream &err) {
  const TwoQubitUnitary u = load_matrix(o);
  const CanonicalParams p = decompose(u);
  const MeasureKind measure = measure_of(o);
  out << "alpha = " << alpha_text(p) << '\n'
      << "measure = " << to_string(measure) << '\n';

  const auto numeric = [&] {
    const CapacityResult r = numeric_run(u, o);
    out << "source = numeric\n";
    print_numeric(out, r);
    return kExitOk;
  };
  if (o.anc_a != 0 || o.anc_b != 0) {
    if (!o.numeric_fallback) {
      throw OutOfRange(
          "no closed form with ancillas; pass --numeric-fallback");
    }
    return numeric();
  }

  const double tol = o.tol.value_or(1e-9);
  AnalyticCapacity a;
  try {
    switch (measure) {
      case MeasureKind::ConcurrenceSquared:
        a = capacity_c2(p);
        break;
      case MeasureKind::Concurrence:
        a = capacity_concurrence(p);
        break;
      case MeasureKind::LinearEntropy:
        a = capacity_linear_entropy(p, tol);
        break;
      case MeasureKind::EntropyOfEntanglement:
        a = capacity_entropy_no_ancilla(p, tol);
        break;
    }
  } catch (const ConvergenceFailure &e) {
    if (!o.numeric_fallback) throw;
    err << e.what() << "; using numeric optimization\n";
    return numeric();
  }
  if (a.extrapolated && o.numeric_fallback) return numeric();

  out << "source = analytic\n"
      << "region = " << to_string(a.region) << '\n'
      << "capacity = " << format_number(a.value) << '\n'
      << "e0 = " << format_number(a.initial_entanglement) << '\n';
  if (a.rescaled_value) {
    out << "capacity_rescaled = " << format_number(*a.rescaled_value) << '\n';
  }
  if (a.extrapolated) out << "extrapolated = true\n";
  if (a.optimal_state) print_state(out, *a.optimal_state);
  return kExitOk;
}

int cmd_optimize(const Options &o, std::ostream &out) {
  const TwoQubitUnitary u =
      o.matrix.empty() ? family_unitary({*parse_family(o.family), *o.alpha})
                       : load_matrix(o);
  out << "alpha = " << alpha_text(decompose(u)) << '\n'
      << "measure = " << o.measure << '\n';
  print_numeric(out, numeric_run(u, o));
  return kExitOk;
}

int cmd_sweep(const Options &o, std::ostream &out, std::ostream &err) {
  const OptimizerConfig cfg = optimizer_config(o);
  const MeasureKind measure = measure_of(o);
  const bool triples = !o.triples.empty();
  std::vector<SweepRow> rows;
  if (triples) {
    const std::vector<CanonicalParams> points =
        parse_triples(read_text(o.triples));
    rows = canonical_sweep(points, measure, o.anc_a, o.anc_b, cfg,
                           sweep_mode_of(o));
  } else {
    const std::vector<double> alphas =
        linear_grid(o.alpha_min, o.alpha_max, o.steps);
    rows = family_sweep(*parse_family(o.family), alphas, measure, o.anc_a,
                        o.anc_b, cfg, sweep_mode_of(o));
  }

  const std::string csv = sweep_csv(rows, triples);
  if (o.out.empty()) {
    out << csv;
  } else {
    std::ofstream file(o.out, std::ios::binary);
    if (!file) throw IoError("cannot write " + o.out);
    file << csv;
    if (!file) throw IoError("failed writing " + o.out);
  }

  int failed = 0;
  for (const SweepRow &row : rows) {
    if (row.error.empty()) continue;
    err << "alpha " << format_number(row.alpha) << ": " << row.error << '\n';
    ++failed;
  }
  return failed == 0 ? kExitOk : kExitDomainError;
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw ParseError("malformed number '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= line.size(); ++k) {
    if (k == line.size() || line[k] == ',' || line[k] == ' ' ||
        line[k] == '\t') {
      if (k > start) fields.push_back(line.substr(start, k - start));
      start = k + 1;
    }
  }
  return fields;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRow> &rows, bool triples) {
  std::string csv = triples ? "a1,a2,a3,capacity,e0,ef,converged\n"
                            : "alpha,capacity,e0,ef,converged\n";
  for (const SweepRow &row : rows) {
    if (triples) {
      for (double a : row.params.alpha) csv += format_number(a) + ",";
    } else {
      csv += format_number(row.alpha) + ",";
    }
    csv += format_number(row.capacity) + "," +
           format_number(row.initial_entanglement) + "," +
           format_number(row.final_entanglement) + "," +
           std::to_string(row.converged_restarts) + "\n";
  }
  return csv;
}

std::vector<SweepRow> parse_sweep_csv(std::string_view text) {
  const std::vector<std::string_view> lines = lines_of(text);
  if (lines.empty()) throw ParseError("missing CSV header");
  bool triples = false;
  if (lines[0] == "a1,a2,a3,capacity,e0,ef,converged") {
    triples = true;
  } else if (lines[0] != "alpha,capacity,e0,ef,converged") {
    throw ParseError("unexpected CSV header '" + std::string(lines[0]) + "'");
  }
  const std::size_t width = triples ? 7 : 5;
  std::vector<SweepRow> rows;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    if (lines[k].empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest = lines[k];
    while (true) {
      const std::size_t c = rest.find(',');
      f.push_back(rest.substr(0, c));
      if (c == std::string_view::npos) break;
      rest.remove_prefix(c + 1);
    }
    if (f.size() != width) {
      throw ParseError("CSV line " + std::to_string(k + 1) + " has " +
                       std::to_string(f.size()) + " fields");
    }
    SweepRow row;
    std::size_t i = 0;
    if (triples) {
      for (double &a : row.params.alpha) a = parse_double(f[i++]);
      row.alpha = row.params.alpha[0];
    } else {
      row.alpha = parse_double(f[i++]);
    }
    row.capacity = parse_double(f[i++]);
    row.initial_entanglement = parse_double(f[i++]);
    row.final_entanglement = parse_double(f[i++]);
    const std::string_view conv = f[i];
    const auto [end, ec] = std::from_chars(conv.data(), conv.data() + conv.size(),
                                           row.converged_restarts);
    if (ec != std::errc() || end != conv.data() + conv.size()) {
      throw ParseError("malformed count '" + std::string(conv) + "'");
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<CanonicalParams> parse_triples(std::string_view text) {
  std::vector<CanonicalParams> points;
  int line_no = 0;
  for (std::string_view line : lines_of(text)) {
    ++line_no;
    const std::vector<std::string_view> f = split_fields(line);
    if (f.empty() || f[0].front() == '#') continue;
    if (f.size() != 3) {
      throw ParseError("triples line " + std::to_string(line_no) +
                       " needs 3 values");
    }
    CanonicalParams p;
    for (int j = 0; j < 3; ++j) p.alpha[j] = parse_double(f[j]);
    if (!p.is_canonical()) {
      throw NotCanonical("triples line " + std::to_string(line_no) + ": " +
                         alpha_text(p));
    }
    points.push_back(p);
  }
  return points;
}

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  Options o;
  CLI::App app{"Entangling capacity of two-qubit unitaries", "entcap"};
  app.require_subcommand(1, 1);

  CLI::App *decompose_cmd =
      app.add_subcommand("decompose", "canonical parameters of a unitary");
  add_matrix_options(*decompose_cmd, o, true);

  CLI::App *invariants_cmd =
      app.add_subcommand("invariants", "local invariants of a unitary");
  add_matrix_options(*invariants_cmd, o, true);

  CLI::App *capacity_cmd =
      app.add_subcommand("capacity", "closed-form entangling capacity");
  add_matrix_options(*capacity_cmd, o, true);
  add_optimizer_options(*capacity_cmd, o);
  add_mode_options(*capacity_cmd, o);
  capacity_cmd->add_flag("--numeric-fallback", o.numeric_fallback,
                         "optimize numerically where no closed form applies");

  CLI::App *optimize_cmd =
      app.add_subcommand("optimize", "numeric capacity at one point");
  add_matrix_options(*optimize_cmd, o, false);
  add_optimizer_options(*optimize_cmd, o);
  add_mode_options(*optimize_cmd, o);
  optimize_cmd->add_option("--family", o.family, "cnot, dcnot or swap")
      ->check(CLI::IsMember(kFamilyNames));
  optimize_cmd->add_option("--alpha", o.alpha, "family parameter");

  CLI::App *sweep_cmd =
      app.add_subcommand("sweep", "numeric capacity along a family or triples");
  add_optimizer_options(*sweep_cmd, o);
  add_mode_options(*sweep_cmd, o);
  auto *family_opt =
      sweep_cmd->add_option("--family", o.family, "cnot, dcnot or swap")
          ->check(CLI::IsMember(kFamilyNames));
  sweep_cmd->add_option("--triples", o.triples, "file of canonical triples")
      ->excludes(family_opt);
  sweep_cmd->add_option("--alpha-min", o.alpha_min, "first family parameter");
  sweep_cmd->add_option("--alpha-max", o.alpha_max, "last family parameter");
  sweep_cmd->add_option("--steps", o.steps, "grid points")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", o.out, "CSV path (default: stdout)");

  const auto usage = [&](const std::string &message) {
    const std::vector<CLI::App *> parsed = app.get_subcommands();
    err << "error: " << message << '\n'
        << (parsed.empty() ? app.help() : parsed.front()->help());
    return kExitUsageError;
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (optimize_cmd->parsed()) {
      const bool by_family = !o.family.empty() || o.alpha.has_value();
      if (o.matrix.empty() == !by_family) {
        throw UsageError("give either --matrix or --family with --alpha");
      }
      if (by_family && (o.family.empty() || !o.alpha)) {
        throw UsageError("--family and --alpha go together");
      }
    }
    if (sweep_cmd->parsed() && o.family.empty() && o.triples.empty()) {
      throw UsageError("give --family or --triples");
    }
  } catch (const CLI::CallForHelp &) {
    const std::vector<CLI::App *> parsed = app.get_subcommands();
    out << (parsed.empty() ? app.help() : parsed.front()->help());
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    return usage(e.what());
  } catch (const UsageError &e) {
    return usage(e.what());
  }

  try {
    if (decompose_cmd->parsed()) return cmd_decompose(o, out);
    if (invariants_cmd->parsed()) return cmd_invariants(o, out);
    if (capacity_cmd->parsed()) return cmd_capacity(o, out, err);
    if (optimize_cmd->parsed()) return cmd_optimize(o, out);
    return cmd_sweep(o, out, err);
  } catch (const std::exception &e) {
    err << e.what() << '\n';
    return kExitDomainError;
  }
}

}  // namespace entcap::cli
