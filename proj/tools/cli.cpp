#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cqmorph/counterexample.hpp"
#include "cqmorph/criteria.hpp"
#include "cqmorph/format.hpp"
#include "cqmorph/io.hpp"

namespace cqmorph::cli {
namespace {

// Splits on commas outside brackets so lowner:{...} specs survive.
std::vector<std::string> split_specs(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    int depth = 0;
    std::string cur;
    for (char ch : item) {
      if (ch == '{' || ch == '[') ++depth;
      if (ch == '}' || ch == ']') --depth;
      if (ch == ',' && depth == 0) {
        out.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    out.push_back(cur);
  }
  return out;
}

enum class Format { Default, Json, Csv };

struct Globals {
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::string t_grid;
  std::string s_grid;
  bool json = false;
  bool csv = false;

  Format format() const { return json ? Format::Json : csv ? Format::Csv : Format::Default; }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
  if (!f) throw UsageError("write failed for '" + path + "'");
}

// Command-line flags override the instance config, which overrides defaults.
DecideConfig resolve_config(const Globals& g, const Instance& inst, std::optional<int> max_iter) {
  DecideConfig c;
  if (inst.config.tol) c.tol = *inst.config.tol;
  if (g.tol) c.tol = *g.tol;
  if (inst.config.max_iter) c.max_iter = *inst.config.max_iter;
  if (max_iter) c.max_iter = *max_iter;
  if (inst.config.t_grid) c.grids.t = *inst.config.t_grid;
  if (inst.config.s_grid) c.grids.s = *inst.config.s_grid;
  if (!g.t_grid.empty()) c.grids.t = parse_t_grid(g.t_grid);
  if (!g.s_grid.empty()) c.grids.s = parse_s_grid(g.s_grid);
  return c;
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Feasible:
      return kExitFeasible;
    case Verdict::Infeasible:
      return kExitInfeasible;
    case Verdict::Undetermined:
      break;
  }
  return kExitUndetermined;
}

int cmd_divergence(const Globals& g, const std::string& path, const std::vector<std::string>& specs,
                   std::ostream& out) {
  const Instance inst = load_instance(path);
  const double tol = g.tol.value_or(kSupportTol);
  std::vector<DivergenceRow> rows;
  for (const auto& spec : specs) {
    const ConvexFn f = parse_fn_spec(spec);
    if (!f.operator_convex()) {
      throw UsageError("'" + spec + "' is not operator convex; the quantum column is undefined");
    }
    rows.push_back({f.label(), f_divergence(f, inst.from), max_f_divergence(f, inst.to, tol)});
  }
  out << (g.format() == Format::Json ? divergence_json(rows) : divergence_csv(rows));
  return 0;
}

int cmd_check(const Globals& g, const std::string& path, const std::string& mode,
              std::optional<int> max_iter, std::ostream& out) {
  const Instance inst = load_instance(path);
  const DecideConfig config = resolve_config(g, inst, max_iter);
  const ScanResult scan = necessary_scan(inst.from, inst.to, config.grids, config.scan_tol);
  if (mode == "scan") {
    out << (g.format() == Format::Csv ? scan_csv(scan) : scan_json(scan));
    return scan.violation_count() > 0 ? kExitInfeasible : kExitUndetermined;
  }
  if (mode == "equality") {
    const bool holds = sufficient_equality(inst.from, inst.to, config.grids, g.tol.value_or(kEqualityTol));
    out << "{\n  \"mode\": \"equality\",\n  \"holds\": " << (holds ? "true" : "false") << "\n}\n";
    return holds ? kExitFeasible : kExitUndetermined;
  }
  FeasibilityReport report = mode == "corollary"
                                 ? sufficient_via_reverse_test(inst.from, inst.to, config.tol)
                                 : decide(inst.from, inst.to, config);
  out << (g.format() == Format::Csv ? scan_csv(scan) : report_json(report, &scan));
  return exit_code(report.status);
}

int cmd_reverse_test(const Globals& g, const std::string& path, std::ostream& out) {
  const Instance inst = load_instance(path);
  const ReverseTest rt = reverse_test(inst.to, g.tol.value_or(kSupportTol));
  if (g.format() == Format::Csv) {
    out << "symbol,q0,q1\n";
    for (std::size_t i = 0; i < rt.q.size(); ++i) {
      const bool residue = rt.residue_symbol && *rt.residue_symbol == i;
      out << (residue ? std::string("residue") : std::to_string(i)) << "," << format_real(rt.q.p0[i])
          << "," << format_real(rt.q.p1[i]) << "\n";
    }
  } else {
    out << reverse_test_json(rt, reproduction_residual(rt.channel, rt.q, inst.to));
  }
  return 0;
}

int cmd_counterexample(const Globals& g, const std::string& triple_spec, const std::string& out_path,
                       const std::string& summary_path, std::ostream& out) {
  const auto v = parse_real_list(triple_spec);
  if (v.size() != 3) throw UsageError("--triple expects three comma-separated values");
  const TriplePoint triple(v[0], v[1], v[2]);
  std::vector<double> grid = default_counterexample_grid();
  if (!g.t_grid.empty()) {
    grid = {0.0};
    const auto tail = parse_t_grid(g.t_grid);
    grid.insert(grid.end(), tail.begin(), tail.end());
  }
  const SeparatingPoint point = find_separating_point(triple, grid);
  const std::string curves = curves_csv(point.sweep);
  const std::string summary = counterexample_summary_json(triple, point);
  if (!out_path.empty()) write_file(out_path, curves);
  if (!summary_path.empty()) write_file(summary_path, summary);
  out << (g.format() == Format::Csv ? curves : summary);
  return 0;
}

int cmd_jensen(const Globals& g, const std::string& fn_spec, std::size_t trials,
               const std::string& dims, double threshold, std::ostream& out) {
  const ConvexFn f = parse_fn_spec(fn_spec);
  const auto pos = dims.find(':');
  if (pos == std::string::npos) throw UsageError("--dims expects in:out");
  int dim_in = 0;
  int dim_out = 0;
  try {
    dim_in = std::stoi(dims.substr(0, pos));
    dim_out = std::stoi(dims.substr(pos + 1));
  } catch (const std::exception&) {
    throw UsageError("--dims expects in:out");
  }
  const auto result = jensen_violation_search(f, dim_in, dim_out, trials, g.seed.value_or(0), threshold);
  out << jensen_json(f.label(), result);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Channel-existence checks for binary classical -> quantum families"};
  app.name("cqmorph");
  app.require_subcommand(1);

  Globals g;
  app.add_option("--tol", g.tol, "Numerical tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--t-grid", g.t_grid, "Resolvent grid lo:hi:n (log-spaced)");
  app.add_option("--s-grid", g.s_grid, "Power grid lo:hi:n (uniform)");
  auto* json_flag = app.add_flag("--json", g.json, "JSON output");
  app.add_flag("--csv", g.csv, "CSV output")->excludes(json_flag);

  std::string path;
  std::vector<std::string> fns{"power:0.5", "power:1", "resolvent:0", "resolvent:1", "square"};
  auto* div = app.add_subcommand("divergence", "Classical and maximal quantum f-divergences");
  div->add_option("instance", path, "Instance JSON")->required();
  div->add_option("--fn", fns, "Function specs, comma separated");

  std::string mode = "full";
  std::optional<int> max_iter;
  auto* check = app.add_subcommand("check", "Decide channel existence");
  check->add_option("instance", path, "Instance JSON")->required();
  check->add_option("--mode", mode)->check(CLI::IsMember({"scan", "equality", "corollary", "full"}));
  check->add_option("--max-iter", max_iter, "Projection iteration cap")->check(CLI::PositiveNumber);

  auto* rt = app.add_subcommand("reverse-test", "Reverse-test pair and channel for the quantum pair");
  rt->add_option("instance", path, "Instance JSON")->required();

  std::string triple = "0.1,0.3,0.6";
  std::string out_path;
  std::string summary_path;
  auto* cx = app.add_subcommand("counterexample", "Three-point counterexample sweep");
  cx->add_option("--triple", triple, "a0,b0,c0");
  cx->add_option("--out", out_path, "Curves CSV path");
  cx->add_option("--summary", summary_path, "Summary JSON path");

  std::string fn_spec = "power4";
  std::size_t trials = 10000;
  std::string dims = "2:4";
  double threshold = 1e-6;
  auto* jensen = app.add_subcommand("jensen", "Random search for operator-Jensen violations");
  jensen->add_option("--fn", fn_spec, "Function spec");
  jensen->add_option("--trials", trials)->check(CLI::PositiveNumber);
  jensen->add_option("--dims", dims, "in:out dimensions");
  jensen->add_option("--threshold", threshold)->check(CLI::PositiveNumber);

  for (auto* sub : {div, check, rt, cx, jensen}) sub->fallthrough();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (div->parsed()) return cmd_divergence(g, path, split_specs(fns), out);
    if (check->parsed()) return cmd_check(g, path, mode, max_iter, out);
    if (rt->parsed()) return cmd_reverse_test(g, path, out);
    if (cx->parsed()) return cmd_counterexample(g, triple, out_path, summary_path, out);
    if (jensen->parsed()) return cmd_jensen(g, fn_spec, trials, dims, threshold, out);
  } catch (const SearchFailure& e) {
    err << "cqmorph: " << e.what() << "\n";
    return kExitUndetermined;
  } catch (const std::exception& e) {
    err << "cqmorph: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace cqmorph::cli
