#include "cqmorph/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "cqmorph/format.hpp"
#include "json.hpp"

namespace cqmorph {

using json = nlohmann::ordered_json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

json num(double x) {
  if (std::isfinite(x)) return x;
  return format_real(x);
}

json num_list(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(num(x));
  return out;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(json::array({num(m(i, j).real()), num(m(i, j).imag())}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json real_matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(num(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

double read_number(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    try {
      return parse_real(j.get<std::string>());
    } catch (const ParseError&) {
    }
  }
  throw ParseError(path + ": expected a number");
}

const json& require(const json& obj, const char* key) {
  if (!obj.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return obj.at(key);
}

std::vector<double> read_weights(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array of weights");
  std::vector<double> w;
  for (std::size_t i = 0; i < j.size(); ++i) {
    w.push_back(read_number(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return w;
}

ProbVector read_prob(const json& obj, const char* key) {
  const auto w = read_weights(require(obj, key), key);
  try {
    return ProbVector(w);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string(key) + ": " + e.what());
  }
}

Matrix read_matrix(const json& j, const std::string& path, std::optional<int> dim) {
  if (!j.is_array() || j.empty()) throw ParseError(path + ": expected a square matrix");
  const auto n = static_cast<Eigen::Index>(j.size());
  if (dim && *dim != n) {
    throw ParseError(path + ": has " + std::to_string(n) + " rows, dim is " + std::to_string(*dim));
  }
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw ParseError(row_path + ": expected " + std::to_string(n) + " entries");
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      const std::string p = row_path + "[" + std::to_string(c) + "]";
      const json& e = row[static_cast<std::size_t>(c)];
      if (e.is_array()) {
        if (e.size() != 2) throw ParseError(p + ": expected [re, im]");
        m(r, c) = Complex(read_number(e[0], p + "[0]"), read_number(e[1], p + "[1]"));
      } else {
        m(r, c) = Complex(read_number(e, p), 0.0);
      }
    }
  }
  return m;
}

DensityOp read_density(const json& obj, const char* key, std::optional<int> dim) {
  const Matrix m = read_matrix(require(obj, key), key, dim);
  try {
    return DensityOp(HermitianOp(m));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string(key) + ": " + e.what());
  }
}

std::vector<double> read_grid(const json& j, const std::string& path, bool log_spaced) {
  try {
    if (j.is_string()) {
      return log_spaced ? parse_t_grid(j.get<std::string>()) : parse_s_grid(j.get<std::string>());
    }
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(path + ": " + e.what());
  }
  return read_weights(j, path);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

struct GridSpec {
  double lo;
  double hi;
  int n;
};

GridSpec parse_grid_spec(std::string_view spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw ParseError("grid '" + std::string(spec) + "': expected lo:hi:n");
  GridSpec g{parse_real(parts[0]), parse_real(parts[1]), 0};
  const auto& ns = parts[2];
  const auto res = std::from_chars(ns.data(), ns.data() + ns.size(), g.n);
  if (res.ec != std::errc() || res.ptr != ns.data() + ns.size() || g.n < 1) {
    throw ParseError("grid '" + std::string(spec) + "': n must be a positive integer");
  }
  if (!(g.lo <= g.hi) || !std::isfinite(g.lo) || !std::isfinite(g.hi)) {
    throw ParseError("grid '" + std::string(spec) + "': need finite lo <= hi");
  }
  return g;
}

json report_body(const FeasibilityReport& r) {
  json j;
  j["status"] = to_string(r.status);
  j["stage"] = r.stage;
  j["residual"] = num(r.residual);
  j["iterations"] = r.iterations;
  if (r.violation) {
    j["violation"] = {{"label", r.violation->label},
                      {"lhs", num(r.violation->lhs)},
                      {"rhs", num(r.violation->rhs)}};
  }
  if (r.lp_objective) j["lp_objective"] = num(*r.lp_objective);
  if (r.certificate) j["certificate"] = *r.certificate;
  if (r.transition) j["transition"] = real_matrix_json(r.transition->matrix());
  if (r.channel) {
    json states = json::array();
    for (const auto& s : r.channel->states()) states.push_back(matrix_json(s.matrix()));
    j["channel"] = std::move(states);
  }
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

double parse_real(const std::string& s) {
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  double v = 0.0;
  const auto res = std::from_chars(first, last, v);
  if (s.empty() || res.ec != std::errc() || res.ptr != last) {
    throw ParseError("not a number: '" + s + "'");
  }
  return v;
}

Instance parse_instance(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("syntax error: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("instance: expected a JSON object");

  std::optional<int> dim;
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 1) {
      throw ParseError("dim: expected a positive integer");
    }
    dim = j["dim"].get<int>();
  }

  Instance inst;
  ProbVector p0 = read_prob(j, "p0");
  ProbVector p1 = read_prob(j, "p1");
  if (p0.size() != p1.size()) {
    throw ParseError("p1: length " + std::to_string(p1.size()) + " differs from p0 length " +
                     std::to_string(p0.size()));
  }
  inst.from = ClassicalPair(std::move(p0), std::move(p1));
  DensityOp s0 = read_density(j, "sigma0", dim);
  DensityOp s1 = read_density(j, "sigma1", dim);
  if (s0.dim() != s1.dim()) throw ParseError("sigma1: dimension differs from sigma0");
  inst.to = QuantumPair(std::move(s0), std::move(s1));

  if (j.contains("config")) {
    const json& c = j["config"];
    if (!c.is_object()) throw ParseError("config: expected an object");
    if (c.contains("tol")) {
      const double tol = read_number(c["tol"], "config.tol");
      if (!(tol > 0.0)) throw ParseError("config.tol: must be positive");
      inst.config.tol = tol;
    }
    if (c.contains("t_grid")) inst.config.t_grid = read_grid(c["t_grid"], "config.t_grid", true);
    if (c.contains("s_grid")) inst.config.s_grid = read_grid(c["s_grid"], "config.s_grid", false);
    if (c.contains("seed")) {
      if (!c["seed"].is_number_unsigned()) throw ParseError("config.seed: expected an unsigned integer");
      inst.config.seed = c["seed"].get<std::uint64_t>();
    }
    if (c.contains("max_iter")) {
      if (!c["max_iter"].is_number_integer() || c["max_iter"].get<int>() < 1) {
        throw ParseError("config.max_iter: expected a positive integer");
      }
      inst.config.max_iter = c["max_iter"].get<int>();
    }
  }
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_instance(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string instance_to_json(const Instance& inst) {
  json j;
  j["dim"] = inst.to.dim();
  j["p0"] = num_list(inst.from.p0.vec());
  j["p1"] = num_list(inst.from.p1.vec());
  j["sigma0"] = matrix_json(inst.to.sigma0.matrix());
  j["sigma1"] = matrix_json(inst.to.sigma1.matrix());
  json c = json::object();
  if (inst.config.tol) c["tol"] = *inst.config.tol;
  if (inst.config.t_grid) c["t_grid"] = num_list(*inst.config.t_grid);
  if (inst.config.s_grid) c["s_grid"] = num_list(*inst.config.s_grid);
  if (inst.config.seed) c["seed"] = *inst.config.seed;
  if (inst.config.max_iter) c["max_iter"] = *inst.config.max_iter;
  if (!c.empty()) j["config"] = std::move(c);
  return dump(j);
}

std::vector<double> parse_t_grid(std::string_view spec) {
  const GridSpec g = parse_grid_spec(spec);
  if (!(g.lo > 0.0)) throw ParseError("t grid '" + std::string(spec) + "': lo must be > 0");
  return log_grid(g.lo, g.hi, g.n);
}

std::vector<double> parse_s_grid(std::string_view spec) {
  const GridSpec g = parse_grid_spec(spec);
  if (!(g.lo > 0.0 && g.hi <= 1.0)) {
    throw ParseError("s grid '" + std::string(spec) + "': need 0 < lo <= hi <= 1");
  }
  return linear_grid(g.lo, g.hi, g.n);
}

std::vector<double> parse_real_list(std::string_view spec) {
  std::vector<double> out;
  for (const auto& part : split(spec, ',')) out.push_back(parse_real(part));
  return out;
}

namespace {

std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char ch : v) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string scan_csv(const ScanResult& scan) {
  std::string out = "label,lhs,rhs,gap,violated\n";
  for (const auto& e : scan.entries) {
    out += csv_field(e.label) + "," + format_real(e.lhs) + "," + format_real(e.rhs) + "," +
           format_real(e.gap()) + "," + (e.violated ? "1" : "0") + "\n";
  }
  return out;
}

std::string scan_json(const ScanResult& scan) {
  json entries = json::array();
  for (const auto& e : scan.entries) {
    entries.push_back({{"label", e.label},
                       {"lhs", num(e.lhs)},
                       {"rhs", num(e.rhs)},
                       {"gap", num(e.gap())},
                       {"violated", e.violated}});
  }
  json j;
  j["violations"] = scan.violation_count();
  j["worst_gap"] = num(scan.worst_gap);
  j["entries"] = std::move(entries);
  return dump(j);
}

double DivergenceRow::gap() const { return ScanEntry{label, classical, quantum, false}.gap(); }

std::string divergence_csv(const std::vector<DivergenceRow>& rows) {
  std::string out = "label,classical,quantum,gap\n";
  for (const auto& r : rows) {
    out += csv_field(r.label) + "," + format_real(r.classical) + "," + format_real(r.quantum) + "," +
           format_real(r.gap()) + "\n";
  }
  return out;
}

std::string divergence_json(const std::vector<DivergenceRow>& rows) {
  json j = json::array();
  for (const auto& r : rows) {
    j.push_back({{"label", r.label},
                 {"classical", num(r.classical)},
                 {"quantum", num(r.quantum)},
                 {"gap", num(r.gap())}});
  }
  return dump(j);
}

std::string curves_csv(const BStarResult& sweep) {
  std::string out = "tag,t,a_t,b_t\n";
  for (const auto& s : sweep.samples) {
    const bool square = s.tag.kind == CurveTag::Kind::Square;
    out += std::string(square ? "square" : "resolvent") + "," + (square ? "" : format_real(s.tag.t)) +
           "," + format_real(s.a_t) + "," + format_real(s.b_t) + "\n";
  }
  return out;
}

std::string counterexample_summary_json(const TriplePoint& triple, const SeparatingPoint& point) {
  const BStarResult& sweep = point.sweep;
  json j;
  j["triple"] = num_list({triple.a0(), triple.b0(), triple.c0()});
  j["b_infinity"] = num(b_infinity(triple));
  j["b_star"] = num(sweep.b_star);
  j["t_star"] = sweep.argmin.label();
  j["margin"] = num(sweep.margin);
  j["grid_points"] = sweep.samples.size();
  j["separating_point"] = {{"a", num(point.a)},
                           {"b", num(point.b)},
                           {"c", num(1.0 - point.a - point.b)},
                           {"max_g", num(point.max_g)},
                           {"tightest", point.tightest},
                           {"in_hexagon", point.in_hexagon}};
  j["oracles"] = {{"majorization", to_string(point.majorization.status)},
                  {"lp", to_string(point.lp.status)},
                  {"scan_violations", point.scan.violation_count()},
                  {"scan_worst_gap", num(point.scan.worst_gap)}};
  if (point.majorization.certificate) j["oracles"]["majorization_certificate"] = *point.majorization.certificate;
  if (point.lp.lp_objective) j["oracles"]["lp_objective"] = num(*point.lp.lp_objective);
  return dump(j);
}

std::string report_json(const FeasibilityReport& report, const ScanResult* scan) {
  json j = report_body(report);
  if (scan != nullptr) {
    j["scan"] = {{"violations", scan->violation_count()},
                 {"worst_gap", num(scan->worst_gap)},
                 {"functions", scan->entries.size()}};
  }
  return dump(j);
}

std::string reverse_test_json(const ReverseTest& rt, double residual) {
  json j;
  j["q0"] = num_list(rt.q.p0.vec());
  j["q1"] = num_list(rt.q.p1.vec());
  if (rt.residue_symbol) {
    j["residue_symbol"] = *rt.residue_symbol;
  } else {
    j["residue_symbol"] = nullptr;
  }
  json states = json::array();
  for (const auto& s : rt.channel.states()) states.push_back(matrix_json(s.matrix()));
  j["channel"] = std::move(states);
  j["residual"] = num(residual);
  return dump(j);
}

std::string jensen_json(const std::string& fn_label, const JensenSearchResult& result) {
  json j;
  j["fn"] = fn_label;
  j["trials_run"] = result.trials_run;
  j["min_gap_seen"] = num(result.min_gap_seen);
  j["violation_found"] = result.violation.has_value();
  if (result.violation) {
    const auto& v = *result.violation;
    j["violation"] = {{"trial", v.trial},
                      {"min_gap", num(v.min_gap)},
                      {"spectrum", num_list(v.spectrum)},
                      {"isometry", matrix_json(v.isometry)},
                      {"d_prime", matrix_json(v.d_prime)}};
  }
  return dump(j);
}

std::vector<std::vector<std::string>> read_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  auto end_row = [&]() {
    if (any || !field.empty() || !row.empty()) {
      row.push_back(field);
      rows.push_back(std::move(row));
    }
    row.clear();
    field.clear();
    any = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
      any = true;
    } else if (ch == ',') {
      row.push_back(field);
      field.clear();
      any = true;
    } else if (ch == '\n') {
      end_row();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  if (quoted) throw ParseError("csv: unterminated quoted field");
  end_row();
  return rows;
}

}  // namespace cqmorph
