#pragma once

// Instance files and CSV / JSON emitters.
//
// Instance JSON:
//   {"dim": 2, "p0": [...], "p1": [...],
//    "sigma0": [[[re, im], ...], ...], "sigma1": ...,
//    "config": {"tol": 1e-7, "t_grid": "1e-3:1e3:64", "s_grid": "0.5:0.999:32",
//               "seed": 0, "max_iter": 20000}}
// Matrix entries may also be plain real numbers. All output floats use
// format_real (shortest round-trip); infinities are written as "inf", also
// inside JSON where they are emitted as strings.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cqmorph/counterexample.hpp"
#include "cqmorph/criteria.hpp"
#include "cqmorph/divergence.hpp"
#include "cqmorph/feasibility.hpp"

namespace cqmorph {

/// Malformed input; the message names the offending field path or the
/// line/column of a syntax error.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InstanceConfig {
  std::optional<double> tol;
  std::optional<std::vector<double>> t_grid;
  std::optional<std::vector<double>> s_grid;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_iter;
};

struct Instance {
  ClassicalPair from;
  QuantumPair to;
  InstanceConfig config;
};

Instance parse_instance(std::string_view text);
/// Reads and parses a file; unreadable files raise ParseError too.
Instance load_instance(const std::string& path);
std::string instance_to_json(const Instance& inst);

/// "lo:hi:n". The t grid is log-spaced (lo > 0), the s grid uniform.
std::vector<double> parse_t_grid(std::string_view spec);
std::vector<double> parse_s_grid(std::string_view spec);
/// "a,b,c".
std::vector<double> parse_real_list(std::string_view spec);

std::string scan_csv(const ScanResult& scan);
std::string scan_json(const ScanResult& scan);

struct DivergenceRow {
  std::string label;
  double classical = 0.0;
  double quantum = 0.0;
  double gap() const;
};
std::string divergence_csv(const std::vector<DivergenceRow>& rows);
std::string divergence_json(const std::vector<DivergenceRow>& rows);

/// Columns tag, t, a_t, b_t; one row per grid point, then square and limit.
std::string curves_csv(const BStarResult& sweep);
std::string counterexample_summary_json(const TriplePoint& triple, const SeparatingPoint& point);

std::string report_json(const FeasibilityReport& report, const ScanResult* scan = nullptr);
std::string reverse_test_json(const ReverseTest& rt, double residual);
std::string jensen_json(const std::string& fn_label, const JensenSearchResult& result);

/// Splits CSV text into rows of fields (no quoting; the emitters never need it).
std::vector<std::vector<std::string>> read_csv(std::string_view text);

}  // namespace cqmorph
