#pragma once

// Divergence-based decision procedures for classical -> quantum conversion.
//
// necessary_scan   D_f(from) >= D_f^max(to) over resolvents, powers and x^2;
//                  any violation refutes the existence of a channel.
// sufficient_*     constructive or equality-based acceptance.
// decide           pure-target fast path, then scan, reverse test, oracle.

#include <string>
#include <vector>

#include "cqmorph/convexfn.hpp"
#include "cqmorph/divergence.hpp"
#include "cqmorph/feasibility.hpp"

namespace cqmorph {

inline constexpr double kScanTol = 1e-9;
inline constexpr double kEqualityTol = 1e-7;

struct ScanEntry {
  std::string label;
  double lhs = 0.0;  // D_f(from)
  double rhs = 0.0;  // D_f^max(to)
  bool violated = false;

  /// lhs - rhs in extended arithmetic (inf - inf = 0).
  double gap() const;
};

struct ScanResult {
  std::vector<ScanEntry> entries;
  double worst_gap = std::numeric_limits<double>::infinity();

  std::size_t violation_count() const;
  /// Entry with the most negative gap among violations, if any.
  const ScanEntry* worst_violation() const;
};

/// Test functions in scan order: resolvent(0), resolvent(t) for t in grid,
/// power(s) for s in grid, power(1), square.
std::vector<ConvexFn> scan_functions(const ScanGrids& grids);

/// Violation iff lhs < rhs - tol * max(1, |lhs|, |rhs|).
bool is_violation(double lhs, double rhs, double tol);

ScanResult necessary_scan(const ClassicalPair& from, const QuantumPair& to,
                          const ScanGrids& grids = {}, double tol = kScanTol);

/// True iff |D_f(from) - D_f^max(to)| <= tol for every resolvent on
/// {0} + grids.t and every power on grids.s.
bool sufficient_equality(const ClassicalPair& from, const QuantumPair& to,
                         const ScanGrids& grids = {}, double tol = kEqualityTol);

/// LP from `from` to the reverse-test pair of `to`; Feasible carries the
/// composed channel. Otherwise Undetermined with the LP outcome recorded.
FeasibilityReport sufficient_via_reverse_test(const ClassicalPair& from, const QuantumPair& to,
                                              double tol = kFeasibilityTol);

struct DecideConfig {
  double tol = kFeasibilityTol;
  double scan_tol = kScanTol;
  int max_iter = kDykstraMaxIter;
  ScanGrids grids;
};

/// Exact LP decision when sigma0 and sigma1 commute, Dykstra oracle otherwise.
FeasibilityReport oracle_feasible(const ClassicalPair& from, const QuantumPair& to,
                                  const DecideConfig& config = {});

FeasibilityReport decide(const ClassicalPair& from, const QuantumPair& to,
                         const DecideConfig& config = {});

}  // namespace cqmorph
