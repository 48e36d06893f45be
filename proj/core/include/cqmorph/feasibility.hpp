#pragma once

// Ground-truth oracles for channel existence:
//   classical -> classical   phase-1 simplex on transition matrices
//   uniform reference        majorization (Birkhoff) test with T-transform witness
//   classical -> quantum     Dykstra alternating projections on {rho_x}
//   pure sigma1 target       closed-form criterion with explicit channel

#include <limits>
#include <optional>
#include <string>

#include "cqmorph/channel.hpp"
#include "cqmorph/convexfn.hpp"
#include "cqmorph/divergence.hpp"

namespace cqmorph {

inline constexpr double kFeasibilityTol = 1e-7;
inline constexpr int kDykstraMaxIter = 20000;

enum class Verdict { Feasible, Infeasible, Undetermined };

const char* to_string(Verdict v);

/// A test function for which D_f(from) < D_f^max(to) (or a limit of such).
struct Violation {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct FeasibilityReport {
  Verdict status = Verdict::Undetermined;
  std::optional<CQChannel> channel;
  std::optional<TransitionMatrix> transition;
  std::optional<Violation> violation;
  /// Positive phase-1 optimum certifying LP infeasibility.
  std::optional<double> lp_objective;
  /// Human-readable exact certificate (e.g. the failing majorization sum).
  std::optional<std::string> certificate;
  /// Reproduction residual of the witness (Frobenius / l1), +inf if none.
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  /// Deciding stage when produced by the decision pipeline.
  std::string stage;
  std::string note;
};

/// Max over theta of ||P p_theta - q_theta||_1.
double reproduction_residual(const TransitionMatrix& p, const ClassicalPair& from,
                             const ClassicalPair& to);
/// Max over theta of ||Gamma(p_theta) - sigma_theta||_F.
double reproduction_residual(const CQChannel& channel, const ClassicalPair& from,
                             const QuantumPair& to);

FeasibilityReport classical_feasible(const ClassicalPair& from, const ClassicalPair& to,
                                     double tol = kFeasibilityTol);

/// Decides target0 = D p0 for some doubly stochastic D by sorted partial
/// sums; Feasible reports carry D built from T-transforms.
FeasibilityReport majorization_feasible(const ProbVector& p0, const ProbVector& target0);

FeasibilityReport cq_feasible(const ClassicalPair& from, const QuantumPair& to,
                              double tol = kFeasibilityTol, int max_iter = kDykstraMaxIter,
                              const ScanGrids& grids = {});

/// Requires rank(sigma1) == 1. Feasible iff the p0-mass on supp p1 is at most
/// gamma = tr schur_tilde(sigma0, sigma1).
FeasibilityReport pure_target_feasible(const ClassicalPair& from, const QuantumPair& to,
                                       double tol = kFeasibilityTol);

}  // namespace cqmorph
