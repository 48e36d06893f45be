#pragma once

// Three-point counterexample: classical pairs (p0, uniform) -> (sigma0,
// uniform) for which every operator convex test function is satisfied but
// no channel exists, plus a random search for operator-Jensen violations.
//
// Points sigma0 = (a, b, 1 - a - b) live in the (a, b) plane. C1 is the
// permutohedron of the triple (reachable by doubly stochastic maps), C2 the
// intersection of {g_t <= 0} over resolvents t >= 0 and the square. The
// sweep follows the line b = 1 - 2a through the top edge of C1 and finds
// where it leaves each {g_t <= 0}.

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cqmorph/convexfn.hpp"
#include "cqmorph/criteria.hpp"
#include "cqmorph/feasibility.hpp"
#include "cqmorph/linalg.hpp"

namespace cqmorph {

class NoUpperRootError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when no point of C2 \ C1 can be certified on the grid.
class SearchFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (a0, b0, c0) with 0 < a0 < b0 < c0 and a0 + b0 + c0 = 1 within 1e-12.
class TriplePoint {
 public:
  TriplePoint(double a0, double b0, double c0);

  double a0() const { return v_[0]; }
  double b0() const { return v_[1]; }
  double c0() const { return v_[2]; }
  const std::array<double, 3>& values() const { return v_; }
  double sum_squares() const;

 private:
  std::array<double, 3> v_;
};

/// Which constraint curve: a resolvent 1/(x + t), the square x^2, or the
/// t -> inf limit of the resolvent curves.
struct CurveTag {
  enum class Kind { Resolvent, Square, Limit };
  Kind kind = Kind::Resolvent;
  double t = 0.0;

  static CurveTag resolvent(double t) { return {Kind::Resolvent, t}; }
  static CurveTag square() { return {Kind::Square, 0.0}; }
  static CurveTag limit() { return {Kind::Limit, 0.0}; }
  std::string label() const;
};

struct CurveSample {
  CurveTag tag;
  double a_t = 0.0;
  double b_t = 0.0;
  double residual = 0.0;  // |g_t(a_t, b_t)|
  /// Closed-form value of the upper root where it is available.
  std::optional<double> closed_form;
};

/// Resolvent or square constraint; +inf when a resolvent pole is hit.
/// `tag` must be Resolvent or Square.
double g_t(double a, double b, const CurveTag& tag, const TriplePoint& triple);

/// (a, b, 1 - a - b) is majorized by the triple.
bool hexagon_contains(double a, double b, const TriplePoint& triple);
/// Direct point-in-convex-hull test over the six permutation vertices.
bool hexagon_contains_geometric(double a, double b, const TriplePoint& triple);
/// (a0,c0), (b0,c0), (c0,b0), (c0,a0), (b0,a0), (a0,b0).
std::array<std::pair<double, double>, 6> hexagon_vertices(const TriplePoint& triple);

/// t sum_i x_i^2 / (x_i + t): the quantity with
/// (1/t)(3 - 1/t + e/t^2) = sum_i 1/(x_i + t). Requires t > 0.
double e_t(const TriplePoint& triple, double t);

/// Upper intersection (b > c0) of the line b = 1 - 2a with g_t = 0.
CurveSample b_t_root(const TriplePoint& triple, const CurveTag& tag);

/// Closed-form upper root for t > 0 (+ branch of the quadratic in b).
double b_t_closed_form(const TriplePoint& triple, double t);

/// lim_{t -> inf} b_t = (1 + sqrt(6 sum x^2 - 2)) / 3.
double b_infinity(const TriplePoint& triple);

struct BStarResult {
  double b_star = 0.0;
  CurveTag argmin;
  double margin = 0.0;  // b_star - c0
  std::vector<CurveSample> samples;  // grid order, then square
};

/// {0} plus 96 log-spaced points over [1e-3, 1e4].
std::vector<double> default_counterexample_grid();

/// inf of b_t over the grid, the square curve, and the t -> inf limit.
BStarResult b_star(const TriplePoint& triple, const std::vector<double>& t_grid);

struct SeparatingPoint {
  double a = 0.0;
  double b = 0.0;
  double max_g = 0.0;  // over grid resolvents and the square
  std::string tightest;
  bool in_hexagon = true;
  FeasibilityReport majorization;
  FeasibilityReport lp;
  ScanResult scan;
  BStarResult sweep;
};

/// Point on b = 1 - 2a with b = (c0 + b_star) / 2, checked against every
/// constraint and both exact oracles.
SeparatingPoint find_separating_point(const TriplePoint& triple, const std::vector<double>& t_grid,
                                      double tol = 1e-10);

struct JensenViolation {
  std::size_t trial = 0;
  Matrix isometry;                // dim_out x dim_in
  Matrix d_prime;                 // dim_out x dim_out PSD
  std::vector<double> spectrum;   // eigenvalues of d_prime
  double min_gap = 0.0;           // min eig of V^+ f(d') V - f(V^+ d' V)
};

struct JensenSearchResult {
  std::optional<JensenViolation> violation;
  double min_gap_seen = std::numeric_limits<double>::infinity();
  std::size_t trials_run = 0;
};

/// min eigenvalue of V^dagger f(d') V - f(V^dagger d' V).
double jensen_gap(const ConvexFn& f, const Matrix& isometry, const Matrix& d_prime);

/// Random search over Haar isometries V (dim_in -> dim_out) and random PSD
/// d'; stops at the first gap below -threshold. Trial i draws from stream i
/// of `seed`.
JensenSearchResult jensen_violation_search(const ConvexFn& f, int dim_in, int dim_out,
                                           std::size_t trials, std::uint64_t seed,
                                           double threshold = 1e-6);

}  // namespace cqmorph
