#pragma once

// Convex test functions f on [0, inf) together with their limit slope
// lim f(x)/x and an operator-convexity flag.
//
// Values are extended reals: +inf is an in-band value (for instance the
// resolvent 1/(t + x) at x = 0 when t = 0).

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "cqmorph/linalg.hpp"

namespace cqmorph {

class ConvexFn {
 public:
  using Eval = std::function<double(double)>;

  ConvexFn(std::string label, Eval eval, double slope_at_infinity, bool operator_convex);

  const std::string& label() const { return label_; }
  double operator()(double x) const { return eval_(x); }
  double eval(double x) const { return eval_(x); }
  /// lim_{x -> inf} f(x) / x, possibly +inf.
  double slope_at_infinity() const { return slope_; }
  /// Trusted flag; gates use in the closed-form maximal divergence.
  bool operator_convex() const { return operator_convex_; }

 private:
  std::string label_;
  Eval eval_;
  double slope_;
  bool operator_convex_;
};

/// -x^s for 0 < s <= 1.
ConvexFn power_family(double s);
/// 1 / (t + x) for t >= 0.
ConvexFn resolvent_family(double t);
/// x^2.
ConvexFn square_fn();
/// x^p for p >= 1 (operator convex only for 1 <= p <= 2).
ConvexFn monomial_fn(double p);
/// x log x, with 0 log 0 = 0.
ConvexFn xlogx_fn();

/// Loewner data for an operator convex function:
///   f(x) = f0 + alpha x + beta x^2 + sum_k w_k (x/(1+t_k) - x/(x+t_k)).
struct LownerRep {
  double f0 = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  struct Atom {
    double t;
    double w;
  };
  std::vector<Atom> measure;
};

ConvexFn from_lowner(const LownerRep& rep);

/// x -> largest eigenvalue of x W0 + W1. Convex but not flagged as operator
/// convex.
ConvexFn witness_fn(const HermitianOp& w0, const HermitianOp& w1);

/// Coefficients c with sum_j c_j / (nodes_i + poles_j) = values_i.
/// Throws ValidationError on length mismatch, duplicate nodes or poles,
/// non-positive poles, or a residual above 1e-8.
std::vector<double> cauchy_interpolate(const std::vector<double>& nodes,
                                       const std::vector<double>& poles,
                                       const std::vector<double>& values);

/// Parses "power:0.5", "resolvent:1", "square", "power4", "monomial:3",
/// "xlogx", or "lowner:{json}".
ConvexFn parse_fn_spec(std::string_view spec);

/// n log-spaced points in [lo, hi] (n >= 1; n == 1 gives {lo}).
std::vector<double> log_grid(double lo, double hi, int n);
/// n uniformly spaced points in [lo, hi].
std::vector<double> linear_grid(double lo, double hi, int n);

/// 64 log-spaced points over [1e-3, 1e3].
std::vector<double> default_t_grid();
/// 32 uniform points over [0.5, 0.999].
std::vector<double> default_s_grid();

/// Parameter grids for the resolvent (t) and power (s) families.
struct ScanGrids {
  std::vector<double> t = default_t_grid();
  std::vector<double> s = default_s_grid();
};

}  // namespace cqmorph
