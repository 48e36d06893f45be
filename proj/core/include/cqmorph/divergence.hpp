#pragma once

// Classical f-divergence, the maximal quantum f-divergence for operator
// convex f, and the reverse test (a classical pair plus a CQ channel that
// generates a given quantum pair and attains the maximal divergence for every
// convex f at once).

#include <optional>
#include <span>
#include <vector>

#include "cqmorph/channel.hpp"
#include "cqmorph/convexfn.hpp"
#include "cqmorph/linalg.hpp"

namespace cqmorph {

inline constexpr double kProbSumTol = 1e-9;
inline constexpr double kProbNegTol = 1e-12;
/// Weights at or below this are outside the support of a classical p1.
inline constexpr double kClassicalSupportTol = 1e-12;

class ProbVector {
 public:
  ProbVector() = default;
  /// Validates weights >= -1e-12 and |sum - 1| <= 1e-9; tiny negatives are
  /// clamped to zero.
  explicit ProbVector(std::vector<double> weights);

  static ProbVector uniform(std::size_t n);

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  std::span<const double> weights() const { return w_; }
  const std::vector<double>& vec() const { return w_; }

 private:
  std::vector<double> w_;
};

struct ClassicalPair {
  ProbVector p0;
  ProbVector p1;

  ClassicalPair() = default;
  ClassicalPair(ProbVector a, ProbVector b);
  std::size_t size() const { return p0.size(); }
};

struct QuantumPair {
  DensityOp sigma0;
  DensityOp sigma1;

  QuantumPair() = default;
  QuantumPair(DensityOp a, DensityOp b);
  int dim() const { return sigma0.dim(); }

  /// diag(p0), diag(p1).
  static QuantumPair diagonal(const ClassicalPair& pair);
};

/// A divergence in the common form
///   sum_j weights_j f(ratios_j) + deficit * lim f(x)/x.
/// For a classical pair: ratios p0/p1 and weights p1 on supp p1, deficit the
/// p0-mass off supp p1. For a quantum pair: the spectrum of
/// sigma1^{-1/2} schur_tilde sigma1^{-1/2} with weights tr sigma1 P_j, and
/// deficit 1 - tr schur_tilde.
struct WeightedSpectrum {
  std::vector<double> ratios;
  std::vector<double> weights;
  double deficit = 0.0;
};

WeightedSpectrum classical_spectrum(const ClassicalPair& pair,
                                    double support_tol = kClassicalSupportTol);
WeightedSpectrum relative_spectrum(const QuantumPair& pair, double tol = kSupportTol);

/// Extended-real evaluation with 0 * (+inf) = 0.
double evaluate(const ConvexFn& f, const WeightedSpectrum& s);

double f_divergence(const ConvexFn& f, const ClassicalPair& pair,
                    double support_tol = kClassicalSupportTol);

/// Closed form for operator convex f. Throws ValidationError otherwise.
double max_f_divergence(const ConvexFn& f, const QuantumPair& pair, double tol = kSupportTol);

/// D^max for -x^s, 0 < s < 1. Approaches -tr schur_tilde as s -> 1.
double power_limit_check(const QuantumPair& pair, double s);

struct ReverseTest {
  ClassicalPair q;
  CQChannel channel;
  /// Index of the residue symbol carrying sigma0 - schur_tilde, if present.
  std::optional<std::size_t> residue_symbol;
};

ReverseTest reverse_test(const QuantumPair& pair, double tol = kSupportTol);

/// sum_x r_max(p0(x) W0 + p1(x) W1).
double dw_classical(const HermitianOp& w0, const HermitianOp& w1, const ClassicalPair& pair);

/// |a - b| with equal infinities treated as distance 0.
double extended_distance(double a, double b);

}  // namespace cqmorph
