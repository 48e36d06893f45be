#include "cqmorph/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "cqmorph/format.hpp"

namespace cqmorph {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMergeTol = 1e-9;

// Spectral data of X = sigma1^{-1/2} schur_tilde sigma1^{-1/2} on supp sigma1,
// in the coordinates of sigma1's support eigenvectors.
struct RelativeDecomp {
  HermitianOp schur;
  Matrix half;                      // d x k: U_s diag(mu^{1/2})
  std::vector<double> ratios;       // eigenvalues of X, ascending, >= 0
  Matrix ratio_vectors;             // k x k eigenvectors of X
  std::vector<double> weights;      // tr sigma1 P_j
  double deficit = 0.0;
};

RelativeDecomp relative_decomp(const QuantumPair& pair, double tol) {
  RelativeDecomp out;
  out.schur = schur_tilde(pair.sigma0.op(), pair.sigma1.op(), tol);

  const SpectralDecomp s1 = eigh(pair.sigma1.op());
  const double cut = tol * cutoff_scale(s1);
  std::vector<Eigen::Index> support;
  for (std::size_t i = 0; i < s1.eigenvalues.size(); ++i) {
    if (s1.eigenvalues[i] > cut) support.push_back(static_cast<Eigen::Index>(i));
  }
  const auto d = static_cast<Eigen::Index>(pair.dim());
  const auto k = static_cast<Eigen::Index>(support.size());
  Matrix inv_half(d, k);
  out.half.resize(d, k);
  Eigen::VectorXd mu(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const double m = s1.eigenvalues[static_cast<std::size_t>(support[static_cast<std::size_t>(c)])];
    mu(c) = m;
    const auto col = s1.eigenvectors.col(support[static_cast<std::size_t>(c)]);
    out.half.col(c) = std::sqrt(m) * col;
    inv_half.col(c) = col / std::sqrt(m);
  }

  const Matrix x = inv_half.adjoint() * out.schur.matrix() * inv_half;
  const SpectralDecomp sx = eigh_unchecked(x);
  const double xcut = tol * cutoff_scale(sx);
  out.ratio_vectors = sx.eigenvectors;
  out.ratios.reserve(static_cast<std::size_t>(k));
  out.weights.reserve(static_cast<std::size_t>(k));
  for (Eigen::Index j = 0; j < k; ++j) {
    const double xi = sx.eigenvalues[static_cast<std::size_t>(j)];
    out.ratios.push_back(xi > xcut ? xi : 0.0);
    double w = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) w += mu(i) * std::norm(sx.eigenvectors(i, j));
    out.weights.push_back(w);
  }

  const double deficit = 1.0 - out.schur.trace();
  out.deficit = deficit > tol ? deficit : 0.0;
  return out;
}

}  // namespace

ProbVector::ProbVector(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw ValidationError("ProbVector: empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (!std::isfinite(w_[i]) || w_[i] < -kProbNegTol) {
      std::ostringstream os;
      os << "ProbVector: weight " << i << " is " << format_real(w_[i]);
      throw ValidationError(os.str());
    }
    w_[i] = std::max(w_[i], 0.0);
    sum += w_[i];
  }
  if (std::abs(sum - 1.0) > kProbSumTol) {
    throw ValidationError("ProbVector: weights sum to " + format_real(sum));
  }
}

ProbVector ProbVector::uniform(std::size_t n) {
  return ProbVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ClassicalPair::ClassicalPair(ProbVector a, ProbVector b) : p0(std::move(a)), p1(std::move(b)) {
  if (p0.size() != p1.size()) throw ValidationError("ClassicalPair: alphabet sizes differ");
}

QuantumPair::QuantumPair(DensityOp a, DensityOp b) : sigma0(std::move(a)), sigma1(std::move(b)) {
  if (sigma0.dim() != sigma1.dim()) throw ValidationError("QuantumPair: dimensions differ");
}

QuantumPair QuantumPair::diagonal(const ClassicalPair& pair) {
  return QuantumPair(DensityOp::diagonal(pair.p0.weights()),
                     DensityOp::diagonal(pair.p1.weights()));
}

WeightedSpectrum classical_spectrum(const ClassicalPair& pair, double support_tol) {
  WeightedSpectrum s;
  double off = 0.0;
  for (std::size_t x = 0; x < pair.size(); ++x) {
    const double a = pair.p0[x];
    const double b = pair.p1[x];
    if (b > support_tol) {
      s.ratios.push_back(a / b);
      s.weights.push_back(b);
    } else {
      off += a;
    }
  }
  s.deficit = off > support_tol ? off : 0.0;
  return s;
}

WeightedSpectrum relative_spectrum(const QuantumPair& pair, double tol) {
  RelativeDecomp d = relative_decomp(pair, tol);
  return {std::move(d.ratios), std::move(d.weights), d.deficit};
}

double evaluate(const ConvexFn& f, const WeightedSpectrum& s) {
  double total = 0.0;
  for (std::size_t j = 0; j < s.ratios.size(); ++j) {
    if (s.weights[j] <= 0.0) continue;
    const double v = f(s.ratios[j]);
    if (std::isnan(v)) {
      throw DomainError("f-divergence: " + f.label() + " undefined at ratio " +
                        format_real(s.ratios[j]));
    }
    if (std::isinf(v)) return kInf;
    total += s.weights[j] * v;
  }
  if (s.deficit > 0.0) {
    const double slope = f.slope_at_infinity();
    if (std::isinf(slope)) return kInf;
    total += s.deficit * slope;
  }
  return total;
}

double f_divergence(const ConvexFn& f, const ClassicalPair& pair, double support_tol) {
  return evaluate(f, classical_spectrum(pair, support_tol));
}

double max_f_divergence(const ConvexFn& f, const QuantumPair& pair, double tol) {
  if (!f.operator_convex()) {
    throw ValidationError("max_f_divergence: closed form requires an operator convex function, got " +
                          f.label());
  }
  return evaluate(f, relative_spectrum(pair, tol));
}

double power_limit_check(const QuantumPair& pair, double s) {
  if (!(s > 0.0 && s < 1.0)) throw ValidationError("power_limit_check: s must lie in (0, 1)");
  return max_f_divergence(power_family(s), pair);
}

ReverseTest reverse_test(const QuantumPair& pair, double tol) {
  const RelativeDecomp d = relative_decomp(pair, tol);
  const double radius = d.ratios.empty() ? 0.0 : d.ratios.back();

  std::vector<double> q0;
  std::vector<double> q1;
  std::vector<DensityOp> states;
  std::size_t j = 0;
  while (j < d.ratios.size()) {
    std::size_t end = j + 1;
    while (end < d.ratios.size() && d.ratios[end] - d.ratios[j] <= kMergeTol * radius) ++end;

    const auto k = d.ratio_vectors.rows();
    Matrix proj = Matrix::Zero(k, k);
    double w = 0.0;
    double w_ratio = 0.0;
    for (std::size_t i = j; i < end; ++i) {
      const auto col = d.ratio_vectors.col(static_cast<Eigen::Index>(i));
      proj.noalias() += col * col.adjoint();
      w += d.weights[i];
      w_ratio += d.weights[i] * d.ratios[i];
    }
    Matrix state = d.half * proj * d.half.adjoint();
    state /= state.trace().real();
    states.emplace_back(HermitianOp::symmetrized(state));
    q1.push_back(w);
    q0.push_back(w_ratio);
    j = end;
  }

  std::optional<std::size_t> residue;
  if (d.deficit > 0.0) {
    Matrix rest = psd_project_unchecked(pair.sigma0.matrix() - d.schur.matrix());
    rest /= rest.trace().real();
    residue = states.size();
    states.emplace_back(HermitianOp::symmetrized(rest));
    q1.push_back(0.0);
    q0.push_back(d.deficit);
  }

  // Renormalize away roundoff (and the dropped sub-tolerance deficit).
  const double s0 = std::accumulate(q0.begin(), q0.end(), 0.0);
  const double s1 = std::accumulate(q1.begin(), q1.end(), 0.0);
  for (double& v : q0) v /= s0;
  for (double& v : q1) v /= s1;

  return ReverseTest{ClassicalPair(ProbVector(std::move(q0)), ProbVector(std::move(q1))),
                     CQChannel(std::move(states)), residue};
}

double dw_classical(const HermitianOp& w0, const HermitianOp& w1, const ClassicalPair& pair) {
  if (w0.dim() != w1.dim()) throw ValidationError("dw_classical: dimension mismatch");
  double total = 0.0;
  for (std::size_t x = 0; x < pair.size(); ++x) {
    total += eigh_unchecked(pair.p0[x] * w0.matrix() + pair.p1[x] * w1.matrix()).eigenvalues.back();
  }
  return total;
}

double extended_distance(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return (a == b) ? 0.0 : kInf;
  return std::abs(a - b);
}

}  // namespace cqmorph
