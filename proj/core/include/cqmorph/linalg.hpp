#pragma once

// Dense Hermitian linear algebra for small (dim <= ~32) operators.
//
// Everything here is a pure function of immutable values. The eigensolver is
// a cyclic complex Jacobi iteration; all support and pseudo-inverse
// operations take an explicit cutoff `tol` which is interpreted relative to
// max(1, largest |eigenvalue|) of the operator being cut.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cqmorph {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kSupportTol = 1e-9;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kTraceTol = 1e-9;

/// Raised when an input violates a documented invariant (shape, Hermiticity,
/// positivity, normalization).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a scalar function is undefined (NaN) on part of a spectrum.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class HermitianOp {
 public:
  HermitianOp() = default;

  /// Validates squareness and entries[i][j] == conj(entries[j][i]) within
  /// `tol`, then stores the exactly symmetrized matrix.
  explicit HermitianOp(Matrix m, double tol = kHermitianTol);

  /// Symmetrizes without checking. For products that are Hermitian by
  /// construction and only carry roundoff asymmetry.
  static HermitianOp symmetrized(const Matrix& m);
  static HermitianOp diagonal(std::span<const double> entries);
  static HermitianOp identity(int dim);
  static HermitianOp zero(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }
  double trace() const { return m_.trace().real(); }
  double frobenius_distance(const HermitianOp& other) const;

  HermitianOp operator+(const HermitianOp& o) const;
  HermitianOp operator-(const HermitianOp& o) const;
  friend HermitianOp operator*(double s, const HermitianOp& h);

 private:
  struct Unchecked {};
  HermitianOp(Matrix m, Unchecked) : m_(std::move(m)) {}

  Matrix m_;
};

/// A positive semidefinite, unit-trace HermitianOp.
class DensityOp {
 public:
  DensityOp() = default;
  explicit DensityOp(HermitianOp op);
  explicit DensityOp(Matrix m) : DensityOp(HermitianOp(std::move(m))) {}

  /// Pure state |psi><psi| of a (not necessarily normalized) vector.
  static DensityOp pure(const Eigen::VectorXcd& psi);
  static DensityOp maximally_mixed(int dim);
  /// diag(p) for a probability vector p.
  static DensityOp diagonal(std::span<const double> p);

  const HermitianOp& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  int dim() const { return op_.dim(); }
  double trace() const { return op_.trace(); }

 private:
  HermitianOp op_;
};

struct SpectralDecomp {
  std::vector<double> eigenvalues;  // ascending
  Matrix eigenvectors;              // columns, unitary

  Matrix reconstruct() const;
};

SpectralDecomp eigh(const HermitianOp& m);

/// Jacobi eigensolver on a raw matrix assumed Hermitian; only the upper
/// triangle's Hermitian part is meaningful. Used on hot paths where the
/// caller guarantees Hermiticity by construction.
SpectralDecomp eigh_unchecked(const Matrix& m);

/// max(1, spectral radius) scaling used by every tolerance cutoff.
double cutoff_scale(const SpectralDecomp& s);

struct SpectralApplyResult {
  HermitianOp value;          // entries for infinite eigenvalues are dropped
  bool has_infinite = false;  // some g(lambda_i) == +inf
};

/// U diag(g(lambda_i)) U^dagger. Throws DomainError when g is NaN at an
/// eigenvalue or -inf.
SpectralApplyResult spectral_apply(const HermitianOp& m,
                                   const std::function<double(double)>& g);

/// Projector onto span of eigenvectors with eigenvalue > tol * scale.
/// Throws ValidationError if some eigenvalue is below -tol * scale.
HermitianOp support_projector(const HermitianOp& m, double tol = kSupportTol);

/// Moore-Penrose pseudo-inverse of a PSD operator.
HermitianOp pinv(const HermitianOp& m, double tol = kSupportTol);

/// Schur complement of sigma0 relative to supp sigma1:
///   s11 - s12 pinv(s22) s21, blocks cut by the support projector of sigma1.
HermitianOp schur_tilde(const HermitianOp& sigma0, const HermitianOp& sigma1,
                        double tol = kSupportTol);

/// Nearest PSD matrix in Frobenius norm.
HermitianOp psd_project(const HermitianOp& m);
Matrix psd_project_unchecked(const Matrix& m);

double min_eigenvalue(const HermitianOp& m);
double max_eigenvalue(const HermitianOp& m);

/// Numerical rank: number of eigenvalues > tol * scale.
int numerical_rank(const HermitianOp& m, double tol = kSupportTol);

}  // namespace cqmorph
