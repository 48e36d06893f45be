#include "cqmorph/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cqmorph {
namespace {

constexpr int kMaxJacobiSweeps = 100;
constexpr double kJacobiOffTol = 1e-13;

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw ValidationError(os.str());
  }
}

double off_diagonal_norm(const Matrix& a) {
  double off = 0.0;
  const auto n = a.rows();
  for (Eigen::Index q = 1; q < n; ++q) {
    for (Eigen::Index p = 0; p < q; ++p) off += std::norm(a(p, q));
  }
  return std::sqrt(2.0 * off);
}

// Rotates columns/rows p, q of `a` by G = diag(1, conj(phase)) * R(c, s) so
// that a(p, q) becomes zero; accumulates G into v.
void jacobi_rotate(Matrix& a, Matrix& v, Eigen::Index p, Eigen::Index q) {
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  const Complex phase = apq / mag;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double theta = (aqq - app) / (2.0 * mag);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const Complex cph = std::conj(phase);

  const auto n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = c * akp - s * cph * akq;
    a(k, q) = s * akp + c * cph * akq;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = c * apk - s * phase * aqk;
    a(q, k) = s * apk + c * phase * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = app - t * mag;
  a(q, q) = aqq + t * mag;

  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = c * vkp - s * cph * vkq;
    v(k, q) = s * vkp + c * cph * vkq;
  }
}

SpectralDecomp jacobi(Matrix a) {
  const auto n = a.rows();
  Matrix v = Matrix::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = a(i, i).real();

  const double scale = std::max(1.0, a.norm());
  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    if (off_diagonal_norm(a) < kJacobiOffTol * scale) break;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        // Skip entries that are already negligible against both pivots.
        const double mag = std::abs(a(p, q));
        if (mag == 0.0) continue;
        const double pivots = std::abs(a(p, p).real()) + std::abs(a(q, q).real());
        if (sweep > 3 && pivots + 1e4 * mag == pivots) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        jacobi_rotate(a, v, p, q);
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() < a(j, j).real();
  });

  SpectralDecomp out;
  out.eigenvalues.reserve(static_cast<std::size_t>(n));
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.eigenvalues.push_back(a(src, src).real());
    out.eigenvectors.col(k) = v.col(src);
  }
  return out;
}

Matrix weighted_outer(const SpectralDecomp& s, const std::vector<double>& w) {
  const auto n = s.eigenvectors.rows();
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] == 0.0) continue;
    const auto col = s.eigenvectors.col(static_cast<Eigen::Index>(k));
    out.noalias() += w[k] * (col * col.adjoint());
  }
  return out;
}

}  // namespace

HermitianOp::HermitianOp(Matrix m, double tol) {
  require_square(m, "HermitianOp");
  const auto n = m.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) {
        std::ostringstream os;
        os << "HermitianOp: entry (" << i << "," << j
           << ") is not the conjugate of its transpose partner";
        throw ValidationError(os.str());
      }
    }
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianOp HermitianOp::symmetrized(const Matrix& m) {
  require_square(m, "HermitianOp::symmetrized");
  return HermitianOp(Matrix(0.5 * (m + m.adjoint())), Unchecked{});
}

HermitianOp HermitianOp::diagonal(std::span<const double> entries) {
  const auto n = static_cast<Eigen::Index>(entries.size());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = entries[static_cast<std::size_t>(i)];
  return HermitianOp(std::move(m), Unchecked{});
}

HermitianOp HermitianOp::identity(int dim) {
  return HermitianOp(Matrix::Identity(dim, dim), Unchecked{});
}

HermitianOp HermitianOp::zero(int dim) {
  return HermitianOp(Matrix::Zero(dim, dim), Unchecked{});
}

double HermitianOp::frobenius_distance(const HermitianOp& other) const {
  if (other.dim() != dim()) throw ValidationError("frobenius_distance: dimension mismatch");
  return (m_ - other.m_).norm();
}

HermitianOp HermitianOp::operator+(const HermitianOp& o) const {
  if (o.dim() != dim()) throw ValidationError("HermitianOp +: dimension mismatch");
  return HermitianOp(Matrix(m_ + o.m_), Unchecked{});
}

HermitianOp HermitianOp::operator-(const HermitianOp& o) const {
  if (o.dim() != dim()) throw ValidationError("HermitianOp -: dimension mismatch");
  return HermitianOp(Matrix(m_ - o.m_), Unchecked{});
}

HermitianOp operator*(double s, const HermitianOp& h) {
  return HermitianOp(Matrix(s * h.m_), HermitianOp::Unchecked{});
}

DensityOp::DensityOp(HermitianOp op) : op_(std::move(op)) {
  if (op_.dim() == 0) throw ValidationError("DensityOp: empty operator");
  const Complex tr = op_.matrix().trace();
  if (std::abs(tr.real() - 1.0) > kTraceTol || std::abs(tr.imag()) > kHermitianTol) {
    std::ostringstream os;
    os.precision(17);
    os << "DensityOp: trace " << tr.real() << " is not 1";
    throw ValidationError(os.str());
  }
  const double lo = min_eigenvalue(op_);
  if (lo < -kPsdTol) {
    std::ostringstream os;
    os.precision(17);
    os << "DensityOp: smallest eigenvalue " << lo << " is negative";
    throw ValidationError(os.str());
  }
}

DensityOp DensityOp::pure(const Eigen::VectorXcd& psi) {
  const double nrm = psi.norm();
  if (nrm == 0.0) throw ValidationError("DensityOp::pure: zero vector");
  const Eigen::VectorXcd u = psi / nrm;
  return DensityOp(HermitianOp::symmetrized(u * u.adjoint()));
}

DensityOp DensityOp::maximally_mixed(int dim) {
  return DensityOp((1.0 / dim) * HermitianOp::identity(dim));
}

DensityOp DensityOp::diagonal(std::span<const double> p) {
  return DensityOp(HermitianOp::diagonal(p));
}

Matrix SpectralDecomp::reconstruct() const { return weighted_outer(*this, eigenvalues); }

SpectralDecomp eigh(const HermitianOp& m) { return jacobi(m.matrix()); }

SpectralDecomp eigh_unchecked(const Matrix& m) {
  require_square(m, "eigh");
  return jacobi(0.5 * (m + m.adjoint()));
}

double cutoff_scale(const SpectralDecomp& s) {
  double r = 1.0;
  for (double l : s.eigenvalues) r = std::max(r, std::abs(l));
  return r;
}

SpectralApplyResult spectral_apply(const HermitianOp& m,
                                   const std::function<double(double)>& g) {
  const SpectralDecomp s = eigh(m);
  std::vector<double> values;
  values.reserve(s.eigenvalues.size());
  bool infinite = false;
  for (double l : s.eigenvalues) {
    const double v = g(l);
    if (std::isnan(v)) {
      std::ostringstream os;
      os.precision(17);
      os << "spectral_apply: function undefined at eigenvalue " << l;
      throw DomainError(os.str());
    }
    if (std::isinf(v)) {
      if (v < 0) throw DomainError("spectral_apply: function is -inf on the spectrum");
      infinite = true;
      values.push_back(0.0);
      continue;
    }
    values.push_back(v);
  }
  return {HermitianOp::symmetrized(weighted_outer(s, values)), infinite};
}

HermitianOp support_projector(const HermitianOp& m, double tol) {
  const SpectralDecomp s = eigh(m);
  const double cut = tol * cutoff_scale(s);
  std::vector<double> w;
  w.reserve(s.eigenvalues.size());
  for (double l : s.eigenvalues) {
    if (l < -cut) throw ValidationError("support_projector: operator is not PSD");
    w.push_back(l > cut ? 1.0 : 0.0);
  }
  return HermitianOp::symmetrized(weighted_outer(s, w));
}

HermitianOp pinv(const HermitianOp& m, double tol) {
  const SpectralDecomp s = eigh(m);
  const double cut = tol * cutoff_scale(s);
  std::vector<double> w;
  w.reserve(s.eigenvalues.size());
  for (double l : s.eigenvalues) {
    if (l < -cut) throw ValidationError("pinv: operator is not PSD");
    w.push_back(l > cut ? 1.0 / l : 0.0);
  }
  return HermitianOp::symmetrized(weighted_outer(s, w));
}

HermitianOp schur_tilde(const HermitianOp& sigma0, const HermitianOp& sigma1, double tol) {
  if (sigma0.dim() != sigma1.dim()) throw ValidationError("schur_tilde: dimension mismatch");
  if (min_eigenvalue(sigma0) < -tol * std::max(1.0, max_eigenvalue(sigma0))) {
    throw ValidationError("schur_tilde: sigma0 is not PSD");
  }
  const Matrix pi = support_projector(sigma1, tol).matrix();
  const Matrix comp = Matrix::Identity(pi.rows(), pi.cols()) - pi;
  const Matrix& s0 = sigma0.matrix();

  const Matrix s11 = pi * s0 * pi;
  const Matrix s12 = pi * s0 * comp;
  const Matrix s21 = comp * s0 * pi;
  const HermitianOp s22 = HermitianOp::symmetrized(comp * s0 * comp);
  // Cut s22 against the scale of sigma0 so roundoff in an empty block is not
  // inverted.
  const double scale = std::max(1.0, max_eigenvalue(sigma0));
  const SpectralDecomp d22 = eigh(s22);
  std::vector<double> w;
  w.reserve(d22.eigenvalues.size());
  for (double l : d22.eigenvalues) w.push_back(l > tol * scale ? 1.0 / l : 0.0);
  const Matrix s22_pinv = weighted_outer(d22, w);

  return HermitianOp::symmetrized(s11 - s12 * s22_pinv * s21);
}

Matrix psd_project_unchecked(const Matrix& m) {
  const SpectralDecomp s = eigh_unchecked(m);
  std::vector<double> w;
  w.reserve(s.eigenvalues.size());
  for (double l : s.eigenvalues) w.push_back(std::max(l, 0.0));
  const Matrix out = weighted_outer(s, w);
  return 0.5 * (out + out.adjoint());
}

HermitianOp psd_project(const HermitianOp& m) {
  return HermitianOp::symmetrized(psd_project_unchecked(m.matrix()));
}

double min_eigenvalue(const HermitianOp& m) {
  if (m.dim() == 0) return 0.0;
  return eigh(m).eigenvalues.front();
}

double max_eigenvalue(const HermitianOp& m) {
  if (m.dim() == 0) return 0.0;
  return eigh(m).eigenvalues.back();
}

int numerical_rank(const HermitianOp& m, double tol) {
  const SpectralDecomp s = eigh(m);
  const double cut = tol * cutoff_scale(s);
  return static_cast<int>(std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(),
                                        [cut](double l) { return l > cut; }));
}

}  // namespace cqmorph
