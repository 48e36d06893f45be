#include "cqmorph/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cqmorph/criteria.hpp"
#include "cqmorph/format.hpp"
#include "cqmorph/simplex.hpp"

namespace cqmorph {
namespace {

constexpr double kMajorizationSlack = 1e-12;
constexpr int kStallWindow = 200;
constexpr double kStallImprovement = 1e-4;
constexpr double kRefineThreshold = 1e-2;
constexpr int kRefineAfter = 1000;

std::vector<std::size_t> descending_order(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  return idx;
}

// P^T (P P^T)^+ for a real constraint matrix P, with a relative cutoff on the
// Gram spectrum (constraint rows are linearly dependent in general).
Eigen::MatrixXd projector_gain(const Eigen::MatrixXd& p) {
  const Eigen::MatrixXd gram = p * p.transpose();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double cut = 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  Eigen::VectorXd inv(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) inv(i) = ev(i) > cut ? 1.0 / ev(i) : 0.0;
  return p.transpose() * es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

// Orthogonal projection onto {rho_x} with tr rho_x = 1 and
// sum_x p_theta(x) rho_x = sigma_theta. The constraints decouple entrywise:
// off-diagonal entries see only the two mixing rows, diagonal entries also
// see the trace rows.
class AffineProjector {
 public:
  AffineProjector(const ClassicalPair& from, const QuantumPair& to)
      : n_(static_cast<Eigen::Index>(from.size())), d_(to.dim()) {
    Eigen::MatrixXd mix(2, n_);
    for (Eigen::Index x = 0; x < n_; ++x) {
      mix(0, x) = from.p0[static_cast<std::size_t>(x)];
      mix(1, x) = from.p1[static_cast<std::size_t>(x)];
    }
    mix_ = mix;
    off_gain_ = projector_gain(mix);

    Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2 * d_ + n_, n_ * d_);
    for (Eigen::Index i = 0; i < d_; ++i) {
      for (Eigen::Index x = 0; x < n_; ++x) {
        diag(i, x * d_ + i) = mix(0, x);
        diag(d_ + i, x * d_ + i) = mix(1, x);
      }
    }
    for (Eigen::Index x = 0; x < n_; ++x) {
      for (Eigen::Index i = 0; i < d_; ++i) diag(2 * d_ + x, x * d_ + i) = 1.0;
    }
    diag_ = diag;
    diag_gain_ = projector_gain(diag);
    diag_rhs_ = Eigen::VectorXd::Ones(2 * d_ + n_);
    for (Eigen::Index i = 0; i < d_; ++i) {
      diag_rhs_(i) = to.sigma0.matrix()(i, i).real();
      diag_rhs_(d_ + i) = to.sigma1.matrix()(i, i).real();
    }
    s0_ = to.sigma0.matrix();
    s1_ = to.sigma1.matrix();
  }

  void project(std::vector<Matrix>& rho) const {
    Eigen::VectorXcd z(n_);
    Eigen::VectorXcd target(2);
    for (Eigen::Index i = 0; i < d_; ++i) {
      for (Eigen::Index j = i + 1; j < d_; ++j) {
        for (Eigen::Index x = 0; x < n_; ++x) z(x) = rho[static_cast<std::size_t>(x)](i, j);
        target(0) = s0_(i, j);
        target(1) = s1_(i, j);
        const Eigen::VectorXcd r = mix_.cast<Complex>() * z - target;
        z -= off_gain_.cast<Complex>() * r;
        for (Eigen::Index x = 0; x < n_; ++x) {
          rho[static_cast<std::size_t>(x)](i, j) = z(x);
          rho[static_cast<std::size_t>(x)](j, i) = std::conj(z(x));
        }
      }
    }
    Eigen::VectorXd u(n_ * d_);
    for (Eigen::Index x = 0; x < n_; ++x) {
      for (Eigen::Index i = 0; i < d_; ++i) u(x * d_ + i) = rho[static_cast<std::size_t>(x)](i, i).real();
    }
    u -= diag_gain_ * (diag_ * u - diag_rhs_);
    for (Eigen::Index x = 0; x < n_; ++x) {
      for (Eigen::Index i = 0; i < d_; ++i) rho[static_cast<std::size_t>(x)](i, i) = u(x * d_ + i);
    }
  }

 private:
  Eigen::Index n_;
  Eigen::Index d_;
  Eigen::MatrixXd mix_;
  Eigen::MatrixXd off_gain_;
  Eigen::MatrixXd diag_;
  Eigen::MatrixXd diag_gain_;
  Eigen::VectorXd diag_rhs_;
  Matrix s0_;
  Matrix s1_;
};

double frobenius_gap(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
  double s = 0.0;
  for (std::size_t x = 0; x < a.size(); ++x) s += (a[x] - b[x]).squaredNorm();
  return std::sqrt(s);
}

// Fallback for thin feasible sets, where the projections converge
// sublinearly: maximize t subject to rho_x - t I >= 0 over the affine set with
// a log-barrier Newton method in nullspace coordinates. A point with t close
// to 0 from below lies within |t| of the cone.
class MaxMinEigSolver {
 public:
  MaxMinEigSolver(const ClassicalPair& from, const QuantumPair& to) : n_(from.size()), d_(to.dim()) {
    const Eigen::Index h = static_cast<Eigen::Index>(d_) * d_;
    const Eigen::Index rows = static_cast<Eigen::Index>(n_) + 2 * h;
    const Eigen::Index cols = static_cast<Eigen::Index>(n_) * h;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, cols);
    Eigen::VectorXd c(h);
    for (std::size_t x = 0; x < n_; ++x) {
      for (Eigen::Index k = 0; k < h; ++k) {
        const Matrix e = unit(k);
        const Eigen::Index col = static_cast<Eigen::Index>(x) * h + k;
        a(static_cast<Eigen::Index>(x), col) = e.trace().real();
        coords(e, c, 0);
        a.col(col).segment(static_cast<Eigen::Index>(n_), h) = from.p0[x] * c;
        a.col(col).segment(static_cast<Eigen::Index>(n_) + h, h) = from.p1[x] * c;
      }
    }
    Eigen::VectorXd b(rows);
    b.head(static_cast<Eigen::Index>(n_)).setOnes();
    coords(to.sigma0.matrix(), b, static_cast<Eigen::Index>(n_));
    coords(to.sigma1.matrix(), b, static_cast<Eigen::Index>(n_) + h);

    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a.transpose());
    const Eigen::Index rank = qr.rank();
    const Eigen::MatrixXd q = qr.householderQ();
    const Eigen::VectorXd particular = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(a).solve(b);
    consistent_ = (a * particular - b).norm() <= 1e-10 * std::max(1.0, b.norm());
    base_ = blocks(particular);
    const Eigen::Index k = cols - rank;
    dirs_.reserve(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) dirs_.push_back(blocks(q.col(rank + i)));
  }

  /// Blocks of the best point found when its min eigenvalue is >= -slack.
  std::optional<std::vector<Matrix>> solve(double slack) const {
    if (!consistent_) return std::nullopt;
    const Eigen::Index k = static_cast<Eigen::Index>(dirs_.size());
    Eigen::VectorXd z = Eigen::VectorXd::Zero(k + 1);  // (c, t)
    z(k) = min_eig(point(z)) - 1.0;
    const double m = static_cast<double>(n_) * d_;
    for (double mu = 1e-1; mu * m > 1e-13; mu *= 0.2) {
      for (int newton = 0; newton < 60; ++newton) {
        Eigen::VectorXd grad;
        Eigen::MatrixXd hess;
        if (!derivatives(z, mu, grad, hess)) return std::nullopt;
        const Eigen::VectorXd step = -hess.ldlt().solve(grad);
        const double decrement = -grad.dot(step);
        if (!(decrement >= 0.0) || !step.allFinite()) break;
        if (decrement < 1e-14) break;
        const double f0 = objective(z, mu);
        double alpha = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
          const Eigen::VectorXd trial = z + alpha * step;
          const double f = objective(trial, mu);
          if (std::isfinite(f) && f <= f0 - 0.25 * alpha * decrement) {
            z = trial;
            moved = true;
            break;
          }
        }
        if (!moved || decrement < 1e-12) break;
      }
      if (z(k) > 0.0) break;
    }
    if (z(k) < -slack) return std::nullopt;
    return point(z);
  }

 private:
  static Matrix unit_for(int d, Eigen::Index k) {
    Matrix e = Matrix::Zero(d, d);
    if (k < d) {
      e(k, k) = 1.0;
      return e;
    }
    k -= d;
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        if (k == 0) {
          e(i, j) = 1.0;
          e(j, i) = 1.0;
          return e;
        }
        if (k == 1) {
          e(i, j) = Complex(0.0, 1.0);
          e(j, i) = Complex(0.0, -1.0);
          return e;
        }
        k -= 2;
      }
    }
    return e;
  }
  Matrix unit(Eigen::Index k) const { return unit_for(d_, k); }

  void coords(const Matrix& m, Eigen::VectorXd& out, Eigen::Index at) const {
    for (int i = 0; i < d_; ++i) out(at++) = m(i, i).real();
    for (int i = 0; i < d_; ++i) {
      for (int j = i + 1; j < d_; ++j) {
        out(at++) = m(i, j).real();
        out(at++) = m(i, j).imag();
      }
    }
  }

  std::vector<Matrix> blocks(const Eigen::VectorXd& v) const {
    const Eigen::Index h = static_cast<Eigen::Index>(d_) * d_;
    std::vector<Matrix> out(n_, Matrix::Zero(d_, d_));
    for (std::size_t x = 0; x < n_; ++x) {
      for (Eigen::Index k = 0; k < h; ++k) out[x] += v(static_cast<Eigen::Index>(x) * h + k) * unit(k);
    }
    return out;
  }

  std::vector<Matrix> point(const Eigen::VectorXd& z) const {
    std::vector<Matrix> out = base_;
    for (std::size_t i = 0; i < dirs_.size(); ++i) {
      const double ci = z(static_cast<Eigen::Index>(i));
      if (ci == 0.0) continue;
      for (std::size_t x = 0; x < n_; ++x) out[x] += ci * dirs_[i][x];
    }
    return out;
  }

  static double min_eig(const std::vector<Matrix>& rho) {
    double lo = std::numeric_limits<double>::infinity();
    for (const Matrix& m : rho) {
      lo = std::min(lo, Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly).eigenvalues().minCoeff());
    }
    return lo;
  }

  // -t - mu * sum_x log det(rho_x - t I); +inf outside the domain.
  double objective(const Eigen::VectorXd& z, double mu) const {
    const double t = z(z.size() - 1);
    const std::vector<Matrix> rho = point(z);
    double logdet = 0.0;
    for (const Matrix& m : rho) {
      const Eigen::LLT<Matrix> llt(m - t * Matrix::Identity(d_, d_));
      if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
      const Eigen::VectorXcd diag = llt.matrixLLT().diagonal();
      for (Eigen::Index i = 0; i < diag.size(); ++i) {
        const double v = diag(i).real();
        if (!(v > 0.0)) return std::numeric_limits<double>::infinity();
        logdet += 2.0 * std::log(v);
      }
    }
    return -t - mu * logdet;
  }

  bool derivatives(const Eigen::VectorXd& z, double mu, Eigen::VectorXd& grad, Eigen::MatrixXd& hess) const {
    const Eigen::Index k = static_cast<Eigen::Index>(dirs_.size());
    const double t = z(k);
    const std::vector<Matrix> rho = point(z);
    grad = Eigen::VectorXd::Zero(k + 1);
    grad(k) = -1.0;
    hess = Eigen::MatrixXd::Zero(k + 1, k + 1);
    Eigen::MatrixXcd w(static_cast<Eigen::Index>(d_) * d_, k + 1);
    for (std::size_t x = 0; x < n_; ++x) {
      const Eigen::SelfAdjointEigenSolver<Matrix> es(rho[x] - t * Matrix::Identity(d_, d_));
      if (!(es.eigenvalues().minCoeff() > 0.0)) return false;
      const Matrix root_inv =
          es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() *
          es.eigenvectors().adjoint();
      for (Eigen::Index i = 0; i <= k; ++i) {
        const Matrix zi = i < k ? dirs_[static_cast<std::size_t>(i)][x] : Matrix(-Matrix::Identity(d_, d_));
        const Matrix wi = root_inv * zi * root_inv;
        grad(i) -= mu * wi.trace().real();
        w.col(i) = Eigen::Map<const Eigen::VectorXcd>(wi.data(), wi.size());
      }
      hess.noalias() += mu * (w.adjoint() * w).real();
    }
    return true;
  }

  std::size_t n_;
  int d_;
  bool consistent_ = false;
  std::vector<Matrix> base_;
  std::vector<std::vector<Matrix>> dirs_;
};

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Feasible:
      return "Feasible";
    case Verdict::Infeasible:
      return "Infeasible";
    case Verdict::Undetermined:
      return "Undetermined";
  }
  return "Undetermined";
}

double reproduction_residual(const TransitionMatrix& p, const ClassicalPair& from,
                             const ClassicalPair& to) {
  double worst = 0.0;
  const std::vector<double> out0 = p.apply(from.p0.weights());
  const std::vector<double> out1 = p.apply(from.p1.weights());
  double r0 = 0.0;
  double r1 = 0.0;
  for (std::size_t y = 0; y < out0.size(); ++y) {
    r0 += std::abs(out0[y] - to.p0[y]);
    r1 += std::abs(out1[y] - to.p1[y]);
  }
  worst = std::max(r0, r1);
  return worst;
}

double reproduction_residual(const CQChannel& channel, const ClassicalPair& from,
                             const QuantumPair& to) {
  const double r0 = channel.apply(from.p0).frobenius_distance(to.sigma0.op());
  const double r1 = channel.apply(from.p1).frobenius_distance(to.sigma1.op());
  return std::max(r0, r1);
}

FeasibilityReport classical_feasible(const ClassicalPair& from, const ClassicalPair& to,
                                     double tol) {
  const auto n = static_cast<Eigen::Index>(from.size());
  const auto m = static_cast<Eigen::Index>(to.size());
  // Variable P(y, x) lives at column x * m + y.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 2 * m, n * m);
  Eigen::VectorXd b(n + 2 * m);
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < m; ++y) a(x, x * m + y) = 1.0;
    b(x) = 1.0;
  }
  for (Eigen::Index y = 0; y < m; ++y) {
    for (Eigen::Index x = 0; x < n; ++x) {
      a(n + y, x * m + y) = from.p0[static_cast<std::size_t>(x)];
      a(n + m + y, x * m + y) = from.p1[static_cast<std::size_t>(x)];
    }
    b(n + y) = to.p0[static_cast<std::size_t>(y)];
    b(n + m + y) = to.p1[static_cast<std::size_t>(y)];
  }

  const Phase1Result lp = phase1_feasibility(a, b, tol);
  FeasibilityReport report;
  report.iterations = lp.pivots;
  if (!lp.feasible) {
    report.status = Verdict::Infeasible;
    report.lp_objective = lp.objective;
    report.certificate = "phase-1 optimum " + format_real(lp.objective) + " > 0";
    return report;
  }

  Eigen::MatrixXd p(m, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    double sum = 0.0;
    for (Eigen::Index y = 0; y < m; ++y) {
      p(y, x) = lp.x(x * m + y);
      sum += p(y, x);
    }
    if (sum > 0.0) p.col(x) /= sum;
  }
  TransitionMatrix tm(std::move(p));
  report.residual = reproduction_residual(tm, from, to);
  report.status = report.residual <= 10.0 * tol ? Verdict::Feasible : Verdict::Undetermined;
  if (report.status == Verdict::Undetermined) {
    report.note = "phase-1 accepted but the extracted matrix misses the targets";
  }
  report.transition = std::move(tm);
  report.lp_objective = lp.objective;
  return report;
}

FeasibilityReport majorization_feasible(const ProbVector& p0, const ProbVector& target0) {
  if (p0.size() != target0.size()) throw ValidationError("majorization_feasible: size mismatch");
  const std::size_t n = p0.size();
  const auto src_order = descending_order(p0.weights());
  const auto dst_order = descending_order(target0.weights());

  FeasibilityReport report;
  double src_sum = 0.0;
  double dst_sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    src_sum += p0[src_order[k]];
    dst_sum += target0[dst_order[k]];
    if (dst_sum > src_sum + kMajorizationSlack) {
      std::ostringstream os;
      os << "partial sum " << (k + 1) << ": target " << format_real(dst_sum) << " > source "
         << format_real(src_sum);
      report.status = Verdict::Infeasible;
      report.certificate = os.str();
      return report;
    }
  }

  // T-transform construction on sorted vectors: take the last excess entry j
  // and the first deficit entry k > j; moving min(excess, deficit) from j to k
  // equalizes one coordinate and keeps x sorted and majorizing y.
  Eigen::VectorXd x(static_cast<Eigen::Index>(n));
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    x(static_cast<Eigen::Index>(k)) = p0[src_order[k]];
    y(static_cast<Eigen::Index>(k)) = target0[dst_order[k]];
  }
  Eigen::MatrixXd d = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t step = 0; step < n * n; ++step) {
    Eigen::Index j = -1;
    for (Eigen::Index i = x.size() - 1; i >= 0; --i) {
      if (x(i) - y(i) > kMajorizationSlack) {
        j = i;
        break;
      }
    }
    if (j < 0) break;
    Eigen::Index k = -1;
    for (Eigen::Index i = j + 1; i < x.size(); ++i) {
      if (y(i) - x(i) > kMajorizationSlack) {
        k = i;
        break;
      }
    }
    if (k < 0) break;
    const double delta = std::min(x(j) - y(j), y(k) - x(k));
    const double spread = x(j) - x(k);
    const double mu = delta / spread;
    Eigen::MatrixXd t = Eigen::MatrixXd::Identity(x.size(), x.size());
    t(j, j) = 1.0 - mu;
    t(j, k) = mu;
    t(k, j) = mu;
    t(k, k) = 1.0 - mu;
    x = t * x;
    d = t * d;
  }

  // Undo the sorting permutations: target = Pi_dst^T D Pi_src p0.
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      full(static_cast<Eigen::Index>(dst_order[r]), static_cast<Eigen::Index>(src_order[c])) =
          d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  TransitionMatrix tm(std::move(full));
  const std::vector<double> image = tm.apply(p0.weights());
  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i) res += std::abs(image[i] - target0[i]);
  report.status = Verdict::Feasible;
  report.residual = res;
  report.transition = std::move(tm);
  return report;
}

FeasibilityReport cq_feasible(const ClassicalPair& from, const QuantumPair& to, double tol,
                              int max_iter, const ScanGrids& grids) {
  const std::size_t n = from.size();
  const int d = to.dim();
  const AffineProjector affine(from, to);

  std::vector<Matrix> x(n, Matrix::Identity(d, d) / static_cast<double>(d));
  affine.project(x);
  std::vector<Matrix> inc(n, Matrix::Zero(d, d));
  std::vector<Matrix> y(n);

  FeasibilityReport report;
  auto accept = [&](const std::vector<Matrix>& blocks) {
    std::vector<DensityOp> states;
    states.reserve(n);
    for (const Matrix& m : blocks) {
      const double tr = m.trace().real();
      if (!(tr > 0.0)) return false;
      states.emplace_back(HermitianOp::symmetrized(psd_project_unchecked(m) / tr));
    }
    CQChannel channel(std::move(states));
    const double res = reproduction_residual(channel, from, to);
    if (res > 10.0 * tol) return false;
    report.residual = res;
    report.status = Verdict::Feasible;
    report.channel = std::move(channel);
    return true;
  };
  bool refined = false;
  auto try_refine = [&]() {
    if (refined) return false;
    refined = true;
    const auto blocks = MaxMinEigSolver(from, to).solve(tol);
    if (blocks && accept(*blocks)) {
      report.note = "accepted by the max-min-eigenvalue refinement";
      return true;
    }
    return false;
  };

  double residual = std::numeric_limits<double>::infinity();
  double checkpoint = residual;
  int it = 0;
  for (; it < max_iter; ++it) {
    for (std::size_t k = 0; k < n; ++k) {
      const Matrix shifted = x[k] + inc[k];
      y[k] = psd_project_unchecked(shifted);
      inc[k] = shifted - y[k];
    }
    x = y;
    affine.project(x);
    residual = frobenius_gap(x, y);
    if (residual < tol) {
      report.iterations = it + 1;
      if (accept(y)) return report;
      break;
    }
    if ((it + 1) % kStallWindow == 0) {
      if (it + 1 == kRefineAfter && residual < kRefineThreshold && try_refine()) {
        report.iterations = it + 1;
        return report;
      }
      if (residual > 100.0 * tol && checkpoint - residual < kStallImprovement * residual) break;
      checkpoint = residual;
    }
  }
  report.iterations = std::min(it + 1, max_iter);
  if (it + 1 >= kRefineAfter && residual < kRefineThreshold && try_refine()) return report;

  const ScanResult scan = necessary_scan(from, to, grids);
  if (const ScanEntry* v = scan.worst_violation()) {
    report.status = Verdict::Infeasible;
    report.violation = Violation{v->label, v->lhs, v->rhs};
  } else {
    report.status = Verdict::Undetermined;
    report.note = "projection residual " + format_real(residual) +
                  " above tolerance and no scan violation";
  }
  return report;
}

FeasibilityReport pure_target_feasible(const ClassicalPair& from, const QuantumPair& to,
                                       double tol) {
  if (numerical_rank(to.sigma1.op()) != 1) {
    throw ValidationError("pure_target_feasible: sigma1 is not rank one");
  }
  const double gamma = schur_tilde(to.sigma0.op(), to.sigma1.op()).trace();
  double on_support = 0.0;
  std::vector<bool> in_support(from.size());
  for (std::size_t x = 0; x < from.size(); ++x) {
    in_support[x] = from.p1[x] > kClassicalSupportTol;
    if (in_support[x]) on_support += from.p0[x];
  }

  FeasibilityReport report;
  if (on_support > gamma + tol) {
    report.status = Verdict::Infeasible;
    report.certificate = "on-support mass " + format_real(on_support) + " > gamma " +
                         format_real(gamma);
    // A power -x^s close enough to s = 1 exhibits the violation directly.
    for (int k = 1; k <= 12; ++k) {
      const double s = 1.0 - std::pow(10.0, -k);
      const ConvexFn f = power_family(s);
      const double lhs = f_divergence(f, from);
      const double rhs = -std::pow(gamma, s);
      if (is_violation(lhs, rhs, kScanTol)) {
        report.violation = Violation{f.label(), lhs, rhs};
        return report;
      }
    }
    report.violation = Violation{"power:1-", -on_support, -gamma};
    return report;
  }

  const DensityOp& s1 = to.sigma1;
  const double off_support = 1.0 - on_support;
  std::vector<DensityOp> states;
  states.reserve(from.size());
  std::optional<DensityOp> rest;
  if (off_support > tol) {
    Matrix m = psd_project_unchecked(to.sigma0.matrix() - on_support * s1.matrix());
    m /= m.trace().real();
    rest = DensityOp(HermitianOp::symmetrized(m));
  }
  for (std::size_t x = 0; x < from.size(); ++x) {
    states.push_back(in_support[x] || !rest ? s1 : *rest);
  }
  CQChannel channel(std::move(states));
  report.residual = reproduction_residual(channel, from, to);
  report.status = Verdict::Feasible;
  report.channel = std::move(channel);
  return report;
}

}  // namespace cqmorph
