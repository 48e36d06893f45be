#include "cqmorph/simplex.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

namespace cqmorph {
namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-12;
constexpr int kMaxPivots = 200000;

}  // namespace

Phase1Result phase1_feasibility(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double tol) {
  if (a.rows() != b.size()) throw std::invalid_argument("phase1_feasibility: shape mismatch");
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  const Eigen::Index cols = n + m;

  // Tableau [A | I | b] with rows flipped so that b >= 0.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, cols + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = b(i) < 0.0 ? -1.0 : 1.0;
    t.row(i).head(n) = sign * a.row(i);
    t(i, n + i) = 1.0;
    t(i, cols) = sign * b(i);
  }
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  // Reduced costs for min sum(artificials) with the artificial basis.
  Eigen::RowVectorXd z = Eigen::RowVectorXd::Zero(cols + 1);
  for (Eigen::Index j = n; j < cols; ++j) z(j) = 1.0;
  for (Eigen::Index i = 0; i < m; ++i) z -= t.row(i);

  Phase1Result out;
  for (; out.pivots < kMaxPivots; ++out.pivots) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (z(j) < -kCostEps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;

    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double piv = t(i, enter);
      if (piv <= kPivotEps) continue;
      const double ratio = t(i, cols) / piv;
      if (ratio < best - 1e-15 ||
          (ratio <= best + 1e-15 && leave >= 0 &&
           basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave < 0) {
      // Unbounded direction; cannot happen for a phase-1 objective bounded by 0.
      z(enter) = 0.0;
      continue;
    }

    t.row(leave) /= t(leave, enter);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (i == leave) continue;
      const double factor = t(i, enter);
      if (factor != 0.0) t.row(i) -= factor * t.row(leave);
    }
    const double zf = z(enter);
    z -= zf * t.row(leave);
    basis[static_cast<std::size_t>(leave)] = enter;
  }

  out.x = Eigen::VectorXd::Zero(n);
  double artificial = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index v = basis[static_cast<std::size_t>(i)];
    const double value = std::max(t(i, cols), 0.0);
    if (v < n) {
      out.x(v) = value;
    } else {
      artificial += value;
    }
  }
  out.objective = artificial;
  out.feasible = artificial <= tol;
  return out;
}

}  // namespace cqmorph
