#pragma once

#include <Eigen/Dense>

namespace cqmorph {

struct Phase1Result {
  bool feasible = false;
  /// Optimal sum of artificial variables; a positive value certifies that
  /// {x >= 0 : A x = b} is empty.
  double objective = 0.0;
  Eigen::VectorXd x;
  int pivots = 0;
};

/// Phase-1 dense tableau simplex with Bland's anti-cycling rule. Decides
/// whether A x = b has a solution x >= 0; `tol` bounds the accepted
/// phase-1 optimum.
Phase1Result phase1_feasibility(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                double tol);

}  // namespace cqmorph
