#pragma once

#include <span>
#include <vector>

#include "cqmorph/linalg.hpp"

namespace cqmorph {

class ProbVector;

/// Classical-to-quantum channel given pointwise: one state per input symbol.
class CQChannel {
 public:
  CQChannel() = default;
  explicit CQChannel(std::vector<DensityOp> states);

  std::size_t alphabet_size() const { return states_.size(); }
  int dim() const { return states_.empty() ? 0 : states_.front().dim(); }
  const std::vector<DensityOp>& states() const { return states_; }
  const DensityOp& state(std::size_t x) const { return states_.at(x); }

  /// sum_x p(x) states[x].
  HermitianOp apply(std::span<const double> p) const;
  HermitianOp apply(const ProbVector& p) const;

 private:
  std::vector<DensityOp> states_;
};

/// Column-stochastic m x n matrix mapping distributions on n symbols to
/// distributions on m symbols.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  explicit TransitionMatrix(Eigen::MatrixXd m);

  static TransitionMatrix identity(int n);

  int rows() const { return static_cast<int>(m_.rows()); }
  int cols() const { return static_cast<int>(m_.cols()); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(int y, int x) const { return m_(y, x); }

  std::vector<double> apply(std::span<const double> p) const;

 private:
  Eigen::MatrixXd m_;
};

/// Channel x -> sum_y P(y, x) channel.state(y).
CQChannel compose(const TransitionMatrix& p, const CQChannel& channel);

}  // namespace cqmorph
