#include "cqmorph/channel.hpp"

#include <cmath>
#include <sstream>

#include "cqmorph/divergence.hpp"

namespace cqmorph {

CQChannel::CQChannel(std::vector<DensityOp> states) : states_(std::move(states)) {
  for (const auto& s : states_) {
    if (s.dim() != states_.front().dim()) {
      throw ValidationError("CQChannel: states have different dimensions");
    }
  }
}

HermitianOp CQChannel::apply(std::span<const double> p) const {
  if (p.size() != states_.size()) {
    std::ostringstream os;
    os << "CQChannel::apply: distribution has " << p.size() << " symbols, channel has "
       << states_.size();
    throw ValidationError(os.str());
  }
  Matrix out = Matrix::Zero(dim(), dim());
  for (std::size_t x = 0; x < states_.size(); ++x) {
    if (p[x] != 0.0) out += p[x] * states_[x].matrix();
  }
  return HermitianOp::symmetrized(out);
}

HermitianOp CQChannel::apply(const ProbVector& p) const { return apply(p.weights()); }

TransitionMatrix::TransitionMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  for (Eigen::Index x = 0; x < m_.cols(); ++x) {
    double sum = 0.0;
    for (Eigen::Index y = 0; y < m_.rows(); ++y) {
      if (m_(y, x) < -kProbNegTol) throw ValidationError("TransitionMatrix: negative entry");
      m_(y, x) = std::max(m_(y, x), 0.0);
      sum += m_(y, x);
    }
    if (std::abs(sum - 1.0) > kProbSumTol) {
      std::ostringstream os;
      os << "TransitionMatrix: column " << x << " sums to " << sum;
      throw ValidationError(os.str());
    }
  }
}

TransitionMatrix TransitionMatrix::identity(int n) {
  return TransitionMatrix(Eigen::MatrixXd::Identity(n, n));
}

std::vector<double> TransitionMatrix::apply(std::span<const double> p) const {
  if (static_cast<Eigen::Index>(p.size()) != m_.cols()) {
    throw ValidationError("TransitionMatrix::apply: size mismatch");
  }
  std::vector<double> out(static_cast<std::size_t>(m_.rows()), 0.0);
  for (Eigen::Index y = 0; y < m_.rows(); ++y) {
    for (Eigen::Index x = 0; x < m_.cols(); ++x) {
      out[static_cast<std::size_t>(y)] += m_(y, x) * p[static_cast<std::size_t>(x)];
    }
  }
  return out;
}

CQChannel compose(const TransitionMatrix& p, const CQChannel& channel) {
  if (static_cast<std::size_t>(p.rows()) != channel.alphabet_size()) {
    throw ValidationError("compose: transition matrix rows do not match channel alphabet");
  }
  std::vector<DensityOp> states;
  states.reserve(static_cast<std::size_t>(p.cols()));
  for (int x = 0; x < p.cols(); ++x) {
    std::vector<double> column(static_cast<std::size_t>(p.rows()));
    double sum = 0.0;
    for (int y = 0; y < p.rows(); ++y) {
      column[static_cast<std::size_t>(y)] = p(y, x);
      sum += p(y, x);
    }
    // Columns are stochastic to 1e-9; renormalize so the state has unit trace.
    for (double& c : column) c /= sum;
    states.emplace_back(channel.apply(column));
  }
  return CQChannel(std::move(states));
}

}  // namespace cqmorph
