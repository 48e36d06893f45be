#include "cqmorph/sampling.hpp"

#include <cmath>

namespace cqmorph {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

ProbVector random_prob_vector(Rng& rng, std::size_t n, double zero_prob) {
  std::exponential_distribution<double> expo(1.0);
  std::bernoulli_distribution drop(zero_prob);
  std::vector<double> w(n);
  double sum = 0.0;
  for (auto& v : w) {
    v = expo(rng);
    if (zero_prob > 0.0 && drop(rng)) v = 0.0;
    sum += v;
  }
  if (sum == 0.0) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    w[pick(rng)] = 1.0;
    sum = 1.0;
  }
  for (auto& v : w) v /= sum;
  return ProbVector(std::move(w));
}

Matrix random_ginibre(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  }
  return g;
}

HermitianOp random_hermitian(Rng& rng, int dim) {
  const Matrix g = random_ginibre(rng, dim, dim);
  return HermitianOp::symmetrized(0.5 * (g + g.adjoint()));
}

DensityOp random_density(Rng& rng, int dim, int rank) {
  const Matrix g = random_ginibre(rng, dim, rank);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOp(HermitianOp::symmetrized(rho));
}

DensityOp random_pure(Rng& rng, int dim) {
  return DensityOp::pure(random_ginibre(rng, dim, 1).col(0));
}

Matrix random_isometry(Rng& rng, int rows, int cols) {
  const Matrix g = random_ginibre(rng, rows, cols);
  const Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  const Matrix r = qr.matrixQR();
  for (int j = 0; j < cols; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

Matrix random_unitary(Rng& rng, int dim) { return random_isometry(rng, dim, dim); }

CQChannel random_cq_channel(Rng& rng, std::size_t alphabet, int dim, int max_rank) {
  std::uniform_int_distribution<int> rank(1, max_rank);
  std::vector<DensityOp> states;
  states.reserve(alphabet);
  for (std::size_t x = 0; x < alphabet; ++x) states.push_back(random_density(rng, dim, rank(rng)));
  return CQChannel(std::move(states));
}

HermitianOp stinespring_apply(const Matrix& v, const HermitianOp& rho, int out_dim, int env_dim) {
  const Matrix big = v * rho.matrix() * v.adjoint();
  Matrix out = Matrix::Zero(out_dim, out_dim);
  for (int i = 0; i < out_dim; ++i) {
    for (int j = 0; j < out_dim; ++j) {
      Complex s = 0.0;
      for (int e = 0; e < env_dim; ++e) s += big(i * env_dim + e, j * env_dim + e);
      out(i, j) = s;
    }
  }
  return HermitianOp::symmetrized(out);
}

QuantumPair stinespring_apply(const Matrix& v, const QuantumPair& pair, int out_dim, int env_dim) {
  auto normalize = [](HermitianOp h) {
    return DensityOp((1.0 / h.trace()) * h);
  };
  return QuantumPair(normalize(stinespring_apply(v, pair.sigma0.op(), out_dim, env_dim)),
                     normalize(stinespring_apply(v, pair.sigma1.op(), out_dim, env_dim)));
}

}  // namespace cqmorph
