#pragma once

// Seeded random instances: probability vectors, density operators, Haar
// isometries and channels. Every generator takes its RNG explicitly.

#include <cstdint>
#include <random>

#include "cqmorph/channel.hpp"
#include "cqmorph/divergence.hpp"
#include "cqmorph/linalg.hpp"

namespace cqmorph {

using Rng = std::mt19937_64;

/// Independent stream for (seed, stream); used to split by trial index.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Flat Dirichlet sample; each coordinate is zeroed with probability
/// `zero_prob` (at least one coordinate stays positive).
ProbVector random_prob_vector(Rng& rng, std::size_t n, double zero_prob = 0.0);

Matrix random_ginibre(Rng& rng, int rows, int cols);
HermitianOp random_hermitian(Rng& rng, int dim);
/// G G^dagger / tr for a dim x rank Ginibre G.
DensityOp random_density(Rng& rng, int dim, int rank);
DensityOp random_pure(Rng& rng, int dim);

/// Haar-distributed rows x cols isometry (rows >= cols): QR of a Ginibre
/// matrix with the R-diagonal phases removed.
Matrix random_isometry(Rng& rng, int rows, int cols);
Matrix random_unitary(Rng& rng, int dim);

/// Each symbol gets a random state of rank in [1, max_rank].
CQChannel random_cq_channel(Rng& rng, std::size_t alphabet, int dim, int max_rank);

/// tr_E (V rho V^dagger) for V : C^d -> C^out (x) C^env, out-major ordering.
HermitianOp stinespring_apply(const Matrix& v, const HermitianOp& rho, int out_dim, int env_dim);
QuantumPair stinespring_apply(const Matrix& v, const QuantumPair& pair, int out_dim, int env_dim);

}  // namespace cqmorph
