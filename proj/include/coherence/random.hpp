#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "coherence/state.hpp"

namespace coherence {

/// Explicitly seeded engine; never shared between threads.
using Rng = std::mt19937_64;

Eigen::MatrixXcd ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Haar-distributed unitary via QR of a Ginibre matrix with the phases of
/// diag(R) fixed to be positive.
Eigen::MatrixXcd haar_unitary(Eigen::Index n, Rng& rng);

/// First `cols` columns of a Haar unitary on `rows` dimensions.
Eigen::MatrixXcd haar_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Ginibre-induced random mixed state of the given rank (0 means full rank).
DensityMatrix random_state(HamiltonianPtr h, Rng& rng, Eigen::Index rank = 0);

/// Mixture of pure states each supported on `support` random basis levels,
/// so only a sparse set of modes carries coherence.
DensityMatrix random_sparse_state(HamiltonianPtr h, Rng& rng, std::size_t support = 2,
                                  std::size_t terms = 3);

/// Random incoherent state: random block-diagonal mixture.
DensityMatrix random_incoherent_state(HamiltonianPtr h, Rng& rng);

}  // namespace coherence
