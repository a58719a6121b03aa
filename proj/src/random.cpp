#include "coherence/random.hpp"

#include <algorithm>
#include <numeric>

namespace coherence {

Eigen::MatrixXcd ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd z(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      double re = normal(rng);
      double im = normal(rng);
      z(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  return z;
}

Eigen::MatrixXcd haar_unitary(Eigen::Index n, Rng& rng) {
  Eigen::MatrixXcd z = ginibre(n, n, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    double mag = std::abs(r(i, i));
    Complex phase = mag > 0.0 ? r(i, i) / mag : Complex(1.0);
    q.col(i) *= phase;
  }
  return q;
}

Eigen::MatrixXcd haar_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  return haar_unitary(rows, rng).leftCols(cols);
}

DensityMatrix random_state(HamiltonianPtr h, Rng& rng, Eigen::Index rank) {
  auto d = static_cast<Eigen::Index>(h->dim());
  Eigen::MatrixXcd g = ginibre(d, rank > 0 ? rank : d, rng);
  Eigen::MatrixXcd m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix::normalized(std::move(m), std::move(h));
}

DensityMatrix random_sparse_state(HamiltonianPtr h, Rng& rng, std::size_t support,
                                  std::size_t terms) {
  const std::size_t d = h->dim();
  support = std::clamp<std::size_t>(support, 1, d);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  std::vector<std::size_t> idx(d);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d),
                                              static_cast<Eigen::Index>(d));
  for (std::size_t t = 0; t < terms; ++t) {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::shuffle(idx.begin(), idx.end(), rng);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d));
    for (std::size_t s = 0; s < support; ++s) {
      psi(static_cast<Eigen::Index>(idx[s])) = Complex(normal(rng), normal(rng));
    }
    psi.normalize();
    m += unit(rng) * psi * psi.adjoint();
  }
  m /= m.trace().real();
  return DensityMatrix::normalized(std::move(m), std::move(h));
}

DensityMatrix random_incoherent_state(HamiltonianPtr h, Rng& rng) {
  DensityMatrix rho = random_state(h, rng);
  return dephase(rho);
}

}  // namespace coherence
