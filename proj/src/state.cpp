#include "coherence/state.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace coherence {

namespace {

void check_shape(const Eigen::MatrixXcd& m, const HamiltonianPtr& h) {
  if (!h) throw std::invalid_argument("state needs a Hamiltonian");
  if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != h->dim()) {
    throw std::invalid_argument("state matrix is " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + " but Hamiltonian has dimension " +
                                std::to_string(h->dim()));
  }
}

}  // namespace

DensityMatrix::DensityMatrix(Eigen::MatrixXcd matrix, HamiltonianPtr hamiltonian)
    : matrix_(std::move(matrix)), hamiltonian_(std::move(hamiltonian)) {
  check_shape(matrix_, hamiltonian_);
  double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol::kHermitian) {
    throw std::invalid_argument("state is not Hermitian (deviation " + std::to_string(herm) + ")");
  }
  double tr = std::abs(matrix_.trace() - Complex(1.0));
  if (tr > tol::kTrace) {
    throw std::invalid_argument("state trace deviates from one by " + std::to_string(tr));
  }
  Eigen::MatrixXcd h = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol::kPsd) {
    throw std::invalid_argument("state has negative eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()));
  }
}

DensityMatrix DensityMatrix::normalized(Eigen::MatrixXcd matrix, HamiltonianPtr hamiltonian) {
  check_shape(matrix, hamiltonian);
  Eigen::MatrixXcd h = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXd w = es.eigenvalues();
  double scale = w.sum();
  if (w.minCoeff() < -tol::kPsd * std::max(1.0, scale) || scale <= 0.0) {
    throw std::invalid_argument("matrix is not positive semidefinite within tolerance");
  }
  w = w.cwiseMax(0.0);
  w /= w.sum();
  Eigen::MatrixXcd out = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
  out = 0.5 * (out + out.adjoint());
  return DensityMatrix(Trusted{}, std::move(out), std::move(hamiltonian));
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi, HamiltonianPtr hamiltonian) {
  double n = psi.norm();
  if (n == 0.0) throw std::invalid_argument("pure state vector is zero");
  Eigen::VectorXcd v = psi / n;
  return DensityMatrix(v * v.adjoint(), std::move(hamiltonian));
}

DensityMatrix DensityMatrix::maximally_mixed(HamiltonianPtr hamiltonian) {
  auto d = static_cast<Eigen::Index>(hamiltonian->dim());
  return DensityMatrix(Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d),
                       std::move(hamiltonian));
}

DensityMatrix DensityMatrix::rebind(HamiltonianPtr hamiltonian) const {
  check_shape(matrix_, hamiltonian);
  return DensityMatrix(Trusted{}, matrix_, std::move(hamiltonian));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  auto h = share(tensor(a.hamiltonian(), b.hamiltonian()));
  return DensityMatrix(DensityMatrix::Trusted{}, kron(a.matrix(), b.matrix()), std::move(h));
}

DensityMatrix tensor_power(const DensityMatrix& rho, std::size_t n) {
  if (n == 0) throw std::invalid_argument("tensor_power: n must be positive");
  DensityMatrix out = rho;
  for (std::size_t i = 1; i < n; ++i) out = tensor(out, rho);
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& t, std::span<const std::size_t> keep) {
  auto dims = t.hamiltonian().factor_dims();
  auto h = share(t.hamiltonian().restrict_to(keep));
  return DensityMatrix(DensityMatrix::Trusted{}, partial_trace(t.matrix(), dims, keep),
                       std::move(h));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("trace_distance: dimension mismatch");
  return trace_norm_hermitian(a.matrix() - b.matrix());
}

double normalized_trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return 0.5 * trace_distance(a, b);
}

DensityMatrix time_evolve(const DensityMatrix& rho, double t, const Valuation& valuation) {
  Eigen::VectorXd e = rho.hamiltonian().evaluate(valuation);
  Eigen::MatrixXcd out = rho.matrix();
  const auto& h = rho.hamiltonian();
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      if (h.block(static_cast<std::size_t>(i)) == h.block(static_cast<std::size_t>(j))) continue;
      out(i, j) *= std::polar(1.0, (e(j) - e(i)) * t);
    }
  }
  return DensityMatrix(DensityMatrix::Trusted{}, std::move(out), rho.hamiltonian_ptr());
}

DensityMatrix dephase(const DensityMatrix& rho) {
  Eigen::MatrixXcd out = rho.matrix();
  const auto& h = rho.hamiltonian();
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      if (h.block(static_cast<std::size_t>(i)) != h.block(static_cast<std::size_t>(j))) {
        out(i, j) = 0.0;
      }
    }
  }
  return DensityMatrix(DensityMatrix::Trusted{}, std::move(out), rho.hamiltonian_ptr());
}

double max_coherence(const DensityMatrix& rho) {
  const auto& h = rho.hamiltonian();
  double best = 0.0;
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    for (std::size_t j = 0; j < rho.dim(); ++j) {
      if (h.block(i) != h.block(j)) best = std::max(best, std::abs(rho(i, j)));
    }
  }
  return best;
}

double max_entry_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("max_entry_distance: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace coherence
