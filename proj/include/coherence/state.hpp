#pragma once

#include <complex>
#include <span>

#include <Eigen/Dense>

#include "coherence/hamiltonian.hpp"
#include "coherence/tensor_ops.hpp"

namespace coherence {

using Complex = std::complex<double>;

namespace tol {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kTrace = 1e-12;
inline constexpr double kPsd = 1e-10;
inline constexpr double kCompleteness = 1e-10;
inline constexpr double kCovariance = 1e-10;
}  // namespace tol

/// Hermitian, PSD, unit-trace matrix bound to a LabeledHamiltonian.
/// Immutable; every constructor either validates or is produced by an
/// operation that preserves the invariants.
class DensityMatrix {
 public:
  /// Throws std::invalid_argument if the matrix is not a state within
  /// tol::kHermitian, tol::kTrace and tol::kPsd.
  DensityMatrix(Eigen::MatrixXcd matrix, HamiltonianPtr hamiltonian);

  /// Hermitizes, clips eigenvalues below zero and rescales the trace to one.
  /// Still throws if the input is farther than tol::kPsd from a state.
  static DensityMatrix normalized(Eigen::MatrixXcd matrix, HamiltonianPtr hamiltonian);
  static DensityMatrix pure(const Eigen::VectorXcd& psi, HamiltonianPtr hamiltonian);
  static DensityMatrix maximally_mixed(HamiltonianPtr hamiltonian);

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const LabeledHamiltonian& hamiltonian() const { return *hamiltonian_; }
  const HamiltonianPtr& hamiltonian_ptr() const { return hamiltonian_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  Complex operator()(std::size_t i, std::size_t j) const {
    return matrix_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  /// Same matrix on another Hamiltonian of equal dimension.
  DensityMatrix rebind(HamiltonianPtr hamiltonian) const;

 private:
  struct Trusted {};
  DensityMatrix(Trusted, Eigen::MatrixXcd matrix, HamiltonianPtr hamiltonian)
      : matrix_(std::move(matrix)), hamiltonian_(std::move(hamiltonian)) {}

  friend DensityMatrix tensor(const DensityMatrix&, const DensityMatrix&);
  friend DensityMatrix partial_trace(const DensityMatrix&, std::span<const std::size_t>);
  friend DensityMatrix time_evolve(const DensityMatrix&, double, const Valuation&);
  friend DensityMatrix dephase(const DensityMatrix&);

  Eigen::MatrixXcd matrix_;
  HamiltonianPtr hamiltonian_;
};

/// Kronecker product with composite energies E_a + E_b.
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
DensityMatrix tensor_power(const DensityMatrix& rho, std::size_t n);

/// Reduces onto the listed factors of the state's Hamiltonian factorization.
DensityMatrix partial_trace(const DensityMatrix& t, std::span<const std::size_t> keep);
inline DensityMatrix partial_trace(const DensityMatrix& t, std::initializer_list<std::size_t> keep) {
  return partial_trace(t, std::span<const std::size_t>(keep.begin(), keep.size()));
}

/// ||a - b||_1, the sum of absolute eigenvalues of a - b.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
/// d(a, b) = ||a - b||_1 / 2.
double normalized_trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// e^{-iHt} rho e^{iHt}: entry (i, j) picks up e^{i (E_j - E_i) t}.
DensityMatrix time_evolve(const DensityMatrix& rho, double t, const Valuation& valuation);

/// Pinching onto exact equal-energy blocks.
DensityMatrix dephase(const DensityMatrix& rho);

/// Largest entry magnitude between distinct energy blocks.
double max_coherence(const DensityMatrix& rho);

double max_entry_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

}  // namespace coherence
