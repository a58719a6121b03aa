#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "coherence/energy.hpp"
#include "coherence/hamiltonian.hpp"
#include "coherence/ladder.hpp"
#include "coherence/state.hpp"

namespace coherence {

/// Kraus operator whose every nonzero entry <f|K|e> satisfies E_f - E_e == shift.
struct KrausOperator {
  Eigen::MatrixXcd matrix;
  EnergyValue shift;
};

/// Covariant operation in definite-shift Kraus form. Covariance is then a
/// syntactic property of the shift labels; the constructor rejects any entry
/// above tol::kCovariance that violates its label and any completeness error
/// above tol::kCompleteness. Surviving sub-tolerance violations are zeroed.
class CovariantChannel {
 public:
  CovariantChannel(std::vector<KrausOperator> kraus, HamiltonianPtr in, HamiltonianPtr out);

  static CovariantChannel identity(HamiltonianPtr h);
  /// Pinching as a set of shift-zero block projectors.
  static CovariantChannel dephasing(HamiltonianPtr h);
  /// Single shift-zero Kraus operator; throws if u mixes energy blocks.
  static CovariantChannel energy_conserving_unitary(const Eigen::MatrixXcd& u, HamiltonianPtr h);

  const std::vector<KrausOperator>& kraus() const { return kraus_; }
  std::vector<Eigen::MatrixXcd> kraus_matrices() const;
  const LabeledHamiltonian& in() const { return *in_; }
  const LabeledHamiltonian& out() const { return *out_; }
  const HamiltonianPtr& in_ptr() const { return in_; }
  const HamiltonianPtr& out_ptr() const { return out_; }

 private:
  std::vector<KrausOperator> kraus_;
  HamiltonianPtr in_;
  HamiltonianPtr out_;
};

struct ChannelOutput {
  DensityMatrix state;
  double trace_deviation = 0.0;  // |Tr(sum K rho K^dag) - 1| before renormalization
};

/// sum_k K rho K^dag bound to the output Hamiltonian.
DensityMatrix apply(const CovariantChannel& channel, const DensityMatrix& rho);
ChannelOutput apply_reporting(const CovariantChannel& channel, const DensityMatrix& rho);

/// Choi operator J = sum_{ij} L(|i><j|) (x) |i><j| (output factor first).
Eigen::MatrixXcd choi_matrix(std::span<const Eigen::MatrixXcd> kraus);

/// Max entry of [J, H_out (x) 1 - 1 (x) H_in] with the energies evaluated
/// numerically. A channel is covariant iff this vanishes (tol::kCovariance).
double verify_covariance(std::span<const Eigen::MatrixXcd> kraus, const LabeledHamiltonian& in,
                         const LabeledHamiltonian& out, const Valuation& valuation);
double verify_covariance(const CovariantChannel& channel, const Valuation& valuation);

/// Largest Choi entry connecting pairs (f, i), (g, j) with different exact
/// shifts E_f - E_i != E_g - E_j. Zero iff the channel is covariant for
/// every valuation of the symbols.
double shift_block_residual(std::span<const Eigen::MatrixXcd> kraus, const LabeledHamiltonian& in,
                            const LabeledHamiltonian& out);

/// Definite-shift Kraus set from the shift-block decomposition of the Choi
/// operator. Throws if shift_block_residual exceeds tol::kCovariance.
CovariantChannel definite_shift_form(std::span<const Eigen::MatrixXcd> kraus, HamiltonianPtr in,
                                     HamiltonianPtr out);

/// L(rho) = Tr_A'[V (rho (x) eta) V^dag] for an energy-conserving isometry
/// V : S (x) A -> S' (x) A' and an incoherent ancilla state eta.
/// Kraus operators are sqrt(p) <a'|V|v> for eigenpairs (p, v) of eta inside
/// each ancilla energy block, with shift E_v - E_a'.
CovariantChannel from_dilation(const Eigen::MatrixXcd& v, HamiltonianPtr system_in,
                               const DensityMatrix& ancilla, HamiltonianPtr system_out,
                               HamiltonianPtr ancilla_out);
/// Unitary case S' = S, A' = A.
CovariantChannel from_dilation(const Eigen::MatrixXcd& u, HamiltonianPtr system,
                               const DensityMatrix& ancilla);

/// Haar-random energy-conserving dilation. With equal input and output
/// Hamiltonians the ancilla has `ancilla_dim` levels drawn from the system's
/// energy differences and the unitary is Haar on each total-energy block;
/// otherwise a blockwise Haar isometry into S' (x) A' is used. Deterministic
/// per seed.
CovariantChannel random_covariant(HamiltonianPtr in, HamiltonianPtr out, std::size_t ancilla_dim,
                                  std::uint64_t seed);

/// Re-labels the channel for new ladder intervals. The Kraus matrices are
/// untouched; shifts are re-synthesized from their lattice coordinates.
/// Throws if the current intervals are not rationally independent or the
/// channel does not act on the given ladder products.
CovariantChannel retune(const CovariantChannel& channel, const LadderSystem& in,
                        const LadderSystem& out, std::span<const EnergyValue> new_intervals);
CovariantChannel retune(const CovariantChannel& channel, const LadderSystem& system,
                        std::span<const EnergyValue> new_intervals);

/// second after first; shifts add.
CovariantChannel compose(const CovariantChannel& second, const CovariantChannel& first);

/// Max-entry deviation of sum K^dag K from the identity.
double completeness_error(std::span<const Eigen::MatrixXcd> kraus);

}  // namespace coherence
