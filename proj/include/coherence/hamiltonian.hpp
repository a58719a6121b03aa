#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coherence/energy.hpp"

namespace coherence {

/// Diagonal Hamiltonian with exact energies, optionally carrying a tensor
/// factorization. Composite energies are sums of factor energies with the
/// first factor most significant in the basis index.
///
/// Degeneracy is exact EnergyValue equality: levels i and j share a block
/// iff energies()[i] == energies()[j].
class LabeledHamiltonian {
 public:
  LabeledHamiltonian(SymbolContext symbols, std::vector<EnergyValue> energies,
                     std::vector<std::string> labels = {});
  /// Context inferred from the energies.
  explicit LabeledHamiltonian(std::vector<EnergyValue> energies);

  /// Fully degenerate Hamiltonian: `dim` levels at energy zero.
  static LabeledHamiltonian trivial(std::size_t dim, SymbolContext symbols = {});

  std::size_t dim() const { return energies_.size(); }
  const SymbolContext& symbols() const { return symbols_; }
  const std::vector<EnergyValue>& energies() const { return energies_; }
  const EnergyValue& energy(std::size_t i) const { return energies_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }

  std::size_t factor_count() const { return factors_.size(); }
  std::vector<std::size_t> factor_dims() const;
  LabeledHamiltonian factor(std::size_t k) const;
  /// Hamiltonian of the kept factors, in ascending factor order.
  LabeledHamiltonian restrict_to(std::span<const std::size_t> keep) const;
  /// Collapses the factorization into a single factor.
  LabeledHamiltonian flattened() const;
  /// Same energies, declared over a larger symbol context.
  LabeledHamiltonian with_symbols(const SymbolContext& symbols) const;

  std::size_t block(std::size_t i) const { return block_[i]; }
  std::size_t block_count() const { return block_energy_.size(); }
  const EnergyValue& block_energy(std::size_t b) const { return block_energy_[b]; }

  Eigen::VectorXd evaluate(const Valuation& valuation) const;

  friend LabeledHamiltonian tensor(const LabeledHamiltonian& a, const LabeledHamiltonian& b);

  /// Energies and factor dimensions. Labels and unused declared symbols are
  /// bookkeeping only.
  friend bool operator==(const LabeledHamiltonian& a, const LabeledHamiltonian& b);

 private:
  LabeledHamiltonian() = default;
  void rebuild();

  SymbolContext symbols_;
  std::vector<std::vector<EnergyValue>> factors_;
  std::vector<std::vector<std::string>> factor_labels_;
  std::vector<EnergyValue> energies_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> block_;
  std::vector<EnergyValue> block_energy_;
};

using HamiltonianPtr = std::shared_ptr<const LabeledHamiltonian>;

inline HamiltonianPtr share(LabeledHamiltonian h) {
  return std::make_shared<const LabeledHamiltonian>(std::move(h));
}

LabeledHamiltonian tensor_power(const LabeledHamiltonian& h, std::size_t n);

}  // namespace coherence
