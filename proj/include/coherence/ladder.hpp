#pragma once

#include <span>
#include <vector>

#include "coherence/energy.hpp"
#include "coherence/hamiltonian.hpp"
#include "coherence/state.hpp"

namespace coherence {

/// Inclusive truncation of ladder levels. Overflow is an error, never clipped.
struct LevelRange {
  long min = -8;
  long max = 8;
};

/// Truncated ladder L(interval): levels n * interval for n in [n_min, n_max],
/// each repeated `degeneracy` times. Local index = (n - n_min) * degeneracy + a.
struct LadderSpec {
  EnergyValue interval;
  long n_min = -8;
  long n_max = 8;
  std::size_t degeneracy = 1;

  std::size_t dim() const {
    return static_cast<std::size_t>(n_max - n_min + 1) * degeneracy;
  }
};

/// Product of truncated ladders, first ladder most significant.
class LadderSystem {
 public:
  LadderSystem(std::vector<LadderSpec> ladders, SymbolContext symbols = {});

  const std::vector<LadderSpec>& ladders() const { return ladders_; }
  const SymbolContext& symbols() const { return symbols_; }
  std::size_t dim() const;
  const HamiltonianPtr& hamiltonian() const { return hamiltonian_; }
  std::vector<EnergyValue> intervals() const;

  /// Same levels, new intervals; the symbol context grows to cover them.
  LadderSystem with_intervals(std::span<const EnergyValue> intervals) const;

  /// Composite index of the product state with the given level per ladder and
  /// degeneracy label per ladder.
  std::size_t index_of(std::span<const long> levels, std::span<const std::size_t> labels) const;
  /// Level per ladder of a composite index.
  std::vector<long> levels_of(std::size_t index) const;

 private:
  std::vector<LadderSpec> ladders_;
  SymbolContext symbols_;
  HamiltonianPtr hamiltonian_;
};

/// Result of mapping |E, alpha> to the product state with lattice
/// coordinates of E; the degeneracy label alpha rides on the first ladder.
struct LadderEmbedding {
  LadderSystem system;
  std::vector<std::size_t> index_map;           // original index -> ladder index
  std::vector<std::vector<long>> coordinates;   // original index -> n_j
  std::vector<std::size_t> degeneracy_label;    // original index -> alpha
};

/// Throws std::invalid_argument if some energy is not an integer combination
/// of `basis`, if `basis` is not rationally independent, or if a coordinate
/// falls outside `range`.
LadderEmbedding embed_into_ladders(const LabeledHamiltonian& h, std::span<const EnergyValue> basis,
                                   LevelRange range = {});

/// Replaces the intervals of the selected ladders by zero; the complete
/// degeneration move.
LadderSystem degenerate_ladder(const LadderSystem& system, std::span<const std::size_t> which);

/// The embedded copy of rho on the ladder product.
DensityMatrix embed_state(const DensityMatrix& rho, const LadderEmbedding& embedding);

}  // namespace coherence
