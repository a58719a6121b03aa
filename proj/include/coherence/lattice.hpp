#pragma once

#include <optional>
#include <span>
#include <vector>

#include "coherence/energy.hpp"
#include "coherence/rational.hpp"

namespace coherence {

using IntegerMatrix = std::vector<std::vector<Integer>>;
using RationalMatrix = std::vector<std::vector<Rational>>;

/// Row-style Hermite normal form of the lattice spanned by `rows`.
/// Returns only the nonzero rows: echelon order, positive pivots, entries
/// above each pivot reduced into [0, pivot).
IntegerMatrix hermite_normal_form(IntegerMatrix rows);

/// Rank over Q by exact Gaussian elimination.
std::size_t rational_rank(RationalMatrix rows);

/// x = sum n_g * g with integer n_g. Exact; decided through the Hermite
/// normal form after clearing denominators.
bool z_span_member(const EnergyValue& x, std::span<const EnergyValue> generators);

/// x = sum a_g * g with rational a_g.
bool q_span_member(const EnergyValue& x, std::span<const EnergyValue> generators);

/// No element is a rational combination of the others (and none is zero).
bool rationally_independent(std::span<const EnergyValue> values);

/// Coefficients a with x = sum a_i * basis_i, or nullopt when x is outside
/// the rational span. Unique when `basis` is rationally independent.
std::optional<std::vector<Rational>> rational_coordinates(const EnergyValue& x,
                                                          std::span<const EnergyValue> basis);

/// Lattice basis of the Z-module generated by `energies`: rationally
/// independent, minimal in size, and every input is an integer combination
/// of it. Output is the canonical Hermite form, ordered by pivot symbol.
std::vector<EnergyValue> embedding_basis(std::span<const EnergyValue> energies);

}  // namespace coherence
