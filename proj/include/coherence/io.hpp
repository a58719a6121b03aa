#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "coherence/channel.hpp"
#include "coherence/energy.hpp"
#include "coherence/state.hpp"

namespace coherence::io {

using Json = nlohmann::json;

/// [num, den] as integers, or as decimal strings when they exceed 64 bits.
Json to_json(const Rational& q);
Rational rational_from_json(const Json& j);

/// {"symbol": [num, den], ...}
Json to_json(const EnergyValue& e);
EnergyValue energy_from_json(const Json& j);

/// {"dim", "symbols", "energies": [[num, den] per symbol] per level}, plus
/// "factors" (same layout per factor) when the Hamiltonian is a product.
Json to_json(const LabeledHamiltonian& h);
LabeledHamiltonian hamiltonian_from_json(const Json& j);

/// Hamiltonian fields plus "matrix": row-major list of [re, im]. Nested rows
/// are accepted on input.
Json to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const Json& j);

/// {"kraus": [{"shift", "matrix"}], "in": H, "out": H}
Json to_json(const CovariantChannel& channel);
CovariantChannel channel_from_json(const Json& j);

Json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols);

Valuation valuation_from_json(const Json& j);

Json read_json(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& contents);
inline void write_json(const std::filesystem::path& path, const Json& j) {
  write_atomic(path, j.dump(2) + "\n");
}

}  // namespace coherence::io
