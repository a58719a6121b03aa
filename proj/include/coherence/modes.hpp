#pragma once

#include <string_view>
#include <vector>

#include "coherence/energy.hpp"
#include "coherence/state.hpp"

namespace coherence {

/// Energy differences carrying coherence. The resonant (integer) and rational
/// closures are infinite, so they are represented by these generators and
/// answered through membership queries only.
struct ModeSet {
  std::vector<EnergyValue> intervals;  // sorted, unique, closed under negation
  double source_threshold = 0.0;

  bool contains(const EnergyValue& x) const;
};

inline constexpr double kDefaultModeThreshold = 1e-12;

/// E_i - E_j for every level pair with |rho_ij| > threshold.
ModeSet modes_of(const DensityMatrix& rho, double threshold = kDefaultModeThreshold);

/// x in the integer span of the modes.
bool resonant_member(const EnergyValue& x, const ModeSet& m);
/// x in the rational span of the modes.
bool rational_member(const EnergyValue& x, const ModeSet& m);

/// Inclusion of generated spans, decided generator by generator.
bool check_subset_z(const ModeSet& target, const ModeSet& source);
bool check_subset_q(const ModeSet& target, const ModeSet& source);

enum class Verdict {
  kAmplifiable,  // integer modes of the target are inside those of the source
  kBlockedZ,     // rational inclusion holds, integer inclusion fails
  kBlockedQ,     // rational inclusion fails
};

Verdict transform_verdict(const DensityMatrix& from, const DensityMatrix& to,
                          double threshold = kDefaultModeThreshold);

std::string_view to_string(Verdict v);
/// One-line explanation of what the verdict rules out.
std::string_view explain(Verdict v);

}  // namespace coherence
