#include "coherence/modes.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

#include "coherence/lattice.hpp"

namespace coherence {

bool ModeSet::contains(const EnergyValue& x) const {
  return std::binary_search(intervals.begin(), intervals.end(), x);
}

ModeSet modes_of(const DensityMatrix& rho, double threshold) {
  if (threshold < 0.0) throw std::invalid_argument("modes_of: threshold must be nonnegative");
  const auto& h = rho.hamiltonian();
  std::set<std::pair<std::size_t, std::size_t>> block_pairs;
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    for (std::size_t j = 0; j < rho.dim(); ++j) {
      if (std::abs(rho(i, j)) > threshold) block_pairs.emplace(h.block(i), h.block(j));
    }
  }
  std::set<EnergyValue> modes;
  for (const auto& [a, b] : block_pairs) {
    EnergyValue d = h.block_energy(a) - h.block_energy(b);
    modes.insert(-d);
    modes.insert(std::move(d));
  }
  return {std::vector<EnergyValue>(modes.begin(), modes.end()), threshold};
}

bool resonant_member(const EnergyValue& x, const ModeSet& m) {
  return z_span_member(x, m.intervals);
}

bool rational_member(const EnergyValue& x, const ModeSet& m) {
  return q_span_member(x, m.intervals);
}

bool check_subset_z(const ModeSet& target, const ModeSet& source) {
  return std::all_of(target.intervals.begin(), target.intervals.end(),
                     [&](const EnergyValue& x) { return resonant_member(x, source); });
}

bool check_subset_q(const ModeSet& target, const ModeSet& source) {
  return std::all_of(target.intervals.begin(), target.intervals.end(),
                     [&](const EnergyValue& x) { return rational_member(x, source); });
}

Verdict transform_verdict(const DensityMatrix& from, const DensityMatrix& to, double threshold) {
  ModeSet source = modes_of(from, threshold);
  ModeSet target = modes_of(to, threshold);
  if (!check_subset_q(target, source)) return Verdict::kBlockedQ;
  if (!check_subset_z(target, source)) return Verdict::kBlockedZ;
  return Verdict::kAmplifiable;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kAmplifiable: return "AMPLIFIABLE";
    case Verdict::kBlockedZ: return "BLOCKED_Z";
    case Verdict::kBlockedQ: return "BLOCKED_Q";
  }
  return "UNKNOWN";
}

std::string_view explain(Verdict v) {
  switch (v) {
    case Verdict::kAmplifiable:
      return "resonant modes included: marginal-asymptotic and correlated-catalytic "
             "conversion with unbounded rate are available";
    case Verdict::kBlockedZ:
      return "a target mode is only rationally related to the source modes: even one "
             "marginal-asymptotic copy is impossible; correlated-catalytic feasibility is "
             "an open conjecture";
    case Verdict::kBlockedQ:
      return "a target mode is outside the rational span of the source modes: no "
             "correlated-catalytic or marginal-asymptotic conversion exists";
  }
  return "";
}

}  // namespace coherence
