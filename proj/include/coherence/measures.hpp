#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "coherence/channel.hpp"
#include "coherence/state.hpp"

namespace coherence {

enum class Measure { kQfi, kWySkew, kRelEntAsym };

std::string_view to_string(Measure m);

struct MeasureReport {
  Measure name = Measure::kQfi;
  double value = 0.0;
  const DensityMatrix* state = nullptr;
  Valuation valuation;
};

/// F = 2 sum_{kl} (l_k - l_l)^2 / (l_k + l_l) |<k|H|l>|^2, pairs with
/// l_k + l_l <= 1e-14 skipped.
double qfi(const DensityMatrix& rho, const Valuation& valuation);

/// I = 1/2 ||[sqrt(rho), H]||_F^2.
double wy_skew(const DensityMatrix& rho, const Valuation& valuation);

/// S(dephase(rho)) - S(rho), natural log.
double rel_ent_asym(const DensityMatrix& rho);

double von_neumann_entropy(const DensityMatrix& rho);

/// rel_ent_asym ignores the valuation.
double evaluate_measure(Measure m, const DensityMatrix& rho, const Valuation& valuation);
MeasureReport measure_report(Measure m, const DensityMatrix& rho, const Valuation& valuation);

inline constexpr double kMonotonicityTol = 1e-9;

struct MonotonicityViolation {
  std::size_t channel = 0;
  std::size_t state = 0;
  double before = 0.0;
  double after = 0.0;
};

/// rho is the n-copy input and tau the output of some covariant protocol on rho^{(x)n}.
struct NCopySample {
  DensityMatrix rho;
  DensityMatrix tau;
  std::size_t n = 1;
};

struct MonotonicityReport {
  Measure name = Measure::kQfi;
  std::size_t checks = 0;
  double max_increase = 0.0;
  std::vector<MonotonicityViolation> violations;
  std::size_t ncopy_checks = 0;
  std::vector<std::size_t> ncopy_violations;  // indices into the n-copy samples
  bool passed() const { return violations.empty() && ncopy_violations.empty(); }
};

/// measure(L(rho)) <= measure(rho) + 1e-9 for every channel and every state
/// living on the channel's input Hamiltonian (other pairs are skipped), and
/// measure(rho) >= measure(tau) / n for each n-copy sample.
MonotonicityReport monotonicity_suite(Measure m, const std::vector<CovariantChannel>& channels,
                                      const std::vector<DensityMatrix>& states,
                                      const Valuation& valuation,
                                      const std::vector<NCopySample>& ncopy = {});

inline constexpr double kWitnessTol = 1e-8;

struct SuperadditivityProbe {
  Measure name = Measure::kQfi;
  std::size_t trials = 0;
  double best_gap = 0.0;  // min over trials of measure(tau) - measure(tau_A) - measure(tau_B)
  std::optional<DensityMatrix> witness;  // set when best_gap < -1e-8
};

/// Random search over two-qubit states with H = diag(0,1) (x) 1 + 1 (x) diag(0,1).
SuperadditivityProbe superadditivity_probe(Measure m, std::uint64_t seed, std::size_t trials);

}  // namespace coherence
