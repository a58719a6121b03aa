#pragma once

#include <cstddef>
#include <vector>

#include "coherence/channel.hpp"
#include "coherence/rational.hpp"
#include "coherence/state.hpp"

namespace coherence {

// ---------------------------------------------------------------------------
// Single-mode extraction and qubit pumping

/// Definite-shift extraction channel onto the qubit diag(0, E_j - E_i):
/// A = |0><i| + |1><j| (shift -E_i) and B_k = |0><k| (shift -E_k) for the
/// remaining levels. Throws if E_i == E_j or an index is out of range.
CovariantChannel weak_qubit_channel(HamiltonianPtr h, std::size_t i, std::size_t j);

/// Output coherence <0|sigma|1> equals rho_ij exactly.
DensityMatrix extract_weak_qubit(const DensityMatrix& rho, std::size_t i, std::size_t j);

/// Two identical qubits on diag(0, D): rotate span{|01>, |10>} by theta
/// (|01> -> cos|01> + sin|10>) and keep the first qubit. The off-diagonal
/// becomes c * (cos(theta) + (2p - 1) sin(theta)).
DensityMatrix pump_qubits(const DensityMatrix& first, const DensityMatrix& second, double theta);
DensityMatrix pump_qubits(const DensityMatrix& sigma, double theta);

/// Angle maximizing the output coherence for ground population p.
double pump_optimal_angle(double p);

// ---------------------------------------------------------------------------
// Good-local / bad-global family

/// (1-delta) [(1-eps/2)|+><+| + (eps/2)|-><-|]^{(x)m} + (delta/2)(|+><+|^{(x)m} + |-><-|^{(x)m})
/// on m copies of `qubit` (default diag(0, 1)). Requires eps, delta in (0, 1), m >= 1.
DensityMatrix build_counterexample(std::size_t m, double eps, double delta);
DensityMatrix build_counterexample(std::size_t m, double eps, double delta, HamiltonianPtr qubit);

/// 2 [1 - (1-delta)(1-eps/2)^m - delta/2].
double counterexample_distance(std::size_t m, double eps, double delta);

struct CounterexampleRow {
  std::size_t m = 0;
  double eps = 0.0;
  double delta = 0.0;
  double marginal_dist = 0.0;  // max_i ||Tr_{\i} tau - |+><+| ||_1
  double correlation = 0.0;    // ||tau - tau_1 (x) Tr_1 tau||_1
  double global_dist = 0.0;    // ||tau - |+><+|^{(x)m}||_1
  double f_formula = 0.0;
};

CounterexampleRow analyze_counterexample(std::size_t m, double eps, double delta);

// ---------------------------------------------------------------------------
// Correlated catalyst from an n-copy protocol

enum class SlotRole { kCopy, kRegister };

/// c = (1/n) sum_k rho^{(x)(k-1)} (x) tau_{n-k} (x) |k><k|_R on S^{(x)(n-1)} (x) R.
/// The register carries the zero Hamiltonian.
struct CatalystBundle {
  DensityMatrix state;
  std::size_t register_dim = 0;
  std::vector<SlotRole> roles;
};

struct CorrelatedCatalyst {
  CatalystBundle catalyst;
  /// Register-conditioned Lambda_n, cyclic register relabel, then the last
  /// copy is re-designated as the system. Acts on S (x) C, system first.
  CovariantChannel channel;
  DensityMatrix tau;     // Lambda_n(rho^{(x)n})
  DensityMatrix target;  // (1/n) sum_i Tr_{\i} tau
};

inline constexpr std::size_t kDefaultDimensionCap = std::size_t{1} << 12;

/// Throws std::invalid_argument unless lambda_n maps S^{(x)n} to itself for
/// the system of rho, and std::length_error when dim(S (x) C) exceeds `dim_cap`.
CorrelatedCatalyst build_correlated_catalyst(const DensityMatrix& rho,
                                             const CovariantChannel& lambda_n,
                                             std::size_t dim_cap = kDefaultDimensionCap);

struct CatalystCheck {
  double catalyst_error = 0.0;  // max entry |Tr_S out - c|
  double system_error = 0.0;    // max entry |Tr_C out - target|
  double system_coherence = 0.0;
  DensityMatrix output;
};

CatalystCheck check_correlated_catalyst(const DensityMatrix& rho, const CorrelatedCatalyst& built);

// ---------------------------------------------------------------------------
// Marginal-catalyst recombination

/// One round of N^k groups; groups[g][j] is the catalyst set whose j-th
/// catalyst plays role C_j in group g.
struct ScheduleRound {
  std::size_t index = 0;  // 1-based round number
  std::vector<std::vector<std::size_t>> groups;
};

/// Round 1 groups by identical label. Round l >= 2 groups labels that agree
/// outside position l-1, role j drawing the label with n_{l-1} = g + j mod N.
/// Labels are tuples in {0..N-1}^k encoded with n_1 most significant.
std::vector<ScheduleRound> recombination_schedule(std::size_t n_roles, std::size_t k);

std::vector<std::size_t> decode_label(std::size_t set, std::size_t n_roles, std::size_t k);

struct ScheduleAudit {
  bool partitions = true;  // each round uses every catalyst instance exactly once
  bool fresh = true;       // no pair of instances is co-grouped twice
  std::size_t conversions = 0;
};

ScheduleAudit audit_schedule(const std::vector<ScheduleRound>& rounds, std::size_t n_roles,
                             std::size_t k);

struct RateCertificate {
  Integer copies_in;
  Integer copies_out;
  Rational achieved_ratio;
  bool exact = true;
  double max_marginal_error = 0.0;
  double max_correlation = 0.0;
};

/// n = mu N^k, m = (k+1) N^k, ratio (k+1)/mu.
RateCertificate rate_certificate(std::size_t mu, std::size_t n_roles, std::size_t k);

/// Smallest k whose certified ratio reaches `target`.
std::size_t minimal_k_for_rate(std::size_t mu, const Rational& target);

// ---------------------------------------------------------------------------
// Marginal-catalytic contract

/// channel maps input (x) c_1 (x) ... (x) c_N to S' (x) C_1 (x) ... (x) C_N.
struct MarginalCatalyticProtocol {
  CovariantChannel channel;
  DensityMatrix input;
  std::vector<DensityMatrix> catalysts;
  DensityMatrix target;
  double epsilon = 0.0;
};

struct ContractReport {
  std::vector<double> catalyst_deviations;  // ||Tr_{\C_i} tau - c_i||_1
  double target_deviation = 0.0;            // ||Tr_C tau - target||_1
  double epsilon = 0.0;
  bool catalysts_returned = false;
  bool target_reached = false;
  bool passed() const { return catalysts_returned && target_reached; }
};

inline constexpr double kCatalystReturnTol = 1e-12;

/// Throws std::invalid_argument for a malformed bundle.
ContractReport marginal_catalytic_contract(const MarginalCatalyticProtocol& protocol);

}  // namespace coherence
