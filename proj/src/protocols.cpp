#include "coherence/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace coherence {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

Eigen::MatrixXcd basis_op(std::size_t rows, std::size_t cols, std::size_t r, std::size_t c) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(idx(rows), idx(cols));
  m(idx(r), idx(c)) = 1.0;
  return m;
}

Eigen::MatrixXcd kron_power(const Eigen::MatrixXcd& a, std::size_t n) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t i = 0; i < n; ++i) out = kron(out, a);
  return out;
}

std::size_t checked_pow(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (out > std::numeric_limits<std::size_t>::max() / base) {
      throw std::length_error("dimension overflow");
    }
    out *= base;
  }
  return out;
}

}  // namespace

CovariantChannel weak_qubit_channel(HamiltonianPtr h, std::size_t i, std::size_t j) {
  const std::size_t d = h->dim();
  if (i >= d || j >= d || i == j) throw std::invalid_argument("extract_weak_qubit: invalid level pair");
  if (h->energy(i) == h->energy(j)) {
    throw std::invalid_argument("extract_weak_qubit: levels are degenerate, no mode to extract");
  }
  auto qubit = share(LabeledHamiltonian(h->symbols(), {EnergyValue{}, h->energy(j) - h->energy(i)}));
  std::vector<KrausOperator> ops;
  ops.push_back({basis_op(2, d, 0, i) + basis_op(2, d, 1, j), -h->energy(i)});
  for (std::size_t k = 0; k < d; ++k) {
    if (k == i || k == j) continue;
    ops.push_back({basis_op(2, d, 0, k), -h->energy(k)});
  }
  return CovariantChannel(std::move(ops), std::move(h), std::move(qubit));
}

DensityMatrix extract_weak_qubit(const DensityMatrix& rho, std::size_t i, std::size_t j) {
  return apply(weak_qubit_channel(rho.hamiltonian_ptr(), i, j), rho);
}

DensityMatrix pump_qubits(const DensityMatrix& first, const DensityMatrix& second, double theta) {
  if (first.dim() != 2 || second.dim() != 2 ||
      first.hamiltonian().energies() != second.hamiltonian().energies()) {
    throw std::invalid_argument("pump_qubits: copies must be qubits on the same Hamiltonian");
  }
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(4, 4);
  u(1, 1) = std::cos(theta);
  u(2, 2) = std::cos(theta);
  u(2, 1) = std::sin(theta);
  u(1, 2) = -std::sin(theta);
  DensityMatrix pair = tensor(first, second);
  auto channel = CovariantChannel::energy_conserving_unitary(u, pair.hamiltonian_ptr());
  return partial_trace(apply(channel, pair), {0});
}

DensityMatrix pump_qubits(const DensityMatrix& sigma, double theta) {
  return pump_qubits(sigma, sigma, theta);
}

double pump_optimal_angle(double p) { return std::atan(2.0 * p - 1.0); }

DensityMatrix build_counterexample(std::size_t m, double eps, double delta) {
  auto qubit = share(LabeledHamiltonian({EnergyValue{}, EnergyValue::unit("1")}));
  return build_counterexample(m, eps, delta, std::move(qubit));
}

DensityMatrix build_counterexample(std::size_t m, double eps, double delta, HamiltonianPtr qubit) {
  if (m < 1) throw std::invalid_argument("build_counterexample: m must be at least 1");
  if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("build_counterexample: eps and delta must lie in (0, 1)");
  }
  if (qubit->dim() != 2) throw std::invalid_argument("build_counterexample: need a qubit");
  Eigen::Vector2cd plus(1.0, 1.0), minus(1.0, -1.0);
  plus /= std::sqrt(2.0);
  minus /= std::sqrt(2.0);
  Eigen::MatrixXcd pp = plus * plus.adjoint();
  Eigen::MatrixXcd mm = minus * minus.adjoint();
  Eigen::MatrixXcd noisy = (1.0 - eps / 2.0) * pp + (eps / 2.0) * mm;
  Eigen::MatrixXcd tau = (1.0 - delta) * kron_power(noisy, m) +
                         (delta / 2.0) * (kron_power(pp, m) + kron_power(mm, m));
  return DensityMatrix::normalized(std::move(tau), share(tensor_power(*qubit, m)));
}

double counterexample_distance(std::size_t m, double eps, double delta) {
  return 2.0 * (1.0 - (1.0 - delta) * std::pow(1.0 - eps / 2.0, static_cast<double>(m)) - delta / 2.0);
}

CounterexampleRow analyze_counterexample(std::size_t m, double eps, double delta) {
  DensityMatrix tau = build_counterexample(m, eps, delta);
  auto qubit = share(tau.hamiltonian().factor(0));
  DensityMatrix plus = DensityMatrix::pure(Eigen::Vector2cd(1.0, 1.0), qubit);

  CounterexampleRow row{m, eps, delta};
  for (std::size_t i = 0; i < m; ++i) {
    DensityMatrix marginal = partial_trace(tau, {i});
    row.marginal_dist = std::max(row.marginal_dist, trace_distance(marginal, plus));
  }
  // tau is permutation symmetric, so the first copy stands for all of them.
  DensityMatrix first = partial_trace(tau, {0});
  if (m > 1) {
    std::vector<std::size_t> rest(m - 1);
    std::iota(rest.begin(), rest.end(), std::size_t{1});
    row.correlation = trace_distance(tau, tensor(first, partial_trace(tau, rest)));
  }
  row.global_dist = trace_distance(tau, tensor_power(plus, m));
  row.f_formula = counterexample_distance(m, eps, delta);
  return row;
}

CorrelatedCatalyst build_correlated_catalyst(const DensityMatrix& rho,
                                             const CovariantChannel& lambda_n,
                                             std::size_t dim_cap) {
  const std::size_t d = rho.dim();
  const std::size_t total = lambda_n.in().dim();
  if (lambda_n.out().dim() != total) {
    throw std::invalid_argument("build_correlated_catalyst: Lambda_n must be square");
  }
  std::size_t n = 0;
  if (d == 1) {
    n = 1;
  } else {
    for (std::size_t p = 1; p <= total; p *= d, ++n) {
      if (p == total) break;
    }
  }
  if (checked_pow(d, n) != total) {
    throw std::invalid_argument("build_correlated_catalyst: Lambda_n does not act on copies of S");
  }
  const std::size_t full_dim = total * n;
  if (full_dim > dim_cap) {
    throw std::length_error("build_correlated_catalyst: composite dimension " +
                            std::to_string(full_dim) + " exceeds cap " + std::to_string(dim_cap));
  }
  const LabeledHamiltonian& hs = rho.hamiltonian();
  LabeledHamiltonian copies = tensor_power(hs.flattened(), n);
  if (lambda_n.in().energies() != copies.energies() || lambda_n.out().energies() != copies.energies()) {
    throw std::invalid_argument("build_correlated_catalyst: Lambda_n Hamiltonians differ from S^n");
  }

  DensityMatrix rho_flat = rho.rebind(share(hs.flattened()));
  DensityMatrix rho_n = tensor_power(rho_flat, n);
  DensityMatrix tau = apply(lambda_n, rho_n.rebind(lambda_n.in_ptr())).rebind(share(copies));

  // tau_j: reduction of tau onto its first j copies.
  std::vector<Eigen::MatrixXcd> tau_prefix(n + 1);
  tau_prefix[0] = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t j = 1; j <= n; ++j) {
    std::vector<std::size_t> keep(j);
    std::iota(keep.begin(), keep.end(), std::size_t{0});
    tau_prefix[j] = partial_trace(tau, keep).matrix();
  }

  auto reg = LabeledHamiltonian::trivial(n, hs.symbols());
  HamiltonianPtr hc = n > 1 ? share(tensor(tensor_power(hs.flattened(), n - 1), reg)) : share(reg);
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(idx(hc->dim()), idx(hc->dim()));
  for (std::size_t k = 1; k <= n; ++k) {
    Eigen::MatrixXcd slot = kron(kron_power(rho_flat.matrix(), k - 1), tau_prefix[n - k]);
    c += kron(slot, basis_op(n, n, k - 1, k - 1)) / static_cast<double>(n);
  }
  std::vector<SlotRole> roles(n - 1, SlotRole::kCopy);
  roles.push_back(SlotRole::kRegister);
  CatalystBundle bundle{DensityMatrix::normalized(std::move(c), hc), n, std::move(roles)};

  // Composite S (x) C = S^{(x)n} (x) R, system first.
  HamiltonianPtr hsc = share(tensor(copies, reg));
  Eigen::MatrixXcd proj_last = basis_op(n, n, n - 1, n - 1);
  Eigen::MatrixXcd proj_rest = Eigen::MatrixXcd::Identity(idx(n), idx(n)) - proj_last;
  Eigen::MatrixXcd relabel = Eigen::MatrixXcd::Zero(idx(n), idx(n));
  for (std::size_t r = 0; r < n; ++r) relabel(idx((r + 1) % n), idx(r)) = 1.0;

  std::vector<std::size_t> dims(n, d);
  dims.push_back(n);
  std::vector<std::size_t> perm;
  perm.push_back(n - 1);
  for (std::size_t s = 0; s + 1 < n; ++s) perm.push_back(s);
  perm.push_back(n);
  Eigen::MatrixXcd redesignate = factor_permutation(dims, perm);
  Eigen::MatrixXcd post = redesignate * kron(Eigen::MatrixXcd::Identity(idx(total), idx(total)), relabel);

  std::vector<KrausOperator> ops;
  for (const auto& k : lambda_n.kraus()) {
    ops.push_back({post * kron(k.matrix, proj_last), k.shift});
  }
  ops.push_back({post * kron(Eigen::MatrixXcd::Identity(idx(total), idx(total)), proj_rest),
                 EnergyValue{}});
  CovariantChannel channel(std::move(ops), hsc, hsc);

  Eigen::MatrixXcd sigma = Eigen::MatrixXcd::Zero(idx(d), idx(d));
  for (std::size_t i = 0; i < n; ++i) sigma += partial_trace(tau, {i}).matrix();
  sigma /= static_cast<double>(n);
  DensityMatrix target = DensityMatrix::normalized(std::move(sigma), rho.hamiltonian_ptr());

  return {std::move(bundle), std::move(channel), std::move(tau), std::move(target)};
}

CatalystCheck check_correlated_catalyst(const DensityMatrix& rho, const CorrelatedCatalyst& built) {
  const auto& ch = built.channel;
  DensityMatrix input =
      DensityMatrix(kron(rho.matrix(), built.catalyst.state.matrix()), ch.in_ptr());
  DensityMatrix out = apply(ch, input);
  const std::size_t factors = ch.out().factor_count();
  std::vector<std::size_t> cat(factors - 1);
  std::iota(cat.begin(), cat.end(), std::size_t{1});
  DensityMatrix cat_out = partial_trace(out, cat);
  DensityMatrix sys_out = partial_trace(out, {0});
  return {max_entry_distance(cat_out.matrix(), built.catalyst.state.matrix()),
          max_entry_distance(sys_out.matrix(), built.target.matrix()),
          max_coherence(sys_out.rebind(rho.hamiltonian_ptr())), out};
}

std::vector<std::size_t> decode_label(std::size_t set, std::size_t n_roles, std::size_t k) {
  std::vector<std::size_t> label(k);
  for (std::size_t p = k; p-- > 0;) {
    label[p] = set % n_roles;
    set /= n_roles;
  }
  return label;
}

namespace {

std::size_t encode_label(const std::vector<std::size_t>& label, std::size_t n_roles) {
  std::size_t set = 0;
  for (std::size_t v : label) set = set * n_roles + v;
  return set;
}

}  // namespace

std::vector<ScheduleRound> recombination_schedule(std::size_t n_roles, std::size_t k) {
  if (n_roles < 2) throw std::invalid_argument("recombination_schedule: need N >= 2");
  const std::size_t sets = checked_pow(n_roles, k);
  std::vector<ScheduleRound> rounds;

  ScheduleRound first{1, {}};
  for (std::size_t s = 0; s < sets; ++s) first.groups.emplace_back(n_roles, s);
  rounds.push_back(std::move(first));

  for (std::size_t l = 2; l <= k + 1; ++l) {
    const std::size_t pos = l - 2;  // 0-based index of n_{l-1}
    ScheduleRound round{l, {}};
    // A group is fixed by the label outside `pos` (take n_pos = 0) and g.
    for (std::size_t s = 0; s < sets; ++s) {
      std::vector<std::size_t> base = decode_label(s, n_roles, k);
      if (base[pos] != 0) continue;
      for (std::size_t g = 0; g < n_roles; ++g) {
        std::vector<std::size_t> group(n_roles);
        for (std::size_t j = 0; j < n_roles; ++j) {
          std::vector<std::size_t> label = base;
          label[pos] = (g + j) % n_roles;
          group[j] = encode_label(label, n_roles);
        }
        round.groups.push_back(std::move(group));
      }
    }
    rounds.push_back(std::move(round));
  }
  return rounds;
}

ScheduleAudit audit_schedule(const std::vector<ScheduleRound>& rounds, std::size_t n_roles,
                             std::size_t k) {
  const std::size_t sets = checked_pow(n_roles, k);
  ScheduleAudit audit;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> co_grouped;
  for (const auto& round : rounds) {
    std::vector<std::size_t> uses(sets * n_roles, 0);
    for (const auto& group : round.groups) {
      if (group.size() != n_roles) audit.partitions = false;
      std::vector<std::size_t> inst;
      for (std::size_t j = 0; j < group.size(); ++j) {
        std::size_t id = group[j] * n_roles + j;
        if (group[j] >= sets) {
          audit.partitions = false;
          continue;
        }
        ++uses[id];
        inst.push_back(id);
      }
      for (std::size_t a = 0; a < inst.size(); ++a) {
        for (std::size_t b = a + 1; b < inst.size(); ++b) {
          auto key = std::minmax(inst[a], inst[b]);
          if (++co_grouped[{key.first, key.second}] > 1) audit.fresh = false;
        }
      }
      ++audit.conversions;
    }
    for (std::size_t u : uses) {
      if (u != 1) audit.partitions = false;
    }
  }
  return audit;
}

RateCertificate rate_certificate(std::size_t mu, std::size_t n_roles, std::size_t k) {
  if (mu < 1) throw std::invalid_argument("rate_certificate: mu must be positive");
  Integer sets = boost::multiprecision::pow(Integer(n_roles), static_cast<unsigned>(k));
  RateCertificate cert;
  cert.copies_in = Integer(mu) * sets;
  cert.copies_out = Integer(k + 1) * sets;
  cert.achieved_ratio = Rational(cert.copies_out, cert.copies_in);
  return cert;
}

std::size_t minimal_k_for_rate(std::size_t mu, const Rational& target) {
  if (mu < 1) throw std::invalid_argument("minimal_k_for_rate: mu must be positive");
  // (k + 1) / mu >= target  <=>  k >= target * mu - 1
  Rational bound = target * Rational(mu) - 1;
  if (bound <= 0) return 0;
  Integer q = boost::multiprecision::numerator(bound) / boost::multiprecision::denominator(bound);
  if (Rational(q) < bound) ++q;
  return q.convert_to<std::size_t>();
}

ContractReport marginal_catalytic_contract(const MarginalCatalyticProtocol& protocol) {
  const auto& ch = protocol.channel;
  DensityMatrix initial = protocol.input;
  std::vector<std::size_t> cat_factors;
  for (const auto& c : protocol.catalysts) {
    initial = tensor(initial, c);
    cat_factors.push_back(c.hamiltonian().factor_count());
  }
  if (initial.hamiltonian().energies() != ch.in().energies()) {
    throw std::invalid_argument("contract: channel input does not match input (x) catalysts");
  }
  const std::size_t target_factors = protocol.target.hamiltonian().factor_count();
  const std::size_t expected =
      target_factors + std::accumulate(cat_factors.begin(), cat_factors.end(), std::size_t{0});
  if (ch.out().factor_count() != expected) {
    throw std::invalid_argument("contract: channel output is not factored as target (x) catalysts");
  }
  if (protocol.epsilon < 0.0) throw std::invalid_argument("contract: epsilon must be nonnegative");

  DensityMatrix tau = apply(ch, initial.rebind(ch.in_ptr()));
  ContractReport report;
  report.epsilon = protocol.epsilon;

  std::vector<std::size_t> keep(target_factors);
  std::iota(keep.begin(), keep.end(), std::size_t{0});
  DensityMatrix sys = partial_trace(tau, keep);
  if (sys.dim() != protocol.target.dim()) {
    throw std::invalid_argument("contract: target dimension mismatch");
  }
  report.target_deviation = trace_distance(sys, protocol.target);

  std::size_t offset = target_factors;
  report.catalysts_returned = true;
  for (std::size_t i = 0; i < protocol.catalysts.size(); ++i) {
    std::vector<std::size_t> ci(cat_factors[i]);
    std::iota(ci.begin(), ci.end(), offset);
    offset += cat_factors[i];
    double dev = trace_distance(partial_trace(tau, ci), protocol.catalysts[i]);
    report.catalyst_deviations.push_back(dev);
    if (dev > kCatalystReturnTol) report.catalysts_returned = false;
  }
  report.target_reached = report.target_deviation < protocol.epsilon ||
                          report.target_deviation <= kCatalystReturnTol;
  return report;
}

}  // namespace coherence
