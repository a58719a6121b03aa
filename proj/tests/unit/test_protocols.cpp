#include <doctest.h>

#include <numbers>

#include "coherence/modes.hpp"
#include "coherence/protocols.hpp"
#include "coherence/random.hpp"
#include "oracles.hpp"

using namespace coherence;

namespace {

EnergyValue e(const std::string& s, long n = 1) { return EnergyValue::of(s, Rational(n)); }

HamiltonianPtr qubit() { return share(LabeledHamiltonian({EnergyValue{}, e("1")})); }

Eigen::MatrixXcd swap_factors(std::size_t d) {
  std::vector<std::size_t> dims{d, d}, perm{1, 0};
  return factor_permutation(dims, perm);
}

}  // namespace

TEST_CASE("weak qubit extraction") {
  auto h = share(LabeledHamiltonian({EnergyValue{}, e("1"), e("1", 5)}));
  Eigen::MatrixXcd m(3, 3);
  m << 0.5, 0.1, 0.05, 0.1, 0.3, 0.02, 0.05, 0.02, 0.2;
  DensityMatrix rho(m, h);
  auto q01 = extract_weak_qubit(rho, 0, 1);
  CHECK(q01.hamiltonian().energy(1) == e("1"));
  CHECK(std::abs(q01(0, 1) - Complex(0.1)) < 1e-15);
  auto q02 = extract_weak_qubit(rho, 0, 2);
  CHECK(q02.hamiltonian().energy(1) == e("1", 5));
  CHECK(std::abs(q02(0, 1) - Complex(0.05)) < 1e-15);
  CHECK(max_coherence(extract_weak_qubit(dephase(rho), 0, 1)) == 0.0);
  CHECK_THROWS(extract_weak_qubit(rho, 0, 0));
  CHECK_THROWS(extract_weak_qubit(rho, 0, 3));
  auto deg = share(LabeledHamiltonian({EnergyValue{}, e("1"), e("1")}));
  CHECK_THROWS(extract_weak_qubit(DensityMatrix::maximally_mixed(deg), 1, 2));
}

TEST_CASE("qubit pump") {
  auto h = qubit();
  DensityMatrix s(oracle::qubit(0.9, 0.05), h);
  CHECK(std::abs(pump_qubits(s, 0.0)(0, 1) - Complex(0.05)) < 1e-15);
  double ts = pump_optimal_angle(0.9);
  CHECK(std::abs(pump_qubits(s, ts)(0, 1)) == doctest::Approx(0.05 * std::sqrt(1.64)).epsilon(1e-12));

  DensityMatrix half(oracle::qubit(0.5, Complex(0.2, 0.1)), h);
  for (int i = 0; i <= 20; ++i) {
    double th = -std::numbers::pi + i * std::numbers::pi / 10;
    CHECK(std::abs(pump_qubits(half, th)(0, 1)) <= std::abs(half(0, 1)) + 1e-15);
  }
  for (double p : {0.6, 0.75, 0.95}) {
    DensityMatrix q(oracle::qubit(p, Complex(0.03, -0.02)), h);
    for (int i = 0; i < 12; ++i) {
      double th = 0.3 * i - 1.5;
      CHECK(std::abs(pump_qubits(q, th)(0, 1) - oracle::pump_closed_form(p, q(0, 1), th)) < 1e-14);
    }
  }
  auto h3 = share(LabeledHamiltonian({EnergyValue{}, e("1"), e("1", 2)}));
  CHECK_THROWS(pump_qubits(DensityMatrix::maximally_mixed(h3), 0.1));
}

TEST_CASE("counterexample family") {
  CHECK(counterexample_distance(2, 0.2, 0.01) == doctest::Approx(0.3862).epsilon(1e-12));
  auto row = analyze_counterexample(2, 0.2, 0.01);
  CHECK(std::abs(row.global_dist - 0.3862) < 1e-12);
  CHECK(row.f_formula == doctest::Approx(0.3862));
  // Per-copy marginal in the full trace norm is (1 - delta) eps + delta.
  CHECK(row.marginal_dist == doctest::Approx(0.99 * 0.2 + 0.01).epsilon(1e-12));

  auto tiny = analyze_counterexample(1, 1e-9, 1e-9);
  CHECK(tiny.global_dist < 1e-8);

  double prev = 0.0;
  for (std::size_t m = 1; m <= 6; ++m) {
    auto r = analyze_counterexample(m, 0.05, 0.01);
    CHECK(std::abs(r.global_dist - r.f_formula) < 1e-9);
    CHECK(r.global_dist > prev);
    CHECK(r.global_dist < 1.99);
    prev = r.global_dist;
  }
  CHECK(counterexample_distance(2000, 0.05, 0.01) == doctest::Approx(1.99).epsilon(1e-6));
  CHECK_THROWS(build_counterexample(0, 0.1, 0.1));
  CHECK_THROWS(build_counterexample(2, 0.0, 0.1));
  CHECK_THROWS(build_counterexample(2, 0.1, 1.0));
}

TEST_CASE("correlated catalyst: identity and swap") {
  auto h = qubit();
  Rng rng(41);
  auto rho = random_state(h, rng);
  for (std::size_t n = 1; n <= 3; ++n) {
    auto hn = share(tensor_power(*h, n));
    auto built = build_correlated_catalyst(rho, CovariantChannel::identity(hn));
    auto check = check_correlated_catalyst(rho, built);
    CHECK(built.catalyst.register_dim == n);
    CHECK(built.catalyst.roles.back() == SlotRole::kRegister);
    CHECK(check.catalyst_error < 1e-14);
    CHECK(oracle::max_abs(partial_trace(check.output, {0}).matrix() - rho.matrix()) < 1e-14);
  }
  auto h2 = share(tensor_power(*h, 2));
  auto swap = CovariantChannel::energy_conserving_unitary(swap_factors(2), h2);
  auto built = build_correlated_catalyst(rho, swap);
  auto check = check_correlated_catalyst(rho, built);
  CHECK(check.catalyst_error < 1e-14);
  CHECK(oracle::max_abs(partial_trace(check.output, {0}).matrix() - rho.matrix()) < 1e-14);
}

TEST_CASE("correlated catalyst: random three-copy protocol against brute force") {
  auto h = qubit();
  auto h3 = share(tensor_power(*h, 3));
  Rng rng(43);
  for (std::uint64_t s = 0; s < 3; ++s) {
    auto rho = random_state(h, rng);
    auto lambda = random_covariant(h3, h3, 2, 500 + s);
    auto built = build_correlated_catalyst(rho, lambda);

    // Build c independently from Lambda(rho^3) with oracle reductions.
    Eigen::MatrixXcd r = rho.matrix();
    Eigen::MatrixXcd tau = apply(lambda, tensor_power(rho, 3).rebind(h3)).matrix();
    std::vector<std::size_t> d3{2, 2, 2};
    Eigen::MatrixXcd tau2 = oracle::partial_trace(tau, d3, {true, true, false});
    Eigen::MatrixXcd tau1 = oracle::partial_trace(tau, d3, {true, false, false});
    auto proj = [](int k) {
      Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(3, 3);
      p(k, k) = 1.0;
      return p;
    };
    Eigen::MatrixXcd c = (oracle::kron(tau2, proj(0)) + oracle::kron(oracle::kron(r, tau1), proj(1)) +
                          oracle::kron(oracle::kron(r, r), proj(2))) /
                         3.0;
    CHECK(oracle::max_abs(built.catalyst.state.matrix() - c) < 1e-13);

    Eigen::MatrixXcd target = (oracle::partial_trace(tau, d3, {true, false, false}) +
                               oracle::partial_trace(tau, d3, {false, true, false}) +
                               oracle::partial_trace(tau, d3, {false, false, true})) /
                              3.0;
    auto check = check_correlated_catalyst(rho, built);
    CHECK(check.catalyst_error < 1e-12);
    CHECK(oracle::max_abs(partial_trace(check.output, {0}).matrix() - target) < 1e-12);
  }
}

TEST_CASE("correlated catalyst errors") {
  auto h = qubit();
  auto rho = DensityMatrix::maximally_mixed(h);
  auto h3q = share(LabeledHamiltonian({EnergyValue{}, e("1"), e("1", 2)}));
  CHECK_THROWS_AS(build_correlated_catalyst(rho, CovariantChannel::identity(h3q)), std::invalid_argument);
  auto h4 = share(tensor_power(*h, 4));
  CHECK_THROWS_AS(build_correlated_catalyst(rho, CovariantChannel::identity(h4), 32),
                  std::length_error);
  auto wrong = share(LabeledHamiltonian({EnergyValue{}, e("1"), e("1", 3), e("1", 2)}));
  CHECK_THROWS_AS(build_correlated_catalyst(rho, CovariantChannel::identity(wrong)), std::invalid_argument);
}

TEST_CASE("recombination schedule") {
  auto r0 = recombination_schedule(2, 0);
  REQUIRE(r0.size() == 1);
  CHECK(r0[0].groups.size() == 1);

  auto r1 = recombination_schedule(2, 1);
  CHECK(r1.size() == 2);
  CHECK(audit_schedule(r1, 2, 1).conversions == 4);

  auto r32 = recombination_schedule(3, 2);
  CHECK(r32.size() == 3);
  for (const auto& round : r32) CHECK(round.groups.size() == 9);
  auto audit = audit_schedule(r32, 3, 2);
  CHECK(audit.conversions == 27);
  CHECK(audit.partitions);
  CHECK(audit.fresh);

  for (std::size_t n = 2; n <= 4; ++n) {
    for (std::size_t k = 0; k <= 3; ++k) {
      auto rounds = recombination_schedule(n, k);
      auto a = audit_schedule(rounds, n, k);
      std::size_t nk = 1;
      for (std::size_t i = 0; i < k; ++i) nk *= n;
      CHECK(a.conversions == (k + 1) * nk);
      CHECK(a.partitions);
      CHECK(a.fresh);
      // Round l >= 2 groups labels that differ only at position l - 1.
      for (std::size_t l = 1; l < rounds.size(); ++l) {
        for (const auto& g : rounds[l].groups) {
          auto first = decode_label(g[0], n, k);
          for (std::size_t j = 0; j < g.size(); ++j) {
            auto lab = decode_label(g[j], n, k);
            for (std::size_t p = 0; p < k; ++p) {
              if (p != l - 1) CHECK(lab[p] == first[p]);
            }
            CHECK(lab[l - 1] == (first[l - 1] + j) % n);
          }
        }
      }
    }
  }
  CHECK_THROWS(recombination_schedule(1, 2));

  // A repeated round breaks freshness.
  auto dup = recombination_schedule(2, 1);
  dup.push_back(dup.back());
  CHECK_FALSE(audit_schedule(dup, 2, 1).fresh);
}

TEST_CASE("rate certificates") {
  CHECK(rate_certificate(4, 2, 3).achieved_ratio == 1);
  CHECK(rate_certificate(4, 2, 7).achieved_ratio == 2);
  auto cert = rate_certificate(4, 3, 2);
  CHECK(cert.copies_in == 36);
  CHECK(cert.copies_out == 27);
  CHECK(cert.achieved_ratio == Rational(cert.copies_out, cert.copies_in));
  CHECK(minimal_k_for_rate(4, Rational(10)) == 39);
  CHECK(minimal_k_for_rate(4, Rational(1, 10)) == 0);
  CHECK(minimal_k_for_rate(3, Rational(5, 3)) == 4);
  for (std::size_t k = 0; k < 10; ++k) {
    CHECK(rate_certificate(5, 2, k + 1).achieved_ratio > rate_certificate(5, 2, k).achieved_ratio);
  }
  CHECK_THROWS(rate_certificate(0, 2, 1));
}

TEST_CASE("marginal catalytic contract") {
  auto h = qubit();
  Rng rng(51);
  auto xi = random_state(h, rng);
  MarginalCatalyticProtocol id{CovariantChannel::identity(h), xi, {}, xi, 0.0};
  auto r = marginal_catalytic_contract(id);
  CHECK(r.passed());
  CHECK(r.target_deviation < 1e-15);

  // Catalyst swapped with a fresh environment qubit: the return deviation is the injected one.
  auto c = random_state(h, rng);
  auto pair = share(tensor(*h, *h));
  auto sw = CovariantChannel::energy_conserving_unitary(swap_factors(2), pair);
  MarginalCatalyticProtocol perturbed{sw, xi, {c}, c, 0.5};
  auto rp = marginal_catalytic_contract(perturbed);
  REQUIRE(rp.catalyst_deviations.size() == 1);
  CHECK(rp.catalyst_deviations[0] == doctest::Approx(trace_distance(xi, c)).epsilon(1e-12));
  CHECK_FALSE(rp.catalysts_returned);

  auto h3 = share(LabeledHamiltonian({EnergyValue{}, e("1"), e("1", 5)}));
  auto rho = random_state(h3, rng);
  auto ch = weak_qubit_channel(h3, 0, 1);
  auto target = apply(ch, rho);
  MarginalCatalyticProtocol extract{ch, rho, {}, target, 0.0};
  auto re = marginal_catalytic_contract(extract);
  CHECK(re.passed());
  CHECK(std::abs(target(0, 1) - rho(0, 1)) < 1e-15);

  MarginalCatalyticProtocol malformed{ch, rho, {c}, target, 0.0};
  CHECK_THROWS(marginal_catalytic_contract(malformed));
}
