#include <doctest.h>

#include <numbers>

#include "coherence/random.hpp"
#include "coherence/state.hpp"
#include "oracles.hpp"

using namespace coherence;

namespace {

HamiltonianPtr qubit_h(const std::string& sym = "1") {
  return share(LabeledHamiltonian(SymbolContext{"1", "sqrt2"}, {EnergyValue{}, EnergyValue::unit(sym)}));
}

DensityMatrix plus(HamiltonianPtr h) { return DensityMatrix::pure(Eigen::Vector2cd(1.0, 1.0), h); }

const Valuation kVal{{"1", 1.0}, {"sqrt2", std::numbers::sqrt2}};

}  // namespace

TEST_CASE("density matrix validation") {
  auto h = qubit_h();
  Eigen::MatrixXcd m(2, 2);
  m << 0.5, 0.1, 0.1, 0.5;
  CHECK_NOTHROW(DensityMatrix(m, h));
  Eigen::MatrixXcd bad_trace = m * 1.1;
  CHECK_THROWS_AS(DensityMatrix(bad_trace, h), std::invalid_argument);
  Eigen::MatrixXcd non_herm = m;
  non_herm(0, 1) = Complex(0.1, 0.2);
  CHECK_THROWS_AS(DensityMatrix(non_herm, h), std::invalid_argument);
  Eigen::MatrixXcd neg(2, 2);
  neg << 1.2, 0.0, 0.0, -0.2;
  CHECK_THROWS_AS(DensityMatrix(neg, h), std::invalid_argument);
  Eigen::MatrixXcd wrong_dim = Eigen::MatrixXcd::Identity(3, 3) / 3.0;
  CHECK_THROWS(DensityMatrix(wrong_dim, h));
}

TEST_CASE("tensor products") {
  auto h = qubit_h();
  auto mixed = DensityMatrix::maximally_mixed(h);
  auto t = tensor(mixed, mixed);
  CHECK(t.dim() == 4);
  CHECK(oracle::max_abs(t.matrix() - Eigen::MatrixXcd::Identity(4, 4) / 4.0) < 1e-15);

  auto zero = DensityMatrix::pure(Eigen::Vector2cd(1.0, 0.0), h);
  auto one = DensityMatrix::pure(Eigen::Vector2cd(0.0, 1.0), h);
  auto t01 = tensor(zero, one);
  CHECK(t01(1, 1) == Complex(1.0));
  CHECK(t01.hamiltonian().energy(1) == EnergyValue::unit("1"));
  CHECK(t01.hamiltonian().factor_count() == 2);

  Rng rng(3);
  auto a = random_state(h, rng), b = random_state(h, rng);
  CHECK(oracle::max_abs(tensor(a, b).matrix() - oracle::kron(a.matrix(), b.matrix())) < 1e-15);

  auto other_ctx = share(LabeledHamiltonian({EnergyValue{}, EnergyValue::unit("sqrt3")}));
  CHECK_THROWS(tensor(a, DensityMatrix::maximally_mixed(other_ctx)));
}

TEST_CASE("partial traces") {
  auto h = qubit_h();
  Rng rng(11);
  auto a = random_state(h, rng), b = random_state(h, rng);
  CHECK(oracle::max_abs(partial_trace(tensor(a, b), {0}).matrix() - a.matrix()) < 1e-12);
  CHECK(oracle::max_abs(partial_trace(tensor(a, b), {1}).matrix() - b.matrix()) < 1e-12);

  Eigen::Vector4cd bell(1.0, 0.0, 0.0, 1.0);
  auto phi = DensityMatrix::pure(bell, share(tensor(*h, *h)));
  CHECK(oracle::max_abs(partial_trace(phi, {0}).matrix() - Eigen::MatrixXcd::Identity(2, 2) / 2.0) < 1e-15);

  auto qutrit = share(LabeledHamiltonian(SymbolContext{"1", "sqrt2"},
                                         {EnergyValue{}, EnergyValue::unit("1"), EnergyValue::unit("sqrt2")}));
  auto tri = share(tensor(tensor(*h, *qutrit), *h));
  for (int t = 0; t < 5; ++t) {
    auto rho = random_state(tri, rng);
    std::vector<std::size_t> dims{2, 3, 2};
    auto outer = partial_trace(rho, {0, 2});
    CHECK(oracle::max_abs(outer.matrix() - oracle::partial_trace(rho.matrix(), dims, {true, false, true})) < 1e-13);
    auto mid = partial_trace(rho, {1});
    CHECK(oracle::max_abs(mid.matrix() - oracle::partial_trace(rho.matrix(), dims, {false, true, false})) < 1e-13);
    CHECK(mid.hamiltonian().energies() == qutrit->energies());
  }
  auto rho = random_state(tri, rng);
  CHECK_THROWS(partial_trace(rho, {2, 0}));
  CHECK_THROWS(partial_trace(rho, {3}));
}

TEST_CASE("trace distance") {
  auto h = qubit_h();
  auto zero = DensityMatrix::pure(Eigen::Vector2cd(1.0, 0.0), h);
  auto one = DensityMatrix::pure(Eigen::Vector2cd(0.0, 1.0), h);
  CHECK(trace_distance(zero, zero) == 0.0);
  CHECK(trace_distance(zero, one) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(normalized_trace_distance(zero, one) == doctest::Approx(1.0).epsilon(1e-14));

  auto h4 = share(tensor(*h, *h));
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    auto a = random_state(h4, rng), b = random_state(h4, rng), c = random_state(h4, rng);
    double ab = trace_distance(a, b);
    CHECK(std::abs(ab - oracle::trace_norm(a.matrix() - b.matrix())) < 1e-12);
    CHECK(ab <= trace_distance(a, c) + trace_distance(c, b) + 1e-10);
    CHECK(trace_distance(partial_trace(a, {0}), partial_trace(b, {0})) <= ab + 1e-12);
  }
  CHECK_THROWS(trace_distance(zero, DensityMatrix::maximally_mixed(h4)));
}

TEST_CASE("time evolution") {
  auto h = qubit_h();
  auto p = plus(h);
  CHECK(oracle::max_abs(time_evolve(p, 2.0 * std::numbers::pi, kVal).matrix() - p.matrix()) < 1e-12);
  auto half = time_evolve(p, std::numbers::pi, kVal);
  CHECK(std::abs(half(0, 1) - Complex(-0.5)) < 1e-12);
  auto t = time_evolve(p, 0.3, kVal);
  CHECK(std::abs(t(0, 1) - 0.5 * std::exp(Complex(0.0, 0.3))) < 1e-14);
  Rng rng(2);
  auto inc = random_incoherent_state(h, rng);
  CHECK(oracle::max_abs(time_evolve(inc, 1.7, kVal).matrix() - inc.matrix()) < 1e-15);
  CHECK_THROWS(time_evolve(p, 1.0, Valuation{}));
}

TEST_CASE("dephasing") {
  auto h = qubit_h();
  auto d = dephase(plus(h));
  CHECK(oracle::max_abs(d.matrix() - Eigen::MatrixXcd::Identity(2, 2) / 2.0) < 1e-15);

  auto deg = share(LabeledHamiltonian({EnergyValue{}, EnergyValue::unit("1"), EnergyValue::unit("1")}));
  Rng rng(9);
  for (int t = 0; t < 10; ++t) {
    auto rho = random_state(deg, rng);
    auto dr = dephase(rho);
    CHECK(dr(1, 2) == rho(1, 2));
    CHECK(dr(0, 1) == Complex(0.0));
    CHECK(dr(0, 2) == Complex(0.0));
    CHECK(oracle::max_abs(dephase(dr).matrix() - dr.matrix()) == 0.0);
    CHECK(oracle::max_abs(time_evolve(dr, 0.77, {{"1", 1.0}}).matrix() - dr.matrix()) < 1e-15);
    CHECK(max_coherence(dr) == 0.0);
  }
}
