#include "coherence/measures.hpp"

#include <cmath>
#include <stdexcept>

#include "coherence/parallel.hpp"
#include "coherence/random.hpp"

namespace coherence {

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::kQfi: return "qfi";
    case Measure::kWySkew: return "wy_skew";
    case Measure::kRelEntAsym: return "rel_ent_asym";
  }
  return "?";
}

double qfi(const DensityMatrix& rho, const Valuation& valuation) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix());
  const Eigen::VectorXd lam = es.eigenvalues();
  const Eigen::MatrixXcd& v = es.eigenvectors();
  const Eigen::VectorXd e = rho.hamiltonian().evaluate(valuation);
  const Eigen::MatrixXcd h = v.adjoint() * e.cast<Complex>().asDiagonal() * v;
  double f = 0.0;
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    for (Eigen::Index l = 0; l < lam.size(); ++l) {
      double s = lam(k) + lam(l);
      if (s <= 1e-14) continue;
      double d = lam(k) - lam(l);
      f += d * d / s * std::norm(h(k, l));
    }
  }
  return 2.0 * f;
}

namespace {

Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  // Eigenvalues at rounding level would contribute sqrt(1e-16) ~ 1e-8 noise.
  Eigen::VectorXd s = es.eigenvalues().unaryExpr([](double l) { return l > 1e-14 ? std::sqrt(l) : 0.0; });
  return es.eigenvectors() * s.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

double entropy_of(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (double l : es.eigenvalues()) {
    if (l > 0.0) s -= l * std::log(l);
  }
  return s;
}

}  // namespace

double wy_skew(const DensityMatrix& rho, const Valuation& valuation) {
  const Eigen::MatrixXcd r = psd_sqrt(rho.matrix());
  const Eigen::VectorXd e = rho.hamiltonian().evaluate(valuation);
  // [sqrt(rho), H]_{ij} = r_ij (E_j - E_i)
  double sum = 0.0;
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
      double d = e(j) - e(i);
      sum += d * d * std::norm(r(i, j));
    }
  }
  return 0.5 * sum;
}

double von_neumann_entropy(const DensityMatrix& rho) { return entropy_of(rho.matrix()); }

double rel_ent_asym(const DensityMatrix& rho) {
  return std::max(0.0, von_neumann_entropy(dephase(rho)) - von_neumann_entropy(rho));
}

double evaluate_measure(Measure m, const DensityMatrix& rho, const Valuation& valuation) {
  switch (m) {
    case Measure::kQfi: return qfi(rho, valuation);
    case Measure::kWySkew: return wy_skew(rho, valuation);
    case Measure::kRelEntAsym: return rel_ent_asym(rho);
  }
  throw std::invalid_argument("unknown measure");
}

MeasureReport measure_report(Measure m, const DensityMatrix& rho, const Valuation& valuation) {
  return {m, evaluate_measure(m, rho, valuation), &rho, valuation};
}

MonotonicityReport monotonicity_suite(Measure m, const std::vector<CovariantChannel>& channels,
                                      const std::vector<DensityMatrix>& states,
                                      const Valuation& valuation,
                                      const std::vector<NCopySample>& ncopy) {
  MonotonicityReport report;
  report.name = m;
  std::vector<double> before(states.size());
  for (std::size_t s = 0; s < states.size(); ++s) before[s] = evaluate_measure(m, states[s], valuation);

  const std::size_t pairs = channels.size() * states.size();
  std::vector<double> after(pairs, 0.0);
  std::vector<char> applicable(pairs, 0);
  parallel_for(pairs, [&](std::size_t p) {
    const auto& ch = channels[p / states.size()];
    const auto& rho = states[p % states.size()];
    if (rho.hamiltonian().energies() != ch.in().energies()) return;
    applicable[p] = 1;
    after[p] = evaluate_measure(m, apply(ch, rho), valuation);
  });
  for (std::size_t p = 0; p < pairs; ++p) {
    if (!applicable[p]) continue;
    std::size_t c = p / states.size(), s = p % states.size();
    ++report.checks;
    double inc = after[p] - before[s];
    report.max_increase = std::max(report.max_increase, inc);
    if (inc > kMonotonicityTol) report.violations.push_back({c, s, before[s], after[p]});
  }
  for (std::size_t i = 0; i < ncopy.size(); ++i) {
    const auto& sample = ncopy[i];
    double single = evaluate_measure(m, sample.rho, valuation);
    double out = evaluate_measure(m, sample.tau, valuation);
    ++report.ncopy_checks;
    if (out / static_cast<double>(sample.n) > single + kMonotonicityTol) {
      report.ncopy_violations.push_back(i);
    }
  }
  return report;
}

SuperadditivityProbe superadditivity_probe(Measure m, std::uint64_t seed, std::size_t trials) {
  auto qubit = LabeledHamiltonian({EnergyValue{}, EnergyValue::unit("1")});
  auto pair = share(tensor(qubit, qubit));
  const Valuation valuation{{"1", 1.0}};

  std::vector<double> gaps(trials, 0.0);
  parallel_for(trials, [&](std::size_t t) {
    Rng rng(instance_seed(seed, t));
    // Alternate ranks so that pure, low-rank and full-rank states all appear.
    DensityMatrix tau = random_state(pair, rng, static_cast<Eigen::Index>(1 + t % 4));
    gaps[t] = evaluate_measure(m, tau, valuation) -
              evaluate_measure(m, partial_trace(tau, {0}), valuation) -
              evaluate_measure(m, partial_trace(tau, {1}), valuation);
  });

  SuperadditivityProbe probe;
  probe.name = m;
  probe.trials = trials;
  std::size_t best = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    if (gaps[t] < probe.best_gap) {
      probe.best_gap = gaps[t];
      best = t;
    }
  }
  if (best < trials && probe.best_gap < -kWitnessTol) {
    Rng rng(instance_seed(seed, best));
    probe.witness = random_state(pair, rng, static_cast<Eigen::Index>(1 + best % 4));
  }
  return probe;
}

}  // namespace coherence
