#include "coherence/channel.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include "coherence/lattice.hpp"
#include "coherence/random.hpp"

namespace coherence {

namespace {

constexpr double kKrausDropNorm = 1e-14;

// Exact shift E_f - E_e for every (output block, input block) pair, interned.
class ShiftTable {
 public:
  ShiftTable(const LabeledHamiltonian& in, const LabeledHamiltonian& out)
      : in_(in), out_(out), in_blocks_(in.block_count()) {
    id_.resize(out.block_count() * in_blocks_);
    for (std::size_t bo = 0; bo < out.block_count(); ++bo) {
      for (std::size_t bi = 0; bi < in_blocks_; ++bi) {
        EnergyValue d = out.block_energy(bo) - in.block_energy(bi);
        auto [it, inserted] = ids_.try_emplace(d, shifts_.size());
        if (inserted) shifts_.push_back(d);
        id_[bo * in_blocks_ + bi] = it->second;
      }
    }
  }

  std::size_t at(std::size_t f, std::size_t e) const {
    return id_[out_.block(f) * in_blocks_ + in_.block(e)];
  }
  std::optional<std::size_t> find(const EnergyValue& shift) const {
    auto it = ids_.find(shift);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }
  const EnergyValue& shift(std::size_t id) const { return shifts_[id]; }
  std::size_t count() const { return shifts_.size(); }

 private:
  const LabeledHamiltonian& in_;
  const LabeledHamiltonian& out_;
  std::size_t in_blocks_;
  std::map<EnergyValue, std::size_t> ids_;
  std::vector<EnergyValue> shifts_;
  std::vector<std::size_t> id_;
};

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

// Brings both Hamiltonians onto one symbol context.
std::pair<HamiltonianPtr, HamiltonianPtr> common_context(const HamiltonianPtr& a,
                                                         const HamiltonianPtr& b) {
  if (a->symbols() == b->symbols()) return {a, b};
  SymbolContext all = a->symbols().merged(b->symbols());
  return {share(a->with_symbols(all)), share(b->with_symbols(all))};
}

}  // namespace

CovariantChannel::CovariantChannel(std::vector<KrausOperator> kraus, HamiltonianPtr in,
                                   HamiltonianPtr out)
    : kraus_(std::move(kraus)), in_(std::move(in)), out_(std::move(out)) {
  if (!in_ || !out_) throw std::invalid_argument("channel needs input and output Hamiltonians");
  if (kraus_.empty()) throw std::invalid_argument("channel needs at least one Kraus operator");
  ShiftTable table(*in_, *out_);
  for (std::size_t k = 0; k < kraus_.size(); ++k) {
    auto& op = kraus_[k];
    if (static_cast<std::size_t>(op.matrix.rows()) != out_->dim() ||
        static_cast<std::size_t>(op.matrix.cols()) != in_->dim()) {
      throw std::invalid_argument("Kraus operator " + std::to_string(k) + " has wrong shape");
    }
    auto sid = table.find(op.shift);
    for (std::size_t f = 0; f < out_->dim(); ++f) {
      for (std::size_t e = 0; e < in_->dim(); ++e) {
        if (sid && table.at(f, e) == *sid) continue;
        Complex& v = op.matrix(idx(f), idx(e));
        if (std::abs(v) > tol::kCovariance) {
          throw std::invalid_argument("Kraus operator " + std::to_string(k) + " with shift " +
                                      to_string(op.shift) + " connects levels " +
                                      std::to_string(e) + " -> " + std::to_string(f) +
                                      " of a different energy change");
        }
        v = 0.0;
      }
    }
  }
  double err = completeness_error(kraus_matrices());
  if (err > tol::kCompleteness) {
    throw std::invalid_argument("Kraus operators violate completeness by " + std::to_string(err));
  }
}

CovariantChannel CovariantChannel::identity(HamiltonianPtr h) {
  auto d = idx(h->dim());
  return CovariantChannel({{Eigen::MatrixXcd::Identity(d, d), EnergyValue{}}}, h, h);
}

CovariantChannel CovariantChannel::dephasing(HamiltonianPtr h) {
  std::vector<KrausOperator> ops;
  auto d = idx(h->dim());
  for (std::size_t b = 0; b < h->block_count(); ++b) {
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t i = 0; i < h->dim(); ++i) {
      if (h->block(i) == b) p(idx(i), idx(i)) = 1.0;
    }
    ops.push_back({std::move(p), EnergyValue{}});
  }
  return CovariantChannel(std::move(ops), h, h);
}

CovariantChannel CovariantChannel::energy_conserving_unitary(const Eigen::MatrixXcd& u,
                                                             HamiltonianPtr h) {
  return CovariantChannel({{u, EnergyValue{}}}, h, h);
}

std::vector<Eigen::MatrixXcd> CovariantChannel::kraus_matrices() const {
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(kraus_.size());
  for (const auto& k : kraus_) out.push_back(k.matrix);
  return out;
}

double completeness_error(std::span<const Eigen::MatrixXcd> kraus) {
  if (kraus.empty()) return 1.0;
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(kraus[0].cols(), kraus[0].cols());
  for (const auto& k : kraus) s += k.adjoint() * k;
  s -= Eigen::MatrixXcd::Identity(s.rows(), s.cols());
  return s.cwiseAbs().maxCoeff();
}

ChannelOutput apply_reporting(const CovariantChannel& channel, const DensityMatrix& rho) {
  if (rho.hamiltonian().energies() != channel.in().energies()) {
    throw std::invalid_argument("apply: state Hamiltonian does not match channel input");
  }
  const auto d = idx(channel.out().dim());
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& k : channel.kraus()) acc.noalias() += k.matrix * rho.matrix() * k.matrix.adjoint();
  double dev = std::abs(acc.trace() - Complex(1.0));
  return {DensityMatrix::normalized(std::move(acc), channel.out_ptr()), dev};
}

DensityMatrix apply(const CovariantChannel& channel, const DensityMatrix& rho) {
  return apply_reporting(channel, rho).state;
}

Eigen::MatrixXcd choi_matrix(std::span<const Eigen::MatrixXcd> kraus) {
  if (kraus.empty()) throw std::invalid_argument("choi_matrix: no Kraus operators");
  const Eigen::Index d_out = kraus[0].rows(), d_in = kraus[0].cols();
  Eigen::MatrixXcd vecs(d_out * d_in, static_cast<Eigen::Index>(kraus.size()));
  for (std::size_t k = 0; k < kraus.size(); ++k) {
    for (Eigen::Index f = 0; f < d_out; ++f) {
      for (Eigen::Index i = 0; i < d_in; ++i) vecs(f * d_in + i, idx(k)) = kraus[k](f, i);
    }
  }
  return vecs * vecs.adjoint();
}

double verify_covariance(std::span<const Eigen::MatrixXcd> kraus, const LabeledHamiltonian& in,
                         const LabeledHamiltonian& out, const Valuation& valuation) {
  Eigen::VectorXd e_in = in.evaluate(valuation);
  Eigen::VectorXd e_out = out.evaluate(valuation);
  Eigen::MatrixXcd j = choi_matrix(kraus);
  const Eigen::Index d_in = e_in.size();
  Eigen::VectorXd omega(j.rows());
  for (Eigen::Index a = 0; a < j.rows(); ++a) omega(a) = e_out(a / d_in) - e_in(a % d_in);
  double worst = 0.0;
  for (Eigen::Index a = 0; a < j.rows(); ++a) {
    for (Eigen::Index b = 0; b < j.cols(); ++b) {
      worst = std::max(worst, std::abs(j(a, b)) * std::abs(omega(b) - omega(a)));
    }
  }
  return worst;
}

double verify_covariance(const CovariantChannel& channel, const Valuation& valuation) {
  auto ks = channel.kraus_matrices();
  return verify_covariance(ks, channel.in(), channel.out(), valuation);
}

double shift_block_residual(std::span<const Eigen::MatrixXcd> kraus, const LabeledHamiltonian& in,
                            const LabeledHamiltonian& out) {
  ShiftTable table(in, out);
  Eigen::MatrixXcd j = choi_matrix(kraus);
  const std::size_t d_in = in.dim();
  double worst = 0.0;
  for (Eigen::Index a = 0; a < j.rows(); ++a) {
    std::size_t sa = table.at(static_cast<std::size_t>(a) / d_in, static_cast<std::size_t>(a) % d_in);
    for (Eigen::Index b = 0; b < j.cols(); ++b) {
      std::size_t sb =
          table.at(static_cast<std::size_t>(b) / d_in, static_cast<std::size_t>(b) % d_in);
      if (sa != sb) worst = std::max(worst, std::abs(j(a, b)));
    }
  }
  return worst;
}

CovariantChannel definite_shift_form(std::span<const Eigen::MatrixXcd> kraus, HamiltonianPtr in,
                                     HamiltonianPtr out) {
  double residual = shift_block_residual(kraus, *in, *out);
  if (residual > tol::kCovariance) {
    throw std::invalid_argument("channel is not covariant: Choi weight " +
                                std::to_string(residual) + " between different shift blocks");
  }
  ShiftTable table(*in, *out);
  Eigen::MatrixXcd j = choi_matrix(kraus);
  const std::size_t d_in = in->dim(), d_out = out->dim();
  std::vector<std::vector<std::size_t>> members(table.count());
  for (std::size_t a = 0; a < d_in * d_out; ++a) members[table.at(a / d_in, a % d_in)].push_back(a);

  std::vector<KrausOperator> ops;
  for (std::size_t s = 0; s < members.size(); ++s) {
    const auto& m = members[s];
    if (m.empty()) continue;
    Eigen::MatrixXcd block(idx(m.size()), idx(m.size()));
    for (std::size_t x = 0; x < m.size(); ++x) {
      for (std::size_t y = 0; y < m.size(); ++y) block(idx(x), idx(y)) = j(idx(m[x]), idx(m[y]));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block);
    for (Eigen::Index c = 0; c < es.eigenvalues().size(); ++c) {
      double lambda = es.eigenvalues()(c);
      if (lambda <= kKrausDropNorm) continue;
      Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(idx(d_out), idx(d_in));
      for (std::size_t x = 0; x < m.size(); ++x) {
        k(idx(m[x] / d_in), idx(m[x] % d_in)) = std::sqrt(lambda) * es.eigenvectors()(idx(x), c);
      }
      ops.push_back({std::move(k), table.shift(s)});
    }
  }
  return CovariantChannel(std::move(ops), std::move(in), std::move(out));
}

CovariantChannel from_dilation(const Eigen::MatrixXcd& v, HamiltonianPtr system_in,
                               const DensityMatrix& ancilla, HamiltonianPtr system_out,
                               HamiltonianPtr ancilla_out) {
  const std::size_t ds = system_in->dim(), da = ancilla.dim();
  const std::size_t dso = system_out->dim(), dao = ancilla_out->dim();
  if (static_cast<std::size_t>(v.cols()) != ds * da ||
      static_cast<std::size_t>(v.rows()) != dso * dao) {
    throw std::invalid_argument("from_dilation: dilation has wrong shape");
  }
  if (max_coherence(ancilla) > tol::kCovariance) {
    throw std::invalid_argument("from_dilation: ancilla state is not incoherent");
  }
  double iso = (v.adjoint() * v - Eigen::MatrixXcd::Identity(v.cols(), v.cols())).cwiseAbs().maxCoeff();
  if (iso > tol::kCompleteness) {
    throw std::invalid_argument("from_dilation: dilation is not an isometry (error " +
                                std::to_string(iso) + ")");
  }
  SymbolContext all = system_in->symbols()
                          .merged(ancilla.hamiltonian().symbols())
                          .merged(system_out->symbols())
                          .merged(ancilla_out->symbols());
  LabeledHamiltonian total_in = tensor(system_in->with_symbols(all), ancilla.hamiltonian().with_symbols(all));
  LabeledHamiltonian total_out = tensor(system_out->with_symbols(all), ancilla_out->with_symbols(all));
  for (std::size_t r = 0; r < dso * dao; ++r) {
    for (std::size_t c = 0; c < ds * da; ++c) {
      if (std::abs(v(idx(r), idx(c))) > tol::kCovariance && total_out.energy(r) != total_in.energy(c)) {
        throw std::invalid_argument("from_dilation: dilation does not conserve energy (" +
                                    to_string(total_in.energy(c)) + " -> " +
                                    to_string(total_out.energy(r)) + ")");
      }
    }
  }

  // Eigen-decompose eta inside each ancilla energy block.
  const auto& ha = ancilla.hamiltonian();
  std::vector<std::pair<double, Eigen::VectorXcd>> eta_terms;
  std::vector<EnergyValue> eta_energy;
  for (std::size_t b = 0; b < ha.block_count(); ++b) {
    std::vector<std::size_t> lv;
    for (std::size_t i = 0; i < da; ++i) {
      if (ha.block(i) == b) lv.push_back(i);
    }
    Eigen::MatrixXcd sub(idx(lv.size()), idx(lv.size()));
    for (std::size_t x = 0; x < lv.size(); ++x) {
      for (std::size_t y = 0; y < lv.size(); ++y) sub(idx(x), idx(y)) = ancilla(lv[x], lv[y]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sub);
    for (Eigen::Index c = 0; c < es.eigenvalues().size(); ++c) {
      if (es.eigenvalues()(c) <= kKrausDropNorm) continue;
      Eigen::VectorXcd full = Eigen::VectorXcd::Zero(idx(da));
      for (std::size_t x = 0; x < lv.size(); ++x) full(idx(lv[x])) = es.eigenvectors()(idx(x), c);
      eta_terms.emplace_back(es.eigenvalues()(c), std::move(full));
      eta_energy.push_back(ha.block_energy(b));
    }
  }

  auto [hin, hout] = common_context(system_in, system_out);
  std::vector<KrausOperator> ops;
  for (std::size_t t = 0; t < eta_terms.size(); ++t) {
    const auto& [p, vec] = eta_terms[t];
    for (std::size_t a = 0; a < dao; ++a) {
      Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(idx(dso), idx(ds));
      for (std::size_t so = 0; so < dso; ++so) {
        for (std::size_t s = 0; s < ds; ++s) {
          Complex acc = 0.0;
          for (std::size_t b = 0; b < da; ++b) acc += v(idx(so * dao + a), idx(s * da + b)) * vec(idx(b));
          k(idx(so), idx(s)) = std::sqrt(p) * acc;
        }
      }
      if (k.norm() <= kKrausDropNorm) continue;
      ops.push_back({std::move(k), eta_energy[t] - ancilla_out->energy(a)});
    }
  }
  return CovariantChannel(std::move(ops), hin, hout);
}

CovariantChannel from_dilation(const Eigen::MatrixXcd& u, HamiltonianPtr system,
                               const DensityMatrix& ancilla) {
  return from_dilation(u, system, ancilla, system, ancilla.hamiltonian_ptr());
}

namespace {

// Haar isometry on every exact-energy block: columns from `in`, rows from `out`.
Eigen::MatrixXcd blockwise_haar(const LabeledHamiltonian& in, const LabeledHamiltonian& out,
                                Rng& rng) {
  std::map<EnergyValue, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> groups;
  for (std::size_t c = 0; c < in.dim(); ++c) groups[in.energy(c)].first.push_back(c);
  for (std::size_t r = 0; r < out.dim(); ++r) {
    auto it = groups.find(out.energy(r));
    if (it != groups.end()) it->second.second.push_back(r);
  }
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(idx(out.dim()), idx(in.dim()));
  for (const auto& [_, g] : groups) {
    const auto& [cols, rows] = g;
    if (rows.size() < cols.size()) {
      throw std::logic_error("blockwise_haar: output block smaller than input block");
    }
    Eigen::MatrixXcd b = haar_isometry(idx(rows.size()), idx(cols.size()), rng);
    for (std::size_t x = 0; x < rows.size(); ++x) {
      for (std::size_t y = 0; y < cols.size(); ++y) v(idx(rows[x]), idx(cols[y])) = b(idx(x), idx(y));
    }
  }
  return v;
}

DensityMatrix random_diagonal_state(HamiltonianPtr h, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  Eigen::VectorXd w(idx(h->dim()));
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = expo(rng) + 1e-3;
  w /= w.sum();
  Eigen::MatrixXcd m = w.cast<Complex>().asDiagonal();
  return DensityMatrix::normalized(std::move(m), std::move(h));
}

}  // namespace

CovariantChannel random_covariant(HamiltonianPtr in, HamiltonianPtr out, std::size_t ancilla_dim,
                                  std::uint64_t seed) {
  if (ancilla_dim == 0) throw std::invalid_argument("random_covariant: ancilla_dim must be positive");
  Rng rng(seed);
  auto [hin, hout] = common_context(in, out);
  if (*hin == *hout) {
    std::set<EnergyValue> diffs;
    for (std::size_t b = 0; b < hin->block_count(); ++b) {
      for (std::size_t c = 0; c < hin->block_count(); ++c) {
        diffs.insert(hin->block_energy(b) - hin->block_energy(c));
      }
    }
    std::vector<EnergyValue> pool(diffs.begin(), diffs.end());
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::vector<EnergyValue> levels;
    for (std::size_t a = 0; a < ancilla_dim; ++a) levels.push_back(pool[pick(rng)]);
    auto ha = share(LabeledHamiltonian(hin->symbols(), std::move(levels)));
    LabeledHamiltonian total = tensor(hin->flattened(), *ha);
    Eigen::MatrixXcd u = blockwise_haar(total, total, rng);
    DensityMatrix eta = random_diagonal_state(ha, rng);
    return from_dilation(u, hin, eta, hin, ha);
  }

  // Different output: S' (x) A' with A' levels E_s + E_a - E_s' so that every
  // input energy block fits into the matching output block.
  std::vector<EnergyValue> diffs;
  for (std::size_t b = 0; b < hin->block_count(); ++b) {
    for (std::size_t c = 0; c < hin->block_count(); ++c) {
      diffs.push_back(hin->block_energy(b) - hin->block_energy(c));
    }
  }
  std::uniform_int_distribution<std::size_t> pick(0, diffs.size() - 1);
  std::vector<EnergyValue> anc;
  for (std::size_t a = 0; a < ancilla_dim; ++a) anc.push_back(diffs[pick(rng)]);
  auto ha = share(LabeledHamiltonian(hin->symbols(), anc));
  std::vector<EnergyValue> env;
  for (const auto& es : hin->energies()) {
    for (const auto& ea : anc) {
      for (const auto& eo : hout->energies()) env.push_back(es + ea - eo);
    }
  }
  auto henv = share(LabeledHamiltonian(hin->symbols(), std::move(env)));
  LabeledHamiltonian total_in = tensor(hin->flattened(), *ha);
  LabeledHamiltonian total_out = tensor(hout->flattened(), *henv);
  Eigen::MatrixXcd v = blockwise_haar(total_in, total_out, rng);
  DensityMatrix eta = random_diagonal_state(ha, rng);
  return from_dilation(v, hin, eta, hout, henv);
}

CovariantChannel retune(const CovariantChannel& channel, const LadderSystem& in,
                        const LadderSystem& out, std::span<const EnergyValue> new_intervals) {
  if (!(channel.in() == *in.hamiltonian()) || !(channel.out() == *out.hamiltonian())) {
    throw std::invalid_argument("retune: channel does not act on the given ladder products");
  }
  std::vector<EnergyValue> old = in.intervals();
  if (old != out.intervals()) {
    throw std::invalid_argument("retune: input and output ladders use different intervals");
  }
  if (!rationally_independent(old)) {
    throw std::invalid_argument("retune: current intervals are not rationally independent");
  }
  if (new_intervals.size() != old.size()) {
    throw std::invalid_argument("retune: need one new interval per ladder");
  }
  LadderSystem new_in = in.with_intervals(new_intervals);
  LadderSystem new_out = out.with_intervals(new_intervals);
  std::vector<KrausOperator> ops;
  for (const auto& k : channel.kraus()) {
    auto coords = rational_coordinates(k.shift, old);
    if (!coords) throw std::invalid_argument("retune: shift outside the ladder lattice");
    EnergyValue shift;
    for (std::size_t j = 0; j < old.size(); ++j) shift += new_intervals[j] * (*coords)[j];
    ops.push_back({k.matrix, std::move(shift)});
  }
  return CovariantChannel(std::move(ops), new_in.hamiltonian(), new_out.hamiltonian());
}

CovariantChannel retune(const CovariantChannel& channel, const LadderSystem& system,
                        std::span<const EnergyValue> new_intervals) {
  return retune(channel, system, system, new_intervals);
}

CovariantChannel compose(const CovariantChannel& second, const CovariantChannel& first) {
  if (!(second.in() == first.out())) {
    throw std::invalid_argument("compose: output of first does not feed input of second");
  }
  std::vector<KrausOperator> ops;
  for (const auto& b : second.kraus()) {
    for (const auto& a : first.kraus()) {
      Eigen::MatrixXcd m = b.matrix * a.matrix;
      if (m.norm() <= kKrausDropNorm) continue;
      ops.push_back({std::move(m), a.shift + b.shift});
    }
  }
  return CovariantChannel(std::move(ops), first.in_ptr(), second.out_ptr());
}

}  // namespace coherence
