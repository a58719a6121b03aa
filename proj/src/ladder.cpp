#include "coherence/ladder.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

#include "coherence/lattice.hpp"

namespace coherence {

LadderSystem::LadderSystem(std::vector<LadderSpec> ladders, SymbolContext symbols)
    : ladders_(std::move(ladders)) {
  if (ladders_.empty()) throw std::invalid_argument("ladder system needs at least one ladder");
  std::vector<EnergyValue> iv = intervals();
  symbols_ = symbols.merged(context_of(iv));
  std::vector<LabeledHamiltonian> parts;
  for (const auto& l : ladders_) {
    if (l.n_min > l.n_max || l.degeneracy == 0) {
      throw std::invalid_argument("ladder needs n_min <= n_max and positive degeneracy");
    }
    std::vector<EnergyValue> levels;
    for (long n = l.n_min; n <= l.n_max; ++n) {
      for (std::size_t a = 0; a < l.degeneracy; ++a) levels.push_back(l.interval * Rational(n));
    }
    parts.emplace_back(symbols_, std::move(levels));
  }
  LabeledHamiltonian h = parts.front();
  for (std::size_t k = 1; k < parts.size(); ++k) h = tensor(h, parts[k]);
  hamiltonian_ = share(std::move(h));
}

std::size_t LadderSystem::dim() const { return hamiltonian_->dim(); }

std::vector<EnergyValue> LadderSystem::intervals() const {
  std::vector<EnergyValue> out;
  for (const auto& l : ladders_) out.push_back(l.interval);
  return out;
}

LadderSystem LadderSystem::with_intervals(std::span<const EnergyValue> intervals) const {
  if (intervals.size() != ladders_.size()) {
    throw std::invalid_argument("with_intervals: need one interval per ladder");
  }
  std::vector<LadderSpec> next = ladders_;
  for (std::size_t k = 0; k < next.size(); ++k) next[k].interval = intervals[k];
  return LadderSystem(std::move(next), symbols_);
}

std::size_t LadderSystem::index_of(std::span<const long> levels,
                                   std::span<const std::size_t> labels) const {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < ladders_.size(); ++k) {
    const auto& l = ladders_[k];
    if (levels[k] < l.n_min || levels[k] > l.n_max || labels[k] >= l.degeneracy) {
      throw std::out_of_range("ladder coordinate out of range");
    }
    std::size_t local = static_cast<std::size_t>(levels[k] - l.n_min) * l.degeneracy + labels[k];
    idx = idx * l.dim() + local;
  }
  return idx;
}

std::vector<long> LadderSystem::levels_of(std::size_t index) const {
  std::vector<long> out(ladders_.size());
  for (std::size_t k = ladders_.size(); k-- > 0;) {
    const auto& l = ladders_[k];
    std::size_t local = index % l.dim();
    index /= l.dim();
    out[k] = l.n_min + static_cast<long>(local / l.degeneracy);
  }
  return out;
}

LadderEmbedding embed_into_ladders(const LabeledHamiltonian& h, std::span<const EnergyValue> basis,
                                   LevelRange range) {
  if (range.min > range.max) throw std::invalid_argument("empty level range");
  if (!rationally_independent(basis)) {
    throw std::invalid_argument("embedding basis is not rationally independent");
  }
  std::vector<EnergyValue> intervals(basis.begin(), basis.end());
  if (intervals.empty()) intervals.emplace_back();  // all energies zero: one L(0) ladder

  std::vector<std::vector<long>> coords(h.dim());
  for (std::size_t i = 0; i < h.dim(); ++i) {
    const EnergyValue& e = h.energy(i);
    if (!z_span_member(e, basis)) {
      throw std::invalid_argument("energy " + to_string(e) +
                                  " is not an integer combination of the basis");
    }
    std::vector<long> n(intervals.size(), 0);
    if (!basis.empty()) {
      auto a = rational_coordinates(e, basis);
      for (std::size_t j = 0; j < basis.size(); ++j) {
        if (!is_integer((*a)[j])) {
          throw std::invalid_argument("non-integer lattice coordinate for " + to_string(e));
        }
        n[j] = boost::multiprecision::numerator((*a)[j]).convert_to<long>();
      }
    }
    for (long v : n) {
      if (v < range.min || v > range.max) {
        throw std::out_of_range("lattice coordinate " + std::to_string(v) + " of energy " +
                                to_string(e) + " overflows the ladder truncation");
      }
    }
    coords[i] = std::move(n);
  }

  // Degeneracy label: order of appearance among levels with the same energy.
  std::map<EnergyValue, std::size_t> seen;
  std::vector<std::size_t> alpha(h.dim());
  std::size_t max_deg = 1;
  for (std::size_t i = 0; i < h.dim(); ++i) {
    alpha[i] = seen[h.energy(i)]++;
    max_deg = std::max(max_deg, alpha[i] + 1);
  }

  std::vector<LadderSpec> specs;
  for (std::size_t j = 0; j < intervals.size(); ++j) {
    specs.push_back({intervals[j], range.min, range.max, j == 0 ? max_deg : std::size_t{1}});
  }
  LadderSystem system(std::move(specs), h.symbols());

  std::vector<std::size_t> index_map(h.dim());
  for (std::size_t i = 0; i < h.dim(); ++i) {
    std::vector<std::size_t> labels(intervals.size(), 0);
    labels[0] = alpha[i];
    index_map[i] = system.index_of(coords[i], labels);
  }
  return {std::move(system), std::move(index_map), std::move(coords), std::move(alpha)};
}

LadderSystem degenerate_ladder(const LadderSystem& system, std::span<const std::size_t> which) {
  std::vector<EnergyValue> iv = system.intervals();
  for (std::size_t k : which) {
    if (k >= iv.size()) throw std::invalid_argument("degenerate_ladder: factor out of range");
    iv[k] = EnergyValue{};
  }
  return system.with_intervals(iv);
}

DensityMatrix embed_state(const DensityMatrix& rho, const LadderEmbedding& embedding) {
  if (rho.dim() != embedding.index_map.size()) {
    throw std::invalid_argument("embed_state: state does not match embedding");
  }
  auto d = static_cast<Eigen::Index>(embedding.system.dim());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    for (std::size_t j = 0; j < rho.dim(); ++j) {
      out(static_cast<Eigen::Index>(embedding.index_map[i]),
          static_cast<Eigen::Index>(embedding.index_map[j])) = rho(i, j);
    }
  }
  return DensityMatrix(std::move(out), embedding.system.hamiltonian());
}

}  // namespace coherence
