#include "coherence/hamiltonian.hpp"

#include <map>
#include <stdexcept>

namespace coherence {

LabeledHamiltonian::LabeledHamiltonian(SymbolContext symbols, std::vector<EnergyValue> energies,
                                       std::vector<std::string> labels)
    : symbols_(std::move(symbols)) {
  if (energies.empty()) throw std::invalid_argument("Hamiltonian needs at least one level");
  if (!labels.empty() && labels.size() != energies.size()) {
    throw std::invalid_argument("label count does not match dimension");
  }
  for (const auto& e : energies) {
    for (const auto& [s, _] : e.terms()) {
      if (!symbols_.contains(s)) {
        throw std::invalid_argument("energy uses undeclared symbol '" + s + "'");
      }
    }
  }
  factors_.push_back(std::move(energies));
  factor_labels_.push_back(std::move(labels));
  rebuild();
}

LabeledHamiltonian::LabeledHamiltonian(std::vector<EnergyValue> energies)
    : LabeledHamiltonian(context_of(energies), energies) {}

LabeledHamiltonian LabeledHamiltonian::trivial(std::size_t dim, SymbolContext symbols) {
  return LabeledHamiltonian(std::move(symbols), std::vector<EnergyValue>(dim));
}

void LabeledHamiltonian::rebuild() {
  energies_ = {EnergyValue{}};
  labels_ = {std::string{}};
  bool any_labels = false;
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    const auto& f = factors_[k];
    const auto& fl = factor_labels_[k];
    any_labels = any_labels || !fl.empty();
    std::vector<EnergyValue> next;
    std::vector<std::string> next_labels;
    next.reserve(energies_.size() * f.size());
    for (std::size_t i = 0; i < energies_.size(); ++i) {
      for (std::size_t j = 0; j < f.size(); ++j) {
        next.push_back(energies_[i] + f[j]);
        std::string lj = fl.empty() ? std::to_string(j) : fl[j];
        next_labels.push_back(labels_[i].empty() ? lj : labels_[i] + "," + lj);
      }
    }
    energies_ = std::move(next);
    labels_ = std::move(next_labels);
  }
  if (!any_labels) labels_.clear();

  std::map<EnergyValue, std::size_t> ids;
  block_.assign(energies_.size(), 0);
  block_energy_.clear();
  for (std::size_t i = 0; i < energies_.size(); ++i) {
    auto [it, inserted] = ids.try_emplace(energies_[i], block_energy_.size());
    if (inserted) block_energy_.push_back(energies_[i]);
    block_[i] = it->second;
  }
}

std::vector<std::size_t> LabeledHamiltonian::factor_dims() const {
  std::vector<std::size_t> dims;
  for (const auto& f : factors_) dims.push_back(f.size());
  return dims;
}

LabeledHamiltonian LabeledHamiltonian::factor(std::size_t k) const {
  if (k >= factors_.size()) throw std::out_of_range("factor index out of range");
  return LabeledHamiltonian(symbols_, factors_[k], factor_labels_[k]);
}

LabeledHamiltonian LabeledHamiltonian::restrict_to(std::span<const std::size_t> keep) const {
  LabeledHamiltonian out;
  out.symbols_ = symbols_;
  std::size_t prev = 0;
  bool first = true;
  for (std::size_t k : keep) {
    if (k >= factors_.size() || (!first && k <= prev)) {
      throw std::invalid_argument("kept factors must be distinct, ascending and in range");
    }
    out.factors_.push_back(factors_[k]);
    out.factor_labels_.push_back(factor_labels_[k]);
    prev = k;
    first = false;
  }
  if (out.factors_.empty()) throw std::invalid_argument("must keep at least one factor");
  out.rebuild();
  return out;
}

LabeledHamiltonian LabeledHamiltonian::flattened() const {
  return LabeledHamiltonian(symbols_, energies_, labels_);
}

LabeledHamiltonian LabeledHamiltonian::with_symbols(const SymbolContext& symbols) const {
  LabeledHamiltonian out = *this;
  out.symbols_ = symbols_.merged(symbols);
  return out;
}

Eigen::VectorXd LabeledHamiltonian::evaluate(const Valuation& valuation) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(dim()));
  // Evaluate per block; blocks share an exact energy.
  std::vector<double> per_block(block_count());
  for (std::size_t b = 0; b < block_count(); ++b) {
    per_block[b] = coherence::evaluate(block_energy_[b], valuation);
  }
  for (std::size_t i = 0; i < dim(); ++i) out(static_cast<Eigen::Index>(i)) = per_block[block_[i]];
  return out;
}

LabeledHamiltonian tensor(const LabeledHamiltonian& a, const LabeledHamiltonian& b) {
  if (!(a.symbols_ == b.symbols_)) {
    throw std::invalid_argument("tensor: Hamiltonians use different symbol contexts");
  }
  LabeledHamiltonian out;
  out.symbols_ = a.symbols_;
  out.factors_ = a.factors_;
  out.factors_.insert(out.factors_.end(), b.factors_.begin(), b.factors_.end());
  out.factor_labels_ = a.factor_labels_;
  out.factor_labels_.insert(out.factor_labels_.end(), b.factor_labels_.begin(),
                            b.factor_labels_.end());
  out.rebuild();
  return out;
}

bool operator==(const LabeledHamiltonian& a, const LabeledHamiltonian& b) {
  return a.energies_ == b.energies_ && a.factor_dims() == b.factor_dims();
}

LabeledHamiltonian tensor_power(const LabeledHamiltonian& h, std::size_t n) {
  if (n == 0) throw std::invalid_argument("tensor_power: n must be positive");
  LabeledHamiltonian out = h;
  for (std::size_t i = 1; i < n; ++i) out = tensor(out, h);
  return out;
}

}  // namespace coherence
