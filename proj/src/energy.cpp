#include "coherence/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace coherence {

SymbolContext::SymbolContext(std::vector<std::string> names) : names_(std::move(names)) {
  std::sort(names_.begin(), names_.end());
  names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
}

bool SymbolContext::contains(const std::string& name) const {
  return std::binary_search(names_.begin(), names_.end(), name);
}

std::size_t SymbolContext::index_of(const std::string& name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) {
    throw std::invalid_argument("symbol '" + name + "' is not declared");
  }
  return static_cast<std::size_t>(it - names_.begin());
}

SymbolContext SymbolContext::merged(const SymbolContext& other) const {
  std::vector<std::string> all = names_;
  all.insert(all.end(), other.names_.begin(), other.names_.end());
  return SymbolContext(std::move(all));
}

EnergyValue::EnergyValue(Terms terms) : terms_(std::move(terms)) { canonicalize(); }

EnergyValue EnergyValue::unit(const std::string& symbol) { return of(symbol, Rational(1)); }

EnergyValue EnergyValue::of(const std::string& symbol, const Rational& coeff) {
  return EnergyValue(Terms{{symbol, coeff}});
}

Rational EnergyValue::coeff(const std::string& symbol) const {
  auto it = terms_.find(symbol);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::set<std::string> EnergyValue::symbols() const {
  std::set<std::string> out;
  for (const auto& [s, _] : terms_) out.insert(s);
  return out;
}

EnergyValue EnergyValue::operator-() const {
  EnergyValue out = *this;
  for (auto& [_, c] : out.terms_) c = -c;
  return out;
}

EnergyValue& EnergyValue::operator+=(const EnergyValue& rhs) {
  for (const auto& [s, c] : rhs.terms_) terms_[s] += c;
  canonicalize();
  return *this;
}

EnergyValue& EnergyValue::operator-=(const EnergyValue& rhs) {
  for (const auto& [s, c] : rhs.terms_) terms_[s] -= c;
  canonicalize();
  return *this;
}

EnergyValue& EnergyValue::operator*=(const Rational& s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [_, c] : terms_) c *= s;
  return *this;
}

void EnergyValue::canonicalize() {
  std::erase_if(terms_, [](const auto& kv) { return kv.second == 0; });
}

double evaluate(const EnergyValue& e, const Valuation& valuation) {
  double acc = 0.0;
  for (const auto& [s, c] : e.terms()) {
    auto it = valuation.find(s);
    if (it == valuation.end()) {
      throw std::invalid_argument("valuation has no value for symbol '" + s + "'");
    }
    acc += c.convert_to<double>() * it->second;
  }
  return acc;
}

namespace {

bool parse_decimal(const std::string& text, double& out) {
  if (text.empty()) return false;
  std::size_t used = 0;
  try {
    out = std::stod(text, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == text.size();
}

}  // namespace

Valuation default_valuation(const SymbolContext& symbols) {
  Valuation v;
  for (const auto& name : symbols.names()) {
    double x = 0.0;
    if (parse_decimal(name, x)) {
      v[name] = x;
    } else if (name.rfind("sqrt", 0) == 0 && parse_decimal(name.substr(4), x) && x >= 0) {
      v[name] = std::sqrt(x);
    } else if (name == "pi") {
      v[name] = std::numbers::pi;
    } else {
      throw std::invalid_argument("no default value for symbol '" + name +
                                  "'; supply a valuation");
    }
  }
  return v;
}

std::string to_string(const EnergyValue& e) {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [s, c] : e.terms()) {
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (s == "1") {
      out += to_string(mag);  // the rational unit prints bare
    } else {
      if (mag != 1) out += to_string(mag) + "*";
      out += s;
    }
    first = false;
  }
  return out;
}

SymbolContext context_of(std::span<const EnergyValue> values) {
  std::vector<std::string> names;
  for (const auto& v : values) {
    for (const auto& [s, _] : v.terms()) names.push_back(s);
  }
  return SymbolContext(std::move(names));
}

}  // namespace coherence
