#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "coherence/rational.hpp"

namespace coherence {

/// Sorted set of basis-symbol names. Symbols are opaque and taken to be
/// rational-linearly independent; no symbol is ever converted to a float
/// inside lattice logic.
class SymbolContext {
 public:
  SymbolContext() = default;
  SymbolContext(std::vector<std::string> names);
  SymbolContext(std::initializer_list<std::string> names)
      : SymbolContext(std::vector<std::string>(names)) {}

  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }
  bool contains(const std::string& name) const;
  std::size_t index_of(const std::string& name) const;

  SymbolContext merged(const SymbolContext& other) const;

  friend bool operator==(const SymbolContext&, const SymbolContext&) = default;

 private:
  std::vector<std::string> names_;
};

/// Exact energy: a rational coefficient vector over basis symbols.
/// Canonical form keeps no zero coefficients, so equality is structural.
class EnergyValue {
 public:
  using Terms = std::map<std::string, Rational>;

  EnergyValue() = default;
  explicit EnergyValue(Terms terms);

  static EnergyValue unit(const std::string& symbol);
  static EnergyValue of(const std::string& symbol, const Rational& coeff);

  const Terms& terms() const { return terms_; }
  Rational coeff(const std::string& symbol) const;
  bool is_zero() const { return terms_.empty(); }
  std::set<std::string> symbols() const;

  EnergyValue operator-() const;
  EnergyValue& operator+=(const EnergyValue& rhs);
  EnergyValue& operator-=(const EnergyValue& rhs);
  EnergyValue& operator*=(const Rational& s);

  friend EnergyValue operator+(EnergyValue a, const EnergyValue& b) { return a += b; }
  friend EnergyValue operator-(EnergyValue a, const EnergyValue& b) { return a -= b; }
  friend EnergyValue operator*(EnergyValue a, const Rational& s) { return a *= s; }
  friend EnergyValue operator*(const Rational& s, EnergyValue a) { return a *= s; }

  friend bool operator==(const EnergyValue& a, const EnergyValue& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const EnergyValue& a, const EnergyValue& b) { return !(a == b); }
  friend bool operator<(const EnergyValue& a, const EnergyValue& b) {
    return a.terms_ < b.terms_;
  }

 private:
  void canonicalize();
  Terms terms_;
};

/// Numeric value assigned to each symbol, used only for time evolution,
/// covariance commutators and measures.
using Valuation = std::map<std::string, double>;

/// Throws std::invalid_argument when a symbol has no value.
double evaluate(const EnergyValue& e, const Valuation& valuation);

/// Interprets symbol names of the form "<decimal>", "sqrt<decimal>" or "pi".
Valuation default_valuation(const SymbolContext& symbols);

/// Human readable exact form, e.g. "1 + 3/2*sqrt2". Zero prints as "0".
std::string to_string(const EnergyValue& e);

/// Symbols appearing in any of the values.
SymbolContext context_of(std::span<const EnergyValue> values);

}  // namespace coherence
