#include "coherence/lattice.hpp"

#include <algorithm>
#include <stdexcept>

namespace coherence {

namespace {

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Integer abs_int(const Integer& a) { return a < 0 ? Integer(-a) : a; }

void axpy(std::vector<Integer>& y, const Integer& a, const std::vector<Integer>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= a * x[i];
}

Integer lcm_int(const Integer& a, const Integer& b) {
  return a / boost::multiprecision::gcd(a, b) * b;
}

// Dense integer rows over a shared symbol order, all scaled by one common
// denominator so the lattice structure is preserved.
struct ScaledLattice {
  SymbolContext symbols;
  Integer scale = 1;
  IntegerMatrix rows;
};

ScaledLattice scale_to_integers(std::span<const EnergyValue> values) {
  ScaledLattice out;
  out.symbols = context_of(values);
  for (const auto& v : values) {
    for (const auto& [_, c] : v.terms()) {
      out.scale = lcm_int(out.scale, boost::multiprecision::denominator(c));
    }
  }
  for (const auto& v : values) {
    std::vector<Integer> row(out.symbols.size(), 0);
    for (const auto& [s, c] : v.terms()) {
      Rational scaled = c * Rational(out.scale);
      row[out.symbols.index_of(s)] = boost::multiprecision::numerator(scaled);
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

RationalMatrix dense_rows(std::span<const EnergyValue> values, const SymbolContext& symbols) {
  RationalMatrix rows;
  for (const auto& v : values) {
    std::vector<Rational> row(symbols.size(), Rational(0));
    for (const auto& [s, c] : v.terms()) row[symbols.index_of(s)] = c;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

IntegerMatrix hermite_normal_form(IntegerMatrix rows) {
  if (rows.empty()) return rows;
  const std::size_t cols = rows.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    // Euclid on column c over rows r.., until only row r is nonzero there.
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i) {
        if (rows[i][c] != 0 && (best == rows.size() || abs_int(rows[i][c]) < abs_int(rows[best][c]))) {
          best = i;
        }
      }
      if (best == rows.size()) break;
      std::swap(rows[r], rows[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        axpy(rows[i], rows[i][c] / rows[r][c], rows[r]);
        if (rows[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[r][c] == 0) continue;
    if (rows[r][c] < 0) {
      for (auto& x : rows[r]) x = -x;
    }
    for (std::size_t i = 0; i < r; ++i) {
      axpy(rows[i], floor_div(rows[i][c], rows[r][c]), rows[r]);
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

std::size_t rational_rank(RationalMatrix rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t pivot = r;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[r], rows[pivot]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (rows[i][c] == 0) continue;
      Rational f = rows[i][c] / rows[r][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    ++r;
  }
  return r;
}

bool z_span_member(const EnergyValue& x, std::span<const EnergyValue> generators) {
  if (x.is_zero()) return true;
  std::vector<EnergyValue> all(generators.begin(), generators.end());
  all.push_back(x);
  ScaledLattice lat = scale_to_integers(all);
  std::vector<Integer> target = std::move(lat.rows.back());
  lat.rows.pop_back();
  IntegerMatrix basis = hermite_normal_form(std::move(lat.rows));
  for (const auto& row : basis) {
    auto pivot = std::find_if(row.begin(), row.end(), [](const Integer& v) { return v != 0; });
    std::size_t p = static_cast<std::size_t>(pivot - row.begin());
    if (target[p] % row[p] != 0) return false;
    axpy(target, target[p] / row[p], row);
  }
  return std::all_of(target.begin(), target.end(), [](const Integer& v) { return v == 0; });
}

bool q_span_member(const EnergyValue& x, std::span<const EnergyValue> generators) {
  if (x.is_zero()) return true;
  std::vector<EnergyValue> all(generators.begin(), generators.end());
  all.push_back(x);
  SymbolContext symbols = context_of(all);
  RationalMatrix rows = dense_rows(all, symbols);
  std::size_t with_x = rational_rank(rows);
  rows.pop_back();
  return rational_rank(std::move(rows)) == with_x;
}

bool rationally_independent(std::span<const EnergyValue> values) {
  SymbolContext symbols = context_of(values);
  return rational_rank(dense_rows(values, symbols)) == values.size();
}

std::optional<std::vector<Rational>> rational_coordinates(const EnergyValue& x,
                                                          std::span<const EnergyValue> basis) {
  // Solve B^T a = x: one equation per symbol, one unknown per basis element.
  std::vector<EnergyValue> all(basis.begin(), basis.end());
  all.push_back(x);
  SymbolContext symbols = context_of(all);
  RationalMatrix cols = dense_rows(all, symbols);
  const std::size_t n = basis.size();
  RationalMatrix aug(symbols.size(), std::vector<Rational>(n + 1, Rational(0)));
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    for (std::size_t j = 0; j <= n; ++j) aug[s][j] = cols[j][s];
  }
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < aug.size(); ++c) {
    std::size_t p = r;
    while (p < aug.size() && aug[p][c] == 0) ++p;
    if (p == aug.size()) continue;
    std::swap(aug[r], aug[p]);
    Rational inv = Rational(1) / aug[r][c];
    for (auto& v : aug[r]) v *= inv;
    for (std::size_t i = 0; i < aug.size(); ++i) {
      if (i == r || aug[i][c] == 0) continue;
      Rational f = aug[i][c];
      for (std::size_t j = 0; j <= n; ++j) aug[i][j] -= f * aug[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < aug.size(); ++i) {
    if (aug[i][n] != 0) return std::nullopt;
  }
  std::vector<Rational> a(n, Rational(0));
  for (std::size_t i = 0; i < r; ++i) a[pivot_col[i]] = aug[i][n];
  return a;
}

std::vector<EnergyValue> embedding_basis(std::span<const EnergyValue> energies) {
  if (energies.empty()) throw std::invalid_argument("embedding_basis: empty input");
  ScaledLattice lat = scale_to_integers(energies);
  IntegerMatrix hnf = hermite_normal_form(std::move(lat.rows));
  std::vector<EnergyValue> out;
  for (const auto& row : hnf) {
    EnergyValue::Terms terms;
    for (std::size_t s = 0; s < row.size(); ++s) {
      if (row[s] != 0) terms[lat.symbols.names()[s]] = Rational(row[s], lat.scale);
    }
    out.emplace_back(std::move(terms));
  }
  return out;
}

}  // namespace coherence
