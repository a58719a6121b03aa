#include "coherence/io.hpp"

#include <fstream>
#include <optional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace coherence::io {

namespace {

Json integer_to_json(const Integer& n) {
  if (n >= std::numeric_limits<std::int64_t>::min() && n <= std::numeric_limits<std::int64_t>::max()) {
    return n.convert_to<std::int64_t>();
  }
  return n.str();
}

Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_string()) return Integer(j.get<std::string>());
  throw std::invalid_argument("expected an integer, got " + j.dump());
}

Json level_row(const EnergyValue& e, const SymbolContext& symbols) {
  Json row = Json::array();
  for (const auto& s : symbols.names()) row.push_back(to_json(e.coeff(s)));
  return row;
}

std::vector<EnergyValue> levels_from_json(const Json& rows, const std::vector<std::string>& names) {
  std::vector<EnergyValue> out;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != names.size()) {
      throw std::invalid_argument("energy row must list one coefficient per symbol");
    }
    EnergyValue::Terms terms;
    for (std::size_t s = 0; s < names.size(); ++s) terms[names[s]] = rational_from_json(row[s]);
    out.emplace_back(std::move(terms));
  }
  return out;
}

}  // namespace

Json to_json(const Rational& q) {
  return Json::array({integer_to_json(boost::multiprecision::numerator(q)),
                      integer_to_json(boost::multiprecision::denominator(q))});
}

Rational rational_from_json(const Json& j) {
  if (j.is_array() && j.size() == 2) {
    Integer den = integer_from_json(j[1]);
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(integer_from_json(j[0]), den);
  }
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(Integer(s));
    Integer den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(Integer(s.substr(0, slash)), den);
  }
  throw std::invalid_argument("expected a rational, got " + j.dump());
}

Json to_json(const EnergyValue& e) {
  Json j = Json::object();
  for (const auto& [s, c] : e.terms()) j[s] = to_json(c);
  return j;
}

EnergyValue energy_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("energy must be an object of symbol coefficients");
  EnergyValue::Terms terms;
  for (const auto& [s, c] : j.items()) terms[s] = rational_from_json(c);
  return EnergyValue(std::move(terms));
}

Json to_json(const LabeledHamiltonian& h) {
  Json j;
  j["dim"] = h.dim();
  j["symbols"] = h.symbols().names();
  Json rows = Json::array();
  for (const auto& e : h.energies()) rows.push_back(level_row(e, h.symbols()));
  j["energies"] = std::move(rows);
  if (h.factor_count() > 1) {
    Json factors = Json::array();
    for (std::size_t k = 0; k < h.factor_count(); ++k) {
      Json f = Json::array();
      for (const auto& e : h.factor(k).energies()) f.push_back(level_row(e, h.symbols()));
      factors.push_back(std::move(f));
    }
    j["factors"] = std::move(factors);
  }
  if (!h.labels().empty() && h.factor_count() == 1) j["labels"] = h.labels();
  return j;
}

LabeledHamiltonian hamiltonian_from_json(const Json& j) {
  SymbolContext ctx(j.at("symbols").get<std::vector<std::string>>());
  // Coefficient rows follow the order given in the file.
  auto file_names = j.at("symbols").get<std::vector<std::string>>();
  auto energies = levels_from_json(j.at("energies"), file_names);
  if (j.contains("dim") && j["dim"].get<std::size_t>() != energies.size()) {
    throw std::invalid_argument("dim does not match the number of energy rows");
  }
  if (j.contains("factors")) {
    std::optional<LabeledHamiltonian> h;
    for (const auto& f : j["factors"]) {
      LabeledHamiltonian part(ctx, levels_from_json(f, file_names));
      h = h ? tensor(*h, part) : part;
    }
    if (!h || h->energies() != energies) {
      throw std::invalid_argument("factors do not reproduce the listed energies");
    }
    return *h;
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j["labels"].get<std::vector<std::string>>();
  return LabeledHamiltonian(ctx, std::move(energies), std::move(labels));
}

Json matrix_to_json(const Eigen::MatrixXcd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    }
  }
  return out;
}

Eigen::MatrixXcd matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols) {
  std::vector<const Json*> entries;
  for (const auto& e : j) {
    bool nested_row = e.is_array() && !e.empty() && e[0].is_array();
    if (nested_row) {
      for (const auto& x : e) entries.push_back(&x);
    } else {
      entries.push_back(&e);
    }
  }
  if (static_cast<Eigen::Index>(entries.size()) != rows * cols) {
    throw std::invalid_argument("matrix has " + std::to_string(entries.size()) + " entries, expected " +
                                std::to_string(rows * cols));
  }
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows * cols; ++i) {
    const Json& e = *entries[static_cast<std::size_t>(i)];
    if (e.is_number()) {
      m(i / cols, i % cols) = Complex(e.get<double>(), 0.0);
    } else if (e.is_array() && e.size() == 2) {
      m(i / cols, i % cols) = Complex(e[0].get<double>(), e[1].get<double>());
    } else {
      throw std::invalid_argument("matrix entry must be [re, im]");
    }
  }
  return m;
}

Json to_json(const DensityMatrix& rho) {
  Json j = to_json(rho.hamiltonian());
  j["matrix"] = matrix_to_json(rho.matrix());
  return j;
}

DensityMatrix state_from_json(const Json& j) {
  auto h = share(hamiltonian_from_json(j));
  auto d = static_cast<Eigen::Index>(h->dim());
  return DensityMatrix(matrix_from_json(j.at("matrix"), d, d), h);
}

Json to_json(const CovariantChannel& channel) {
  Json j;
  Json kraus = Json::array();
  for (const auto& k : channel.kraus()) {
    kraus.push_back({{"shift", to_json(k.shift)}, {"matrix", matrix_to_json(k.matrix)}});
  }
  j["kraus"] = std::move(kraus);
  j["in"] = to_json(channel.in());
  j["out"] = to_json(channel.out());
  return j;
}

CovariantChannel channel_from_json(const Json& j) {
  auto in = share(hamiltonian_from_json(j.at("in")));
  auto out = share(hamiltonian_from_json(j.at("out")));
  std::vector<KrausOperator> ops;
  for (const auto& k : j.at("kraus")) {
    ops.push_back({matrix_from_json(k.at("matrix"), static_cast<Eigen::Index>(out->dim()),
                                    static_cast<Eigen::Index>(in->dim())),
                   energy_from_json(k.at("shift"))});
  }
  return CovariantChannel(std::move(ops), std::move(in), std::move(out));
}

Valuation valuation_from_json(const Json& j) {
  Valuation v;
  for (const auto& [s, x] : j.items()) v[s] = x.get<double>();
  return v;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return Json::parse(in);
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace coherence::io
