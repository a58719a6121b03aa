#include "cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "coherence/channel.hpp"
#include "coherence/io.hpp"
#include "coherence/ladder.hpp"
#include "coherence/lattice.hpp"
#include "coherence/measures.hpp"
#include "coherence/modes.hpp"
#include "coherence/parallel.hpp"
#include "coherence/protocols.hpp"
#include "coherence/random.hpp"

namespace coherence::cli {

namespace {

// Input that parses as a command line but not as data.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Valuation load_valuation(const std::string& path, const SymbolContext& symbols) {
  Valuation v;
  if (!path.empty()) v = io::valuation_from_json(io::read_json(path));
  for (const auto& s : symbols.names()) {
    if (v.count(s)) continue;
    try {
      v[s] = default_valuation(SymbolContext{s}).at(s);
    } catch (const std::invalid_argument&) {
      throw UsageError("no numeric value for symbol '" + s + "', pass --valuation");
    }
  }
  return v;
}

ModeSet load_modes(const std::string& path, double threshold) {
  io::Json j = io::read_json(path);
  if (!j.contains("modes")) return modes_of(io::state_from_json(j), threshold);
  std::vector<EnergyValue> gens;
  for (const auto& e : j["modes"]) {
    EnergyValue g = io::energy_from_json(e);
    if (g.is_zero()) continue;
    gens.push_back(g);
    gens.push_back(-g);
  }
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  return {std::move(gens), threshold};
}

void write_or_print(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    io::write_atomic(path, text);
  }
}

std::string label_string(std::size_t set, std::size_t n_roles, std::size_t k) {
  std::string s = "(";
  auto label = decode_label(set, n_roles, k);
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(label[i] + 1);
  }
  return s + ")";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Covariant coherence toolkit", "coherence-lab"};
  app.require_subcommand(1);
  int status = kExitPass;

  std::string state_path, channel_path, valuation_path, out_path, csv_path;
  double threshold = kDefaultModeThreshold;

  // modes
  auto* modes = app.add_subcommand("modes", "Print the modes of a state as exact energy differences");
  modes->add_option("state", state_path, "state JSON")->required();
  modes->add_option("--threshold", threshold, "entry magnitude counted as coherent")
      ->check(CLI::PositiveNumber);
  modes->callback([&] {
    ModeSet m = modes_of(io::state_from_json(io::read_json(state_path)), threshold);
    for (const auto& e : m.intervals) out << to_string(e) << "\n";
  });

  // check-subset
  std::string variant = "z", path_a, path_b;
  auto* subset = app.add_subcommand("check-subset", "Is every mode of A inside the span of the modes of B");
  subset->add_option("--variant", variant, "z (integer span) or q (rational span)")
      ->check(CLI::IsMember({"z", "q"}));
  subset->add_option("a", path_a, "state or {\"modes\": [...]} JSON")->required();
  subset->add_option("b", path_b, "state or {\"modes\": [...]} JSON")->required();
  subset->add_option("--threshold", threshold, "entry magnitude counted as coherent")
      ->check(CLI::PositiveNumber);
  subset->callback([&] {
    ModeSet a = load_modes(path_a, threshold), b = load_modes(path_b, threshold);
    bool ok = variant == "z" ? check_subset_z(a, b) : check_subset_q(a, b);
    out << (ok ? "contained" : "not contained") << " (" << variant << "-span)\n";
    if (!ok) status = kExitViolation;
  });

  // covariance: raw Kraus matrices, shift labels are not trusted here
  double cov_tol = tol::kCovariance;
  auto* cov = app.add_subcommand("covariance", "Choi commutator norm of a channel");
  cov->add_option("channel", channel_path, "channel JSON")->required();
  cov->add_option("--valuation", valuation_path, "symbol values JSON");
  cov->add_option("--tol", cov_tol, "pass threshold")->check(CLI::PositiveNumber);
  cov->callback([&] {
    io::Json j = io::read_json(channel_path);
    LabeledHamiltonian in = io::hamiltonian_from_json(j.at("in"));
    LabeledHamiltonian out_h = io::hamiltonian_from_json(j.at("out"));
    std::vector<Eigen::MatrixXcd> kraus;
    for (const auto& k : j.at("kraus")) {
      kraus.push_back(io::matrix_from_json(k.at("matrix"), static_cast<Eigen::Index>(out_h.dim()),
                                           static_cast<Eigen::Index>(in.dim())));
    }
    Valuation v = load_valuation(valuation_path, in.symbols().merged(out_h.symbols()));
    double norm = verify_covariance(kraus, in, out_h, v);
    double complete = completeness_error(kraus);
    out << "commutator_norm " << fmt(norm) << "\n";
    out << "completeness_error " << fmt(complete) << "\n";
    if (!(norm <= cov_tol) || !(complete <= tol::kCompleteness)) status = kExitViolation;
  });

  // catalyst build
  std::size_t n = 0;
  std::size_t cap = kDefaultDimensionCap;
  auto* catalyst = app.add_subcommand("catalyst", "Correlated catalyst constructions");
  catalyst->require_subcommand(1);
  auto* build = catalyst->add_subcommand("build", "Build c and the two-step channel from Lambda_n");
  build->add_option("--n", n, "number of copies Lambda_n acts on")->required()->check(CLI::PositiveNumber);
  build->add_option("--state", state_path, "system state JSON")->required();
  build->add_option("--channel", channel_path, "Lambda_n JSON")->required();
  build->add_option("--out", out_path, "bundle JSON")->required();
  build->add_option("--cap", cap, "composite dimension cap");
  build->callback([&] {
    DensityMatrix rho = io::state_from_json(io::read_json(state_path));
    CovariantChannel lambda = io::channel_from_json(io::read_json(channel_path));
    std::size_t expected = 1;
    for (std::size_t i = 0; i < n; ++i) expected *= rho.dim();
    if (lambda.in().dim() != expected) {
      throw UsageError("channel does not act on " + std::to_string(n) + " copies of the state");
    }
    CorrelatedCatalyst built = build_correlated_catalyst(rho, lambda, cap);
    CatalystCheck check = check_correlated_catalyst(rho, built);

    io::Json bundle;
    bundle["catalyst"] = io::to_json(built.catalyst.state);
    bundle["register_dim"] = built.catalyst.register_dim;
    io::Json roles = io::Json::array();
    for (auto r : built.catalyst.roles) roles.push_back(r == SlotRole::kCopy ? "copy" : "register");
    bundle["roles"] = roles;
    bundle["channel"] = io::to_json(built.channel);
    bundle["target"] = io::to_json(built.target);
    bundle["tau"] = io::to_json(built.tau);
    bundle["check"] = {{"catalyst_error", check.catalyst_error},
                       {"system_error", check.system_error},
                       {"system_coherence", check.system_coherence}};
    io::write_json(out_path, bundle);
    out << "catalyst_dim " << built.catalyst.state.dim() << "\n";
    out << "catalyst_error " << fmt(check.catalyst_error) << "\n";
    out << "system_error " << fmt(check.system_error) << "\n";
    if (check.catalyst_error > 1e-12 || check.system_error > 1e-12) status = kExitViolation;
  });

  // counterexample
  std::size_t m = 1;
  double eps = 0.2, delta = 0.01;
  bool sweep = false;
  auto* counter = app.add_subcommand("counterexample", "Good-local, bad-global state family");
  counter->add_option("--m", m, "copies (largest m with --sweep)")->check(CLI::PositiveNumber);
  counter->add_option("--eps", eps, "local error")->check(CLI::Range(0.0, 1.0));
  counter->add_option("--delta", delta, "mixing weight")->check(CLI::Range(0.0, 1.0));
  counter->add_option("--csv", csv_path, "write CSV here instead of stdout");
  counter->add_flag("--sweep", sweep, "emit every m from 1 to --m");
  counter->callback([&] {
    if (m > 12) throw UsageError("--m above 12 exceeds the dimension cap");
    constexpr double kFormulaTol = 1e-9;
    std::ostringstream csv;
    csv << "# seed=none formula_tol=1e-9" << " norm=trace_norm\n";
    csv << "m,eps,delta,marginal_dist,correlation,global_dist,f_formula\n";
    for (std::size_t mm = sweep ? 1 : m; mm <= m; ++mm) {
      CounterexampleRow row = analyze_counterexample(mm, eps, delta);
      csv << row.m << "," << fmt(row.eps) << "," << fmt(row.delta) << "," << fmt(row.marginal_dist)
          << "," << fmt(row.correlation) << "," << fmt(row.global_dist) << "," << fmt(row.f_formula)
          << "\n";
      if (std::abs(row.global_dist - row.f_formula) > kFormulaTol) status = kExitViolation;
    }
    write_or_print(csv_path, csv.str(), out);
  });

  // schedule
  std::size_t n_roles = 2, k = 0;
  auto* schedule = app.add_subcommand("schedule", "Recombination schedule, one record per conversion");
  schedule->add_option("--N", n_roles, "catalyst roles")->required()->check(CLI::Range(2, 64));
  schedule->add_option("--k", k, "label length")->required()->check(CLI::Range(0, 12));
  schedule->add_option("--csv", csv_path, "write CSV here instead of stdout");
  schedule->callback([&] {
    auto rounds = recombination_schedule(n_roles, k);
    ScheduleAudit audit = audit_schedule(rounds, n_roles, k);
    std::ostringstream csv;
    csv << "# seed=none N=" << n_roles << " k=" << k << " conversions=" << audit.conversions
        << " partitions=" << (audit.partitions ? "yes" : "no")
        << " fresh=" << (audit.fresh ? "yes" : "no") << "\n";
    csv << "round,group,roles\n";
    for (const auto& round : rounds) {
      for (std::size_t g = 0; g < round.groups.size(); ++g) {
        csv << round.index << "," << g << ",";
        for (std::size_t j = 0; j < round.groups[g].size(); ++j) {
          if (j) csv << ' ';
          csv << "C" << j + 1 << label_string(round.groups[g][j], n_roles, k);
        }
        csv << "\n";
      }
    }
    write_or_print(csv_path, csv.str(), out);
    if (!audit.partitions || !audit.fresh) status = kExitViolation;
  });

  // measures
  std::uint64_t seed = 0;
  std::size_t trials = 20;
  std::size_t ancilla = 2;
  auto* measures = app.add_subcommand("measures", "QFI, WY skew and relative entropy of asymmetry");
  measures->add_option("state", state_path, "state JSON")->required();
  measures->add_option("--valuation", valuation_path, "symbol values JSON");
  measures->add_flag("--sweep", sweep, "apply random covariant channels and check monotonicity");
  auto* seed_opt = measures->add_option("--seed", seed, "RNG seed (required with --sweep)");
  measures->add_option("--trials", trials, "channels in the sweep")->check(CLI::PositiveNumber);
  measures->add_option("--ancilla", ancilla, "ancilla dimension")->check(CLI::Range(1, 8));
  measures->add_option("--csv", csv_path, "sweep CSV path (default stdout)");
  measures->callback([&] {
    DensityMatrix rho = io::state_from_json(io::read_json(state_path));
    Valuation v = load_valuation(valuation_path, rho.hamiltonian().symbols());
    const Measure all[] = {Measure::kQfi, Measure::kWySkew, Measure::kRelEntAsym};
    if (!sweep) {
      for (Measure mm : all) out << to_string(mm) << " " << fmt(evaluate_measure(mm, rho, v)) << "\n";
      out << "# entropy in nats\n";
      return;
    }
    if (seed_opt->count() == 0) throw UsageError("--sweep needs --seed");
    double before[3];
    for (int i = 0; i < 3; ++i) before[i] = evaluate_measure(all[i], rho, v);
    std::vector<std::array<double, 3>> after(trials);
    parallel_for(trials, [&](std::size_t t) {
      auto ch = random_covariant(rho.hamiltonian_ptr(), rho.hamiltonian_ptr(), ancilla,
                                 instance_seed(seed, t));
      DensityMatrix o = apply(ch, rho);
      for (int i = 0; i < 3; ++i) after[t][static_cast<std::size_t>(i)] = evaluate_measure(all[i], o, v);
    });
    std::ostringstream csv;
    csv << "# seed=" << seed << " monotonicity_tol=1e-9" << " entropy=nats\n";
    csv << "trial,qfi_in,qfi_out,wy_skew_in,wy_skew_out,rel_ent_asym_in,rel_ent_asym_out\n";
    for (std::size_t t = 0; t < trials; ++t) {
      csv << t;
      for (std::size_t i = 0; i < 3; ++i) {
        csv << "," << fmt(before[i]) << "," << fmt(after[t][i]);
        if (after[t][i] > before[i] + kMonotonicityTol) status = kExitViolation;
      }
      csv << "\n";
    }
    write_or_print(csv_path, csv.str(), out);
  });

  // embed
  std::string ham_path;
  long level_min = LevelRange{}.min, level_max = LevelRange{}.max;
  auto* embed = app.add_subcommand("embed", "Embed a Hamiltonian into a product of ladders");
  embed->add_option("hamiltonian", ham_path, "Hamiltonian or state JSON")->required();
  embed->add_option("--min", level_min, "lowest ladder level");
  embed->add_option("--max", level_max, "highest ladder level");
  embed->callback([&] {
    LabeledHamiltonian h = io::hamiltonian_from_json(io::read_json(ham_path));
    if (level_min > 0 || level_max < 0) throw UsageError("level range must contain 0");
    auto basis = embedding_basis(h.energies());
    LadderEmbedding emb = embed_into_ladders(h, basis, {level_min, level_max});
    out << "basis";
    for (const auto& b : basis) out << " [" << to_string(b) << "]";
    out << "\n";
    for (std::size_t i = 0; i < h.dim(); ++i) {
      out << i << " E=" << to_string(h.energy(i)) << " n=";
      for (std::size_t c = 0; c < emb.coordinates[i].size(); ++c) {
        out << (c ? "," : "") << emb.coordinates[i][c];
      }
      out << " alpha=" << emb.degeneracy_label[i] << "\n";
    }
  });

  // verdict
  auto* verdict = app.add_subcommand("verdict", "Can A reach B: mode-inclusion verdict");
  verdict->add_option("a", path_a, "source state JSON")->required();
  verdict->add_option("b", path_b, "target state JSON")->required();
  verdict->add_option("--threshold", threshold, "entry magnitude counted as coherent")
      ->check(CLI::PositiveNumber);
  verdict->callback([&] {
    DensityMatrix a = io::state_from_json(io::read_json(path_a));
    DensityMatrix b = io::state_from_json(io::read_json(path_b));
    Verdict v = transform_verdict(a, b, threshold);
    out << to_string(v) << "\n" << explain(v) << "\n";
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return status;
}

}  // namespace coherence::cli
