// qgame — command-line front end: game spec ingestion, command dispatch,
// JSON/CSV/text report emission.
//
// Exit codes: 0 success, 2 usage or parse error, 3 spec invariant
// violation, 4 domain error from a module.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qgame/qgame.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitSpec = 3;
constexpr int kExitDomain = 4;

struct AnglePair {
  double first = 0.0;   // α or β
  double second = 0.0;  // θ or ω
};

AnglePair parse_angle_pair(const std::string& text, const std::string& flag) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw CLI::ValidationError(flag, "expected ANGLE,PHASE (comma separated)");
  try {
    size_t used = 0;
    const double a = std::stod(text.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument("");
    const std::string rest = text.substr(comma + 1);
    const double t = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("");
    if (!std::isfinite(a) || !std::isfinite(t))
      throw std::invalid_argument("");
    return {a, t};
  } catch (const std::exception&) {
    throw CLI::ValidationError(flag, "malformed angle pair \"" + text + "\"");
  }
}

double to_radians(double value, bool degrees) {
  return degrees ? value * qgame::kPi / 180.0 : value;
}

std::string format_sig6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void emit(const ordered_json& report, const std::string& format) {
  if (format == "text") {
    // flat key: value lines, 6 significant digits
    for (const auto& [key, val] : report.items()) {
      if (val.is_number_float())
        std::cout << key << ": " << format_sig6(val.get<double>()) << "\n";
      else
        std::cout << key << ": " << val.dump() << "\n";
    }
    return;
  }
  std::cout << report.dump(2) << "\n";
}

qgame::LoadedSpec load_spec_checked(const std::string& path) {
  if (!std::filesystem::exists(path))
    throw qgame::FileError("spec file not found: " + path);
  return qgame::load_game_spec(path);
}

ordered_json equilibrium_json(const qgame::EquilibriumResult& e) {
  return ordered_json{{"alpha", e.alpha},
                      {"beta", e.beta},
                      {"value", e.value},
                      {"kind", qgame::to_string(e.kind)},
                      {"max_improvement", e.max_improvement}};
}

ordered_json estimate_json(const qgame::FrequencyEstimate& est) {
  ordered_json counts = ordered_json::array();
  ordered_json omegas = ordered_json::array();
  ordered_json errors = ordered_json::array();
  for (size_t a = 0; a < est.counts.size(); ++a) {
    counts.push_back(est.counts[a]);
    if (est.omega_hat[a]) {
      omegas.push_back(*est.omega_hat[a]);
      errors.push_back(*est.std_error[a]);
    } else {
      omegas.push_back(nullptr);
      errors.push_back(nullptr);
    }
  }
  return ordered_json{{"rounds", est.rounds},
                      {"definite_rounds", est.definite_rounds},
                      {"same_pair_rounds", est.same_pair_rounds},
                      {"counts", counts},
                      {"omega_hat", omegas},
                      {"std_error", errors}};
}

ordered_json measurement_json(const qgame::SimulationReport& rep) {
  ordered_json subgames = ordered_json::array();
  for (const qgame::SubgameStats& st : rep.subgames)
    subgames.push_back(ordered_json{{"pair", st.pair},
                                    {"rounds", st.rounds},
                                    {"count_k_kp", st.count_k_kp},
                                    {"count_kp_k", st.count_kp_k},
                                    {"count_k_k", st.count_k_k},
                                    {"count_kp_kp", st.count_kp_kp},
                                    {"mean_payoff", st.mean_payoff},
                                    {"std_error", st.std_error}});
  return ordered_json{{"rounds_per_subgame", rep.rounds_per_subgame},
                      {"subgames", subgames},
                      {"pooled_empirical", rep.pooled_empirical},
                      {"theoretical", rep.theoretical},
                      {"theoretical_at_freqs", rep.theoretical_at_freqs},
                      {"std_error", rep.std_error},
                      {"prep_std_error", rep.prep_std_error},
                      {"total_std_error", rep.total_std_error},
                      {"z_score", rep.z_score}};
}

void write_simulation_csv(std::ostream& os, const qgame::TwoStageReport& rep) {
  os << "section,key,value\n";
  const auto row = [&os](const std::string& sec, const std::string& key,
                         double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << sec << "," << key << "," << buf << "\n";
  };
  const auto freq_rows = [&](const std::string& sec,
                             const qgame::FrequencyEstimate& est) {
    row(sec, "rounds", static_cast<double>(est.rounds));
    row(sec, "definite_rounds", static_cast<double>(est.definite_rounds));
    for (size_t a = 0; a < est.counts.size(); ++a) {
      row(sec, "count_" + std::to_string(a + 1),
          static_cast<double>(est.counts[a]));
      if (est.omega_hat[a])
        row(sec, "omega_hat_" + std::to_string(a + 1), *est.omega_hat[a]);
    }
  };
  freq_rows("prep_alice", rep.alice);
  freq_rows("prep_bob", rep.bob);
  for (const qgame::SubgameStats& st : rep.measurement.subgames) {
    const std::string sec = "subgame_" + std::to_string(st.pair);
    row(sec, "mean_payoff", st.mean_payoff);
    row(sec, "std_error", st.std_error);
  }
  row("pooled", "empirical", rep.measurement.pooled_empirical);
  row("pooled", "theoretical", rep.measurement.theoretical);
  row("pooled", "theoretical_at_freqs", rep.measurement.theoretical_at_freqs);
  row("pooled", "total_std_error", rep.measurement.total_std_error);
  row("pooled", "z_score", rep.measurement.z_score);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qgame — quantum game laboratory: payoff evaluation, Nash "
               "search, protocol simulation, lattice and relation checks"};
  app.set_version_flag("--version", std::string("qgame ") + qgame::kVersion);
  app.require_subcommand(1);

  // ---- eval ----------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "expected payoff E_A of a game");
  std::string eval_spec, eval_alice, eval_bob, eval_format = "json";
  bool eval_degrees = false;
  eval->add_option("--spec", eval_spec, "game spec JSON file")->required();
  eval->add_option("--alice", eval_alice, "Alice strategy ALPHA,THETA")
      ->required();
  eval->add_option("--bob", eval_bob, "Bob strategy BETA,OMEGA")->required();
  eval->add_flag("--degrees", eval_degrees, "angles are given in degrees");
  eval->add_option("--format", eval_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));

  // ---- nash ----------------------------------------------------------
  auto* nash = app.add_subcommand("nash", "Nash equilibria of the real "
                                          "(θ=ω=0) angle game");
  std::string nash_spec, nash_coeffs, nash_format = "json";
  double nash_eps = 1e-6, nash_grid = 1e-3;
  bool nash_complex = false;
  nash->add_option("--spec", nash_spec, "game spec JSON file");
  nash->add_option("--coeffs", nash_coeffs,
                   "reduced coefficients a,b,c,d (alternative to --spec)");
  nash->add_option("--eps", nash_eps, "certificate tolerance")
      ->check(CLI::PositiveNumber);
  nash->add_option("--grid", nash_grid, "search grid step in radians")
      ->check(CLI::PositiveNumber);
  nash->add_flag("--complex", nash_complex,
                 "experimental search over complex strategies (needs --spec)");
  nash->add_option("--format", nash_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));

  // ---- react ---------------------------------------------------------
  auto* react = app.add_subcommand("react", "best-response reaction curves "
                                            "as CSV");
  std::string react_spec, react_coeffs, react_out;
  double react_grid = 1e-3;
  react->add_option("--spec", react_spec, "game spec JSON file");
  react->add_option("--coeffs", react_coeffs,
                    "reduced coefficients a,b,c,d (alternative to --spec)");
  react->add_option("--out", react_out, "output CSV path")->required();
  react->add_option("--grid", react_grid, "opponent grid step in radians")
      ->check(CLI::PositiveNumber);

  // ---- simulate ------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "two-stage Monte Carlo run");
  std::string sim_spec, sim_alice, sim_bob, sim_format = "json";
  std::uint64_t sim_prep = 0, sim_meas = 0;
  std::optional<std::uint64_t> sim_seed;
  int sim_workers = 1;
  bool sim_degrees = false, sim_json = false, sim_csv = false;
  sim->add_option("--spec", sim_spec, "game spec JSON file")->required();
  sim->add_option("--alice", sim_alice, "Alice strategy ALPHA,THETA")
      ->required();
  sim->add_option("--bob", sim_bob, "Bob strategy BETA,OMEGA")->required();
  sim->add_option("--prep-rounds", sim_prep, "preparation rounds per player")
      ->required();
  sim->add_option("--meas-rounds", sim_meas, "measurement rounds per subgame")
      ->required();
  sim->add_option("--seed", sim_seed,
                  "RNG seed (required; runs are reproducible)");
  sim->add_option("--workers", sim_workers, "worker threads (default 1)")
      ->check(CLI::PositiveNumber);
  sim->add_flag("--degrees", sim_degrees, "angles are given in degrees");
  sim->add_flag("--json", sim_json, "JSON output (default)");
  sim->add_flag("--csv", sim_csv, "CSV output");
  sim->add_option("--format", sim_format, "json, csv or text")
      ->check(CLI::IsMember({"json", "csv", "text"}));

  // ---- uncertainty ---------------------------------------------------
  auto* unc = app.add_subcommand("uncertainty",
                                 "dispersion and frequency uncertainty "
                                 "relation for one state");
  double unc_alpha = 0.0, unc_theta = 0.0;
  bool unc_degrees = false;
  std::string unc_format = "json";
  unc->add_option("--alpha", unc_alpha, "state angle α")->required();
  unc->add_option("--theta", unc_theta, "state phase θ")->required();
  unc->add_flag("--degrees", unc_degrees, "angles are given in degrees");
  unc->add_option("--format", unc_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));

  // ---- interference --------------------------------------------------
  auto* intf = app.add_subcommand("interference",
                                  "decomposition of the second observable's "
                                  "frequencies");
  double intf_alpha = 0.0, intf_obs = 0.0;
  bool intf_degrees = false;
  std::string intf_format = "json";
  intf->add_option("--alpha", intf_alpha, "state angle α in [0, π/2]")
      ->required();
  intf->add_option("--obs-angle", intf_obs, "observable angle θ_a")
      ->required();
  intf->add_flag("--degrees", intf_degrees, "angles are given in degrees");
  intf->add_option("--format", intf_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));

  // ---- lattice -------------------------------------------------------
  auto* lat = app.add_subcommand("lattice", "distributivity violations and "
                                            "Boolean blocks of the question "
                                            "lattice");
  int lat_pairs = 0;
  std::string lat_format = "json";
  lat->add_option("--pairs", lat_pairs, "number of complement pairs K >= 2")
      ->required();
  lat->add_option("--format", lat_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*eval) {
      const auto loaded = load_spec_checked(eval_spec);
      const AnglePair a = parse_angle_pair(eval_alice, "--alice");
      const AnglePair b = parse_angle_pair(eval_bob, "--bob");
      const qgame::StateVector phi(to_radians(a.first, eval_degrees),
                                   to_radians(a.second, eval_degrees));
      const qgame::StateVector psi(to_radians(b.first, eval_degrees),
                                   to_radians(b.second, eval_degrees));
      const double e_op = qgame::expected_payoff_operator(loaded.game, phi, psi);
      ordered_json rep{{"schema_version", kSchemaVersion},
                       {"command", "eval"},
                       {"spec_digest", loaded.digest},
                       {"units", loaded.game.units},
                       {"alpha", phi.alpha()},
                       {"theta", phi.theta()},
                       {"beta", psi.alpha()},
                       {"omega", psi.theta()},
                       {"e_a", e_op}};
      if (loaded.game.pair_count() == 3 &&
          loaded.game.payoff.table_shaped() &&
          loaded.game.frame_a.kind() == qgame::FrameKind::fixed_xyz &&
          loaded.game.frame_b.kind() == qgame::FrameKind::fixed_xyz)
        rep["e_a_closed"] = qgame::expected_payoff_closed(
            loaded.game.payoff, phi.alpha(), phi.theta(), psi.alpha(),
            psi.theta());
      emit(rep, eval_format);
      return kExitOk;
    }

    if (*nash) {
      if (nash_spec.empty() == nash_coeffs.empty())
        throw CLI::ValidationError("nash",
                                   "exactly one of --spec / --coeffs required");
      ordered_json rep{{"schema_version", kSchemaVersion},
                       {"command", "nash"},
                       {"eps", nash_eps},
                       {"grid_step", nash_grid}};
      if (!nash_coeffs.empty()) {
        if (nash_complex)
          throw CLI::ValidationError("--complex", "requires --spec");
        std::vector<double> c;
        std::stringstream ss(nash_coeffs);
        std::string tok;
        while (std::getline(ss, tok, ',')) c.push_back(std::stod(tok));
        if (c.size() != 4)
          throw CLI::ValidationError("--coeffs", "expected a,b,c,d");
        const qgame::ReducedCoefficients k{c[0], c[1], c[2], c[3]};
        rep["coeffs"] = ordered_json{{"a", k.a}, {"b", k.b}, {"c", k.c},
                                     {"d", k.d}};
        ordered_json eqs = ordered_json::array();
        for (const auto& e :
             qgame::find_nash(qgame::reduced_game(k), nash_eps, nash_grid))
          eqs.push_back(equilibrium_json(e));
        rep["equilibria"] = eqs;
      } else {
        const auto loaded = load_spec_checked(nash_spec);
        rep["spec_digest"] = loaded.digest;
        if (nash_complex) {
          ordered_json eqs = ordered_json::array();
          for (const auto& e :
               qgame::find_nash_complex(loaded.game, nash_eps))
            eqs.push_back(ordered_json{{"alice_alpha", e.alice.alpha()},
                                       {"alice_theta", e.alice.theta()},
                                       {"bob_beta", e.bob.alpha()},
                                       {"bob_omega", e.bob.theta()},
                                       {"value", e.value},
                                       {"max_improvement",
                                        e.max_improvement}});
          rep["complex_equilibria"] = eqs;
        } else {
          ordered_json eqs = ordered_json::array();
          for (const auto& e :
               qgame::find_nash(loaded.game, nash_eps, nash_grid))
            eqs.push_back(equilibrium_json(e));
          rep["equilibria"] = eqs;
        }
      }
      emit(rep, nash_format);
      return kExitOk;
    }

    if (*react) {
      if (react_spec.empty() == react_coeffs.empty())
        throw CLI::ValidationError("react",
                                   "exactly one of --spec / --coeffs required");
      qgame::AnglePayoff payoff_fn;
      ordered_json rep{{"schema_version", kSchemaVersion},
                       {"command", "react"},
                       {"grid_step", react_grid},
                       {"out", react_out}};
      if (!react_coeffs.empty()) {
        std::vector<double> c;
        std::stringstream ss(react_coeffs);
        std::string tok;
        while (std::getline(ss, tok, ',')) c.push_back(std::stod(tok));
        if (c.size() != 4)
          throw CLI::ValidationError("--coeffs", "expected a,b,c,d");
        payoff_fn =
            qgame::reduced_game(qgame::ReducedCoefficients{c[0], c[1], c[2],
                                                           c[3]});
      } else {
        const auto loaded = load_spec_checked(react_spec);
        rep["spec_digest"] = loaded.digest;
        payoff_fn = qgame::real_strategy_game(loaded.game);
      }
      const auto [alice, bob] = qgame::reaction_curves(payoff_fn, react_grid);
      std::ofstream out(react_out);
      if (!out)
        throw qgame::FileError("cannot open output file: " + react_out);
      out << "player,opponent_angle,best_response,payoff\n";
      const auto rows = [&out](const qgame::ReactionCurve& curve,
                               const char* name) {
        char buf[160];
        for (const qgame::ReactionSample& s : curve.samples)
          for (double r : s.best_responses) {
            std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g\n", name,
                          s.opponent_angle, r, s.payoff_at_best);
            out << buf;
          }
      };
      rows(alice, "alice");
      rows(bob, "bob");
      rep["samples_per_player"] = alice.samples.size();
      emit(rep, "json");
      return kExitOk;
    }

    if (*sim) {
      if (!sim_seed.has_value())
        throw CLI::ValidationError(
            "--seed", "required: simulate never picks a silent random seed");
      if (sim_json) sim_format = "json";
      if (sim_csv) sim_format = "csv";
      const auto loaded = load_spec_checked(sim_spec);
      const AnglePair a = parse_angle_pair(sim_alice, "--alice");
      const AnglePair b = parse_angle_pair(sim_bob, "--bob");
      const qgame::StateVector phi(to_radians(a.first, sim_degrees),
                                   to_radians(a.second, sim_degrees));
      const qgame::StateVector psi(to_radians(b.first, sim_degrees),
                                   to_radians(b.second, sim_degrees));
      const qgame::TwoStageReport rep = qgame::run_two_stage(
          loaded.game, phi, psi, sim_prep, sim_meas, *sim_seed, sim_workers);
      if (sim_format == "csv") {
        write_simulation_csv(std::cout, rep);
        return kExitOk;
      }
      // the report carries no worker count: identical seeds must emit
      // identical bytes regardless of how rounds were partitioned
      ordered_json j{{"schema_version", kSchemaVersion},
                     {"command", "simulate"},
                     {"spec_digest", loaded.digest},
                     {"units", loaded.game.units},
                     {"seed", *sim_seed},
                     {"alpha", phi.alpha()},
                     {"theta", phi.theta()},
                     {"beta", psi.alpha()},
                     {"omega", psi.theta()},
                     {"prep_alice", estimate_json(rep.alice)},
                     {"prep_bob", estimate_json(rep.bob)},
                     {"measurement", measurement_json(rep.measurement)}};
      if (sim_format == "text") {
        std::cout << "pooled_empirical: "
                  << format_sig6(rep.measurement.pooled_empirical) << "\n"
                  << "theoretical: "
                  << format_sig6(rep.measurement.theoretical) << "\n"
                  << "z_score: " << format_sig6(rep.measurement.z_score)
                  << "\n";
        return kExitOk;
      }
      emit(j, "json");
      return kExitOk;
    }

    if (*unc) {
      const qgame::StateVector s(to_radians(unc_alpha, unc_degrees),
                                 to_radians(unc_theta, unc_degrees));
      const qgame::UncertaintyReport r = qgame::uncertainty_check(s);
      const auto reduction = qgame::frequency_inequality_reduction(s);
      emit(ordered_json{{"schema_version", kSchemaVersion},
                        {"command", "uncertainty"},
                        {"alpha", s.alpha()},
                        {"theta", s.theta()},
                        {"d1", r.d1},
                        {"d2", r.d2},
                        {"e3", r.e3},
                        {"lhs", r.lhs},
                        {"rhs", r.rhs},
                        {"freq_lhs", r.freq_lhs},
                        {"freq_rhs", r.freq_rhs},
                        {"reduced_lhs", reduction.first},
                        {"reduced_rhs", reduction.second},
                        {"holds", r.holds}},
           unc_format);
      return kExitOk;
    }

    if (*intf) {
      const qgame::InterferenceReport r = qgame::interference_decompose(
          to_radians(intf_alpha, intf_degrees),
          to_radians(intf_obs, intf_degrees));
      emit(ordered_json{{"schema_version", kSchemaVersion},
                        {"command", "interference"},
                        {"alpha", r.alpha},
                        {"obs_angle", r.obs_angle},
                        {"p1", r.p1},
                        {"p3", r.p3},
                        {"p2_direct", r.p2_direct},
                        {"p2_terms", r.p2_terms},
                        {"p2_residual", r.p2_residual},
                        {"p4_direct", r.p4_direct},
                        {"p4_terms", r.p4_terms},
                        {"p4_residual", r.p4_residual}},
           intf_format);
      return kExitOk;
    }

    if (*lat) {
      const qgame::OrthoLattice lattice = qgame::build_lattice(lat_pairs);
      ordered_json violations = ordered_json::array();
      for (const auto& triple : lattice.distributivity_violations())
        violations.push_back(ordered_json::array(
            {triple[0].label(), triple[1].label(), triple[2].label()}));
      ordered_json blocks = ordered_json::array();
      for (const qgame::BooleanBlock& b : lattice.boolean_blocks()) {
        ordered_json labels = ordered_json::array();
        for (const qgame::LatticeElement& e : b.elements)
          labels.push_back(e.label());
        blocks.push_back(labels);
      }
      emit(ordered_json{{"schema_version", kSchemaVersion},
                        {"command", "lattice"},
                        {"pairs", lat_pairs},
                        {"atoms", lattice.atom_count()},
                        {"violation_count", violations.size()},
                        {"violations", violations},
                        {"boolean_blocks", blocks}},
           lat_format);
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const qgame::FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const qgame::ParseError& e) {
    std::cerr << "error: " << e.what() << " (line " << e.line() << ", column "
              << e.column() << ")\n";
    return kExitUsage;
  } catch (const qgame::SpecError& e) {
    std::cerr << "error: spec invariant violation at " << e.field_path()
              << ": " << e.what() << "\n";
    return kExitSpec;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitOk;
}
