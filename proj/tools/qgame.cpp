// Command-line front end: evaluate, reduce, solve, sweep and check the
// two-player operator-payoff games described by JSON definition files.

#include <cstdio>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qgame/angle_game.hpp"
#include "qgame/checks.hpp"
#include "qgame/definition.hpp"
#include "qgame/engine.hpp"
#include "qgame/oracle.hpp"
#include "qgame/reduction.hpp"

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitValidation = 2;
constexpr int kExitInadmissible = 3;
constexpr int kExitDegenerate = 4;
constexpr int kExitCertificate = 5;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_angle(double rad) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.12g rad (%.6g deg)", rad,
                rad * 180.0 / qgame::kPi);
  return buf;
}

struct Options {
  std::string def_path;
  double theta = 0.0;
  double phi = 0.0;
  std::size_t n = 50;
  std::string out;
  double epsilon = 1e-6;
  std::size_t grid = 500;
  std::optional<std::uint64_t> seed;
  bool verify = true;
  bool suite = false;
};

int run_eval(const Options& opt) {
  const qgame::GameDefinition def = qgame::load_definition(opt.def_path);
  const qgame::QuantumGame game = qgame::build_game(def);
  const qgame::StrategyProfile profile{qgame::StrategyChoice(opt.theta),
                                       qgame::StrategyChoice(opt.phi)};
  const std::vector<double> f = qgame::payoff_all(game, profile);
  std::cout << "model: " << qgame::model_name(def.model) << "\n";
  std::cout << "theta = " << fmt_angle(opt.theta) << "\n";
  std::cout << "phi   = " << fmt_angle(opt.phi) << "\n";
  for (std::size_t i = 0; i < f.size(); ++i)
    std::cout << "f" << i + 1 << " = " << fmt(f[i]) << "\n";
  return 0;
}

void print_report(const qgame::ReductionReport& rep) {
  std::cout << "model: " << rep.model;
  if (rep.model == "one_qubit_mixed") std::cout << " (p = " << fmt(rep.mixing) << ")";
  std::cout << "\n";
  std::cout << "angle mapping: canonical = " << fmt(rep.angle_scale)
            << " * physical, physical square [0, " << fmt(rep.physical_range.hi)
            << "] rad\n";
  for (std::size_t i = 0; i < 2; ++i) {
    const qgame::SinusoidalPayoff& s = rep.sinusoids[i];
    std::cout << "player " << i + 1 << ": f = " << fmt(s.offset) << " + "
              << fmt(s.sin_coeff) << " * sin(2(theta+phi)) + " << fmt(s.cos_coeff)
              << " * cos(2(theta+phi))\n";
    std::cout << "  amplitude = " << fmt(rep.polar[i].amplitude)
              << ", phase = " << fmt_angle(rep.polar[i].phase) << "\n";
    std::cout << "  admissible: " << (rep.admissible[i] ? "yes" : "no")
              << ", degenerate: " << (rep.degenerate[i] ? "yes" : "no") << "\n";
  }
  if (rep.has_aggregates)
    std::cout << "aggregates: A1 = " << fmt(rep.cos_aggregate[0])
              << ", B1 = " << fmt(rep.sin_aggregate[0])
              << ", A2 = " << fmt(rep.cos_aggregate[1])
              << ", B2 = " << fmt(rep.sin_aggregate[1]) << "\n";
  std::cout << "reference formulas vs numeric extraction (numeric is "
               "authoritative):\n";
  for (const qgame::FormulaResidual& row : rep.formula_residuals) {
    std::printf("  %-52s reference=%-16.10g numeric=%-16.10g residual=%.3g\n",
                row.label.c_str(), row.reference, row.numeric, row.residual);
  }
}

int run_reduce(const Options& opt) {
  const qgame::GameDefinition def = qgame::load_definition(opt.def_path);
  const qgame::ReductionReport rep = qgame::reduce_definition(def);
  print_report(rep);
  return 0;
}

int run_solve(const Options& opt) {
  const qgame::GameDefinition def = qgame::load_definition(opt.def_path);
  const qgame::ReductionReport rep = qgame::reduce_definition(def);
  const qgame::NashSolution sol =
      qgame::solve_physical(rep, opt.epsilon, opt.grid,
                            def.tolerances.phase_equality, opt.verify);

  switch (sol.kind) {
    case qgame::NashSolution::Kind::Degenerate:
      std::cout << "degenerate game: " << sol.note << "\n";
      for (std::size_t i : sol.degenerate_players)
        std::cout << "  player " << i + 1
                  << " has a constant payoff; no isolated equilibrium exists\n";
      return kExitDegenerate;
    case qgame::NashSolution::Kind::Continuum: {
      std::cout << "equilibrium continuum (shared phase "
                << fmt_angle(sol.phase) << "):\n";
      std::cout << "  theta + phi = " << fmt(sol.angle_sum) << ", theta in ["
                << fmt(sol.theta_lo) << ", " << fmt(sol.theta_hi) << "] rad\n";
      const double mid = 0.5 * (sol.theta_lo + sol.theta_hi);
      std::cout << "  representative point: theta = " << fmt_angle(mid)
                << ", phi = " << fmt_angle(sol.angle_sum - mid) << "\n";
      const double f1 = qgame::physical_payoff(rep, mid, sol.angle_sum - mid, 0);
      const double f2 = qgame::physical_payoff(rep, mid, sol.angle_sum - mid, 1);
      std::cout << "  payoffs there: f1 = " << fmt(f1) << ", f2 = " << fmt(f2)
                << "\n";
      break;
    }
    case qgame::NashSolution::Kind::Unique: {
      std::cout << "unique equilibrium (canonical case " << sol.case_index
                << "):\n";
      std::cout << "  theta = " << fmt_angle(sol.theta) << "\n";
      std::cout << "  phi   = " << fmt_angle(sol.phi) << "\n";
      const double f1 = qgame::physical_payoff(rep, sol.theta, sol.phi, 0);
      const double f2 = qgame::physical_payoff(rep, sol.theta, sol.phi, 1);
      std::cout << "  payoffs: f1 = " << fmt(f1) << ", f2 = " << fmt(f2) << "\n";
      break;
    }
  }

  if (sol.certificate) {
    const qgame::NashCertificate& c = *sol.certificate;
    std::cout << "certificate: grid " << c.grid_n << " per axis, epsilon "
              << fmt(c.epsilon) << ", gains (" << fmt(c.gain1) << ", "
              << fmt(c.gain2) << "), effective epsilon "
              << fmt(c.epsilon_effective) << ", " << (c.pass ? "PASS" : "FAIL")
              << "\n";
    if (!c.pass) {
      std::cerr << "error: grid certification failed\n";
      return kExitCertificate;
    }
  }
  return 0;
}

int run_sweep(const Options& opt) {
  const qgame::GameDefinition def = qgame::load_definition(opt.def_path);
  const qgame::QuantumGame game = qgame::build_game(def);
  if (opt.n < 1) throw qgame::ParseError("--n: need at least one grid point");
  const auto [theta_iv, phi_iv] = qgame::angle_domain(def);
  const auto grid_point = [&](const qgame::Interval& iv, std::size_t i) {
    if (opt.n == 1) return iv.lo;
    if (i + 1 == opt.n) return iv.hi;
    return iv.lo + (iv.hi - iv.lo) * static_cast<double>(i) /
                       static_cast<double>(opt.n - 1);
  };
  std::FILE* out = stdout;
  if (!opt.out.empty()) {
    out = std::fopen(opt.out.c_str(), "wb");
    if (!out) throw qgame::ParseError("cannot open output file: " + opt.out);
  }
  std::fprintf(out, "theta,phi,f1,f2\n");
  for (std::size_t i = 0; i < opt.n; ++i)
    for (std::size_t j = 0; j < opt.n; ++j) {
      const double t = grid_point(theta_iv, i);
      const double p = grid_point(phi_iv, j);
      const qgame::StrategyProfile profile{qgame::StrategyChoice(t),
                                           qgame::StrategyChoice(p)};
      const std::vector<double> f = qgame::payoff_all(game, profile);
      std::fprintf(out, "%.12g,%.12g,%.12g,%.12g\n", t, p, f[0], f[1]);
    }
  if (out != stdout) std::fclose(out);
  return 0;
}

int run_check(const Options& opt) {
  std::vector<qgame::CheckResult> results;
  if (opt.suite) {
    results = qgame::full_suite(opt.seed.value_or(1));
  } else if (!opt.def_path.empty()) {
    const qgame::GameDefinition def = qgame::load_definition(opt.def_path);
    const qgame::QuantumGame game = qgame::build_game(def);
    results = qgame::game_checks(game, opt.seed.value_or(def.seed));
  } else {
    throw qgame::ParseError("check: pass a definition file or --suite");
  }
  std::size_t failed = 0;
  for (const qgame::CheckResult& r : results) {
    std::printf("%s  %-58s max deviation %.3g (tolerance %.3g)\n",
                r.pass ? "PASS" : "FAIL", r.name.c_str(), r.max_deviation,
                r.tolerance);
    if (!r.pass && !r.detail.empty()) std::printf("      %s\n", r.detail.c_str());
    if (!r.pass) ++failed;
  }
  if (failed > 0) {
    std::printf("%zu of %zu checks failed\n", failed, results.size());
    return kExitInternal;
  }
  std::printf("all %zu checks passed\n", results.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-player quantum games with operator payoffs"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* eval_cmd =
      app.add_subcommand("eval", "payoffs at one strategy profile");
  eval_cmd->add_option("def", opt.def_path, "game definition file")->required();
  eval_cmd->add_option("--theta", opt.theta, "player 1 angle in radians")
      ->required();
  eval_cmd->add_option("--phi", opt.phi, "player 2 angle in radians")->required();

  CLI::App* reduce_cmd = app.add_subcommand(
      "reduce", "extract the sinusoidal payoff structure and reference rows");
  reduce_cmd->add_option("def", opt.def_path, "game definition file")->required();

  CLI::App* solve_cmd = app.add_subcommand(
      "solve", "closed-form equilibrium with grid certification");
  solve_cmd->add_option("def", opt.def_path, "game definition file")->required();
  solve_cmd->add_option("--epsilon", opt.epsilon,
                        "certification tolerance (default 1e-6)");
  solve_cmd->add_option("--grid", opt.grid,
                        "certification grid points per axis (default 500)");
  solve_cmd->add_flag("--verify,!--no-verify", opt.verify,
                      "cross-check the closed form on a grid (default on)");

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "CSV payoff table over the angle square");
  sweep_cmd->add_option("def", opt.def_path, "game definition file")->required();
  sweep_cmd->add_option("--n", opt.n, "grid points per axis (default 50)");
  sweep_cmd->add_option("--out", opt.out, "output file (default stdout)");

  CLI::App* check_cmd =
      app.add_subcommand("check", "run randomized invariant checks");
  check_cmd->add_option("def", opt.def_path, "game definition file");
  check_cmd->add_flag("--suite", opt.suite, "run the full library suite");
  std::uint64_t seed_value = 0;
  CLI::Option* seed_opt =
      check_cmd->add_option("--seed", seed_value, "sampling seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }
  if (seed_opt->count() > 0) opt.seed = seed_value;

  try {
    if (eval_cmd->parsed()) return run_eval(opt);
    if (reduce_cmd->parsed()) return run_reduce(opt);
    if (solve_cmd->parsed()) return run_solve(opt);
    if (sweep_cmd->parsed()) return run_sweep(opt);
    if (check_cmd->parsed()) return run_check(opt);
  } catch (const qgame::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const qgame::InadmissibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInadmissible;
  } catch (const qgame::DegenerateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitValidation;
}
