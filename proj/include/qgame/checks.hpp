#pragma once

// Seeded invariant suites. Each check runs a batch of randomized
// trials and reports the worst deviation against its tolerance; the
// CLI `check` command and the test suite both drive these.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qgame/angle_game.hpp"
#include "qgame/engine.hpp"
#include "qgame/matrix.hpp"
#include "qgame/oracle.hpp"
#include "qgame/reduction.hpp"
#include "qgame/rng.hpp"

namespace qgame {

struct CheckResult {
  std::string name;
  bool pass = false;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

namespace detail {

inline void finish(CheckResult& r) { r.pass = r.max_deviation <= r.tolerance; }

inline SinusoidPolar random_polar(Rng& rng, double min_amp, double max_amp,
                                  double min_abs_phase) {
  SinusoidPolar p;
  p.offset = rng.uniform(-1.0, 1.0);
  p.amplitude = rng.uniform(min_amp, max_amp);
  double phase = rng.uniform(-kHalfPi, kHalfPi);
  if (std::abs(phase) < min_abs_phase)
    phase = phase < 0.0 ? -min_abs_phase : min_abs_phase;
  p.phase = phase;
  return p;
}

inline AngleSumGame random_angle_game(Rng& rng, double min_separation) {
  for (;;) {
    const SinusoidPolar a = random_polar(rng, 0.2, 2.0, 0.0);
    const SinusoidPolar b = random_polar(rng, 0.2, 2.0, 0.0);
    if (std::abs(a.phase - b.phase) > min_separation) return AngleSumGame(a, b);
  }
}

}  // namespace detail

inline std::vector<CheckResult> matrix_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  Rng rng(seed);

  {
    CheckResult r{.name = "unitary conjugation preserves density structure",
                  .tolerance = 1e-10};
    for (int k = 0; k < 120; ++k) {
      const std::size_t n = k % 2 == 0 ? 2 : 4;
      const ComplexMatrix rho = random_density_matrix(rng, n);
      const ComplexMatrix u = random_unitary(rng, n);
      const ComplexMatrix rf = u * rho * dagger(u);
      const Validation v = check_density(rf, 1e-10);
      if (!v.ok) r.max_deviation = std::max(r.max_deviation, v.magnitude);
      r.max_deviation =
          std::max(r.max_deviation, std::abs(trace(rf) - cplx(1.0, 0.0)));
    }
    detail::finish(r);
    out.push_back(r);
  }
  {
    CheckResult r{.name = "dagger is an involution", .tolerance = 0.0};
    for (int k = 0; k < 50; ++k) {
      const ComplexMatrix a = random_matrix(rng, k % 2 == 0 ? 3 : 4);
      r.max_deviation = std::max(r.max_deviation, max_abs_diff(dagger(dagger(a)), a));
    }
    detail::finish(r);
    out.push_back(r);
  }
  {
    CheckResult r{.name = "tensor product is associative", .tolerance = 1e-12};
    for (int k = 0; k < 50; ++k) {
      const ComplexMatrix a = random_matrix(rng, 2);
      const ComplexMatrix b = random_matrix(rng, 2);
      const ComplexMatrix c = random_matrix(rng, 2);
      r.max_deviation = std::max(
          r.max_deviation, max_abs_diff(tensor(tensor(a, b), c), tensor(a, tensor(b, c))));
    }
    detail::finish(r);
    out.push_back(r);
  }
  {
    CheckResult r{.name = "rotations are unitary", .tolerance = 1e-12};
    for (int k = 0; k < 1000; ++k) {
      const ComplexMatrix u = rotation(rng.uniform(-10.0, 10.0));
      r.max_deviation = std::max(
          r.max_deviation, max_abs_diff(u * dagger(u), ComplexMatrix::identity(2)));
    }
    detail::finish(r);
    out.push_back(r);
  }
  {
    CheckResult r{.name = "eigenvalues match trace identities", .tolerance = 1e-9};
    for (int k = 0; k < 60; ++k) {
      const std::size_t n = 2 + k % 3;
      const ComplexMatrix h = random_hermitian(rng, n, 1.0);
      const std::vector<double> eig = hermitian_eigenvalues(h);
      double sum = 0.0, sq = 0.0;
      for (double e : eig) {
        sum += e;
        sq += e * e;
      }
      r.max_deviation =
          std::max(r.max_deviation, std::abs(sum - trace(h).real()));
      r.max_deviation =
          std::max(r.max_deviation, std::abs(sq - trace(h * h).real()));
    }
    detail::finish(r);
    out.push_back(r);
  }
  return out;
}

namespace detail {

inline QuantumGame random_engine_game(Rng& rng, std::size_t* players_out = nullptr) {
  const std::size_t dim = rng.unit() < 0.5 ? 2 : 4;
  const std::size_t n_players = 1 + rng.index(3);
  std::vector<StrategySpace> spaces;
  for (std::size_t k = 0; k < n_players; ++k) {
    if (dim == 4) {
      spaces.push_back(StrategySpace::planar(0.0, kHalfPi, rng.index(2)));
    } else if (rng.unit() < 0.7) {
      spaces.push_back(StrategySpace::planar(0.0, kHalfPi));
    } else {
      spaces.push_back(StrategySpace::unrestricted());
    }
  }
  std::vector<HermitianOperator> payoffs;
  for (std::size_t k = 0; k < n_players; ++k)
    payoffs.push_back(HermitianOperator(random_hermitian(rng, dim, 1.0)));
  if (players_out) *players_out = n_players;
  return QuantumGame(random_density(rng, dim), std::move(spaces), std::move(payoffs),
                     Ordering::Static);
}

inline StrategyProfile random_profile(Rng& rng, const QuantumGame& game) {
  StrategyProfile profile;
  for (const StrategySpace& s : game.players()) {
    if (s.kind == StrategyKind::UnrestrictedUnitary && rng.unit() < 0.5)
      profile.emplace_back(random_unitary(rng, game.dimension()));
    else
      profile.emplace_back(rng.uniform(s.lo, s.hi));
  }
  return profile;
}

}  // namespace detail

inline std::vector<CheckResult> engine_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  Rng rng(seed);

  {
    CheckResult r{.name = "final states keep unit trace", .tolerance = 1e-12};
    for (int k = 0; k < 200; ++k) {
      const QuantumGame game = detail::random_engine_game(rng);
      const StrategyProfile profile = detail::random_profile(rng, game);
      const DensityMatrix rf = final_state(game, profile);
      r.max_deviation =
          std::max(r.max_deviation, std::abs(trace(rf.matrix()) - cplx(1.0, 0.0)));
    }
    detail::finish(r);
    out.push_back(r);
  }
  {
    CheckResult r{.name = "payoff is linear in the payoff operator",
                  .tolerance = 1e-12};
    for (int k = 0; k < 100; ++k) {
      const std::size_t dim = k % 2 == 0 ? 2 : 4;
      const ComplexMatrix p = random_hermitian(rng, dim, 1.0);
      const ComplexMatrix q = random_hermitian(rng, dim, 1.0);
      const double alpha = rng.uniform(-2.0, 2.0);
      const double beta = rng.uniform(-2.0, 2.0);
      std::vector<StrategySpace> spaces;
      if (dim == 2)
        spaces = {StrategySpace::planar(0.0, kHalfPi)};
      else
        spaces = {StrategySpace::planar(0.0, kHalfPi, 0)};
      const DensityMatrix rho = random_density(rng, dim);
      const StrategyProfile profile{StrategyChoice(rng.uniform(0.0, kHalfPi))};
      const auto value = [&](const ComplexMatrix& op) {
        QuantumGame g(rho, spaces, {HermitianOperator(op)}, Ordering::Static);
        return payoff(g, profile, 0);
      };
      const ComplexMatrix combo = alpha * p + beta * q;
      r.max_deviation = std::max(
          r.max_deviation,
          std::abs(value(combo) - (alpha * value(p) + beta * value(q))));
    }
    detail::finish(r);
    out.push_back(r);
  }
  {
    CheckResult r{.name = "local moves on distinct factors commute",
                  .tolerance = 1e-12};
    for (int k = 0; k < 100; ++k) {
      QuantumGame game(random_density(rng, 4),
                       {StrategySpace::planar(0.0, kHalfPi, 0),
                        StrategySpace::planar(0.0, kHalfPi, 1)},
                       {HermitianOperator(random_hermitian(rng, 4, 1.0)),
                        HermitianOperator(random_hermitian(rng, 4, 1.0))},
                       Ordering::Static);
      const StrategyProfile profile{StrategyChoice(rng.uniform(0.0, kHalfPi)),
                                    StrategyChoice(rng.uniform(0.0, kHalfPi))};
      r.max_deviation = std::max(r.max_deviation, ordering_sensitivity(game, profile));
    }
    detail::finish(r);
    out.push_back(r);
  }
  {
    CheckResult r{.name = "projection payoffs match the trace form",
                  .tolerance = 1e-12};
    for (int k = 0; k < 100; ++k) {
      const std::size_t dim = k % 2 == 0 ? 2 : 4;
      const ComplexMatrix u = random_unitary(rng, dim);
      std::vector<ComplexMatrix> kets;
      std::vector<double> coeffs;
      for (std::size_t j = 0; j < dim; ++j) {
        ComplexMatrix ket(dim, 1);
        for (std::size_t i = 0; i < dim; ++i) ket(i, 0) = u(i, j);
        kets.push_back(std::move(ket));
        coeffs.push_back(rng.uniform(-2.0, 2.0));
      }
      const HermitianOperator proj = projection_payoff(coeffs, kets);
      std::vector<StrategySpace> spaces;
      if (dim == 2)
        spaces = {StrategySpace::planar(0.0, kHalfPi)};
      else
        spaces = {StrategySpace::planar(0.0, kHalfPi, 0)};
      QuantumGame game(random_density(rng, dim), spaces, {proj}, Ordering::Static);
      const StrategyProfile profile{StrategyChoice(rng.uniform(0.0, kHalfPi))};
      const ComplexMatrix rf = final_state(game, profile).matrix();
      double projected = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        const cplx prob = (dagger(kets[j]) * rf * kets[j])(0, 0);
        projected += coeffs[j] * prob.real();
      }
      r.max_deviation =
          std::max(r.max_deviation, std::abs(payoff(game, profile, 0) - projected));
    }
    detail::finish(r);
    out.push_back(r);
  }
  return out;
}

inline std::vector<CheckResult> angle_game_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  Rng rng(seed);

  {
    CheckResult r{.name = "best response beats a dense grid", .tolerance = 1e-12};
    for (int k = 0; k < 300; ++k) {
      const AngleSumGame g = detail::random_angle_game(rng, 0.0);
      const double phi = rng.uniform(0.0, kHalfPi);
      const double best = g.eval(g.best_response_p1(phi), phi, 0);
      const auto [argmax, value] = grid_argmax(
          [&](double t) { return g.eval(t, phi, 0); }, Interval{0.0, kHalfPi}, 10000);
      r.max_deviation = std::max(r.max_deviation, value - best);
      (void)argmax;
    }
    detail::finish(r);
    out.push_back(r);
  }
  {
    CheckResult r{.name = "closed-form solutions are best-response fixed points",
                  .tolerance = 1e-9};
    for (int k = 0; k < 400; ++k) {
      const AngleSumGame g = detail::random_angle_game(rng, 1e-6);
      const NashSolution s = g.solve_closed_form();
      if (s.kind == NashSolution::Kind::Unique) {
        const auto [bt, bp] = g.best_response(s.theta, s.phi);
        r.max_deviation = std::max(r.max_deviation, std::abs(bt - s.theta));
        r.max_deviation = std::max(r.max_deviation, std::abs(bp - s.phi));
      } else if (s.kind == NashSolution::Kind::Continuum) {
        for (int j = 0; j <= 10; ++j) {
          const double t = s.theta_lo + (s.theta_hi - s.theta_lo) * j / 10.0;
          const double p = s.angle_sum - t;
          const auto [bt, bp] = g.best_response(t, p);
          r.max_deviation = std::max(r.max_deviation, std::abs(bt - t));
          r.max_deviation = std::max(r.max_deviation, std::abs(bp - p));
        }
      }
    }
    detail::finish(r);
    out.push_back(r);
  }
  {
    CheckResult r{.name = "equilibrium table rows agree on phase-zero boundaries",
                  .tolerance = 0.0};
    for (int k = 0; k < 100; ++k) {
      const double other = rng.uniform(0.01, kHalfPi - 0.01);
      const AngleSumGame a({0.0, 1.0, 0.0}, {0.0, 1.0, k % 2 == 0 ? other : -other});
      const AngleSumGame b({0.0, 1.0, k % 2 == 0 ? other : -other}, {0.0, 1.0, 0.0});
      // construction would throw std::logic_error on a disagreement
      (void)a.solve_closed_form();
      (void)b.solve_closed_form();
    }
    detail::finish(r);
    out.push_back(r);
  }
  {
    CheckResult r{.name = "closed-form solutions pass grid certification",
                  .tolerance = 1e-6};
    for (int k = 0; k < 60; ++k) {
      const AngleSumGame g = detail::random_angle_game(rng, 1e-6);
      NashSolution s = g.solve_closed_form();
      attach_certificate(g, s, 1e-6, 500);
      if (s.certificate) {
        r.max_deviation = std::max(r.max_deviation, s.certificate->gain1);
        r.max_deviation = std::max(r.max_deviation, s.certificate->gain2);
      }
      if (s.kind == NashSolution::Kind::Continuum) {
        for (int j = 0; j <= 10; ++j) {
          const double t = s.theta_lo + (s.theta_hi - s.theta_lo) * j / 10.0;
          const NashCertificate c = g.certify(t, s.angle_sum - t, 1e-6, 500);
          r.max_deviation = std::max(r.max_deviation, std::max(c.gain1, c.gain2));
        }
      }
    }
    detail::finish(r);
    out.push_back(r);
  }
  {
    CheckResult r{.name = "at most one player peaks at an interior equilibrium",
                  .tolerance = 0.0};
    for (int k = 0; k < 200; ++k) {
      const AngleSumGame g = detail::random_angle_game(rng, 1e-3);
      const NashSolution s = g.solve_closed_form();
      if (s.kind != NashSolution::Kind::Unique) continue;
      int peaked = 0;
      for (std::size_t i = 0; i < 2; ++i) {
        const SinusoidPolar& p = g.player(i);
        if (std::abs(g.eval(s.theta, s.phi, i) - (p.offset + p.amplitude)) <= 1e-9)
          ++peaked;
      }
      if (peaked > 1) r.max_deviation = std::max(r.max_deviation, double(peaked - 1));
    }
    detail::finish(r);
    out.push_back(r);
  }
  return out;
}

inline std::vector<CheckResult> oracle_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  Rng rng(seed);

  {
    CheckResult r{.name = "grid argmax lands next to the analytic best response",
                  .tolerance = kHalfPi / 9999.0 + 1e-12};
    for (int k = 0; k < 300; ++k) {
      const AngleSumGame g = detail::random_angle_game(rng, 0.0);
      const double phi = rng.uniform(0.0, kHalfPi);
      const double analytic = g.best_response_p1(phi);
      const auto [argmax, value] = grid_argmax(
          [&](double t) { return g.eval(t, phi, 0); }, Interval{0.0, kHalfPi}, 10000);
      (void)value;
      r.max_deviation = std::max(r.max_deviation, std::abs(argmax - analytic));
    }
    detail::finish(r);
    out.push_back(r);
  }
  {
    CheckResult r{.name = "least-squares fit recovers planted coefficients",
                  .tolerance = 1e-10};
    for (int k = 0; k < 300; ++k) {
      const double p = rng.uniform(-2.0, 2.0);
      const double a = rng.uniform(-2.0, 2.0);
      const double b = rng.uniform(-2.0, 2.0);
      std::vector<std::pair<double, double>> samples;
      for (int j = 0; j < 64; ++j) {
        const double x = kPi * j / 64.0;
        samples.emplace_back(x, p + a * std::sin(2 * x) + b * std::cos(2 * x));
      }
      const SinusoidFit fit = fit_sinusoid(samples);
      r.max_deviation = std::max(r.max_deviation, std::abs(fit.offset - p));
      r.max_deviation = std::max(r.max_deviation, std::abs(fit.sin_coeff - a));
      r.max_deviation = std::max(r.max_deviation, std::abs(fit.cos_coeff - b));
    }
    detail::finish(r);
    out.push_back(r);
  }
  {
    CheckResult r{.name = "certificates are monotone in epsilon", .tolerance = 0.0};
    for (int k = 0; k < 200; ++k) {
      const AngleSumGame g = detail::random_angle_game(rng, 0.0);
      const double t = rng.uniform(0.0, kHalfPi);
      const double p = rng.uniform(0.0, kHalfPi);
      const auto f1 = [&](double a, double b) { return g.eval(a, b, 0); };
      const auto f2 = [&](double a, double b) { return g.eval(a, b, 1); };
      const double eps = rng.uniform(1e-8, 1e-2);
      const NashCertificate tight =
          verify_nash(f1, f2, t, p, {0.0, kHalfPi}, {0.0, kHalfPi}, eps, 200);
      const NashCertificate loose =
          verify_nash(f1, f2, t, p, {0.0, kHalfPi}, {0.0, kHalfPi}, 10.0 * eps, 200);
      if (tight.pass && !loose.pass) r.max_deviation = 1.0;
    }
    detail::finish(r);
    out.push_back(r);
  }
  return out;
}

inline std::vector<CheckResult> reduction_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  Rng rng(seed);

  const auto make_report = [&](int model) -> ReductionReport {
    const std::size_t dim = model == 4 ? 4 : 2;
    const HermitianOperator p1(random_hermitian(rng, dim, 1.0));
    const HermitianOperator p2(random_hermitian(rng, dim, 1.0));
    switch (model) {
      case 0: return reduce_one_qubit_pure(p1, p2);
      case 1: return reduce_one_qubit_mixed(p1, p2, 0.0);
      case 2: return reduce_one_qubit_mixed(p1, p2, 0.25);
      case 3: return reduce_one_qubit_mixed(p1, p2, 0.5);
      default: return reduce_two_qubit(p1, p2);
    }
  };

  {
    CheckResult r{.name = "engine payoff equals the extracted sinusoid",
                  .tolerance = 1e-9};
    for (int model = 0; model < 5; ++model)
      for (int k = 0; k < 6; ++k) {
        const ReductionReport rep = make_report(model);
        for (int i = 0; i < 50; ++i)
          for (int j = 0; j < 50; ++j) {
            const double t = kQuarterPi * i / 49.0;
            const double p = kQuarterPi * j / 49.0;
            for (std::size_t pl = 0; pl < 2; ++pl) {
              const double direct = physical_payoff(rep, t, p, pl);
              const double model_v = rep.sinusoids[pl].eval(t + p);
              r.max_deviation = std::max(r.max_deviation, std::abs(direct - model_v));
            }
          }
      }
    detail::finish(r);
    out.push_back(r);
  }
  {
    CheckResult r{.name = "payoffs depend on the angle sum only", .tolerance = 1e-12};
    for (int model = 0; model < 5; ++model) {
      const ReductionReport rep = make_report(model);
      for (int k = 0; k < 100; ++k) {
        const double t = rng.uniform(0.0, kQuarterPi);
        const double p = rng.uniform(0.0, kQuarterPi);
        const double shift = rng.uniform(-std::min(t, kQuarterPi - p),
                                         std::min(p, kQuarterPi - t));
        for (std::size_t pl = 0; pl < 2; ++pl)
          r.max_deviation = std::max(
              r.max_deviation, std::abs(physical_payoff(rep, t, p, pl) -
                                        physical_payoff(rep, t + shift, p - shift, pl)));
      }
    }
    detail::finish(r);
    out.push_back(r);
  }
  {
    CheckResult r{.name = "offset reference rows are exact", .tolerance = 1e-12};
    for (int model = 0; model < 5; ++model)
      for (int k = 0; k < 10; ++k) {
        const ReductionReport rep = make_report(model);
        for (const FormulaResidual& row : rep.formula_residuals)
          if (row.label.find(".offset") != std::string::npos)
            r.max_deviation = std::max(r.max_deviation, row.residual);
      }
    detail::finish(r);
    out.push_back(r);
  }
  {
    CheckResult r{.name = "mixed model limits match the pure cases",
                  .tolerance = 1e-12};
    for (int k = 0; k < 20; ++k) {
      const HermitianOperator p1(random_hermitian(rng, 2, 1.0));
      const HermitianOperator p2(random_hermitian(rng, 2, 1.0));
      // p = 0 is the pure |1><1| initial state
      const ReductionReport mixed0 = reduce_one_qubit_mixed(p1, p2, 0.0);
      ComplexMatrix one(2, 2);
      one(1, 1) = 1.0;
      QuantumGame pure_one(DensityMatrix(std::move(one)),
                           {StrategySpace::planar(0.0, kQuarterPi),
                            StrategySpace::planar(0.0, kQuarterPi)},
                           {p1, p2}, Ordering::Dynamic);
      for (std::size_t pl = 0; pl < 2; ++pl) {
        const SinusoidalPayoff direct = extract_sinusoid([&](double x) {
          const StrategyProfile profile{StrategyChoice(0.5 * x), StrategyChoice(0.5 * x)};
          return payoff(pure_one, profile, pl);
        });
        r.max_deviation = std::max(
            r.max_deviation, std::abs(direct.offset - mixed0.sinusoids[pl].offset));
        r.max_deviation = std::max(
            r.max_deviation,
            std::abs(direct.sin_coeff - mixed0.sinusoids[pl].sin_coeff));
        r.max_deviation = std::max(
            r.max_deviation,
            std::abs(direct.cos_coeff - mixed0.sinusoids[pl].cos_coeff));
      }
      // p = 1/2 is maximally mixed: both players degenerate
      const ReductionReport mixed_half = reduce_one_qubit_mixed(p1, p2, 0.5);
      for (std::size_t pl = 0; pl < 2; ++pl)
        r.max_deviation = std::max(r.max_deviation,
                                   mixed_half.sinusoids[pl].amplitude());
    }
    detail::finish(r);
    out.push_back(r);
  }
  return out;
}

inline std::vector<CheckResult> full_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  for (const auto& part :
       {matrix_suite(seed), engine_suite(seed + 1), angle_game_suite(seed + 2),
        oracle_suite(seed + 3), reduction_suite(seed + 4)})
    out.insert(out.end(), part.begin(), part.end());
  return out;
}

/// Checks on one concrete game definition (used by `check` with a file).
inline std::vector<CheckResult> game_checks(const QuantumGame& game,
                                            std::uint64_t seed) {
  std::vector<CheckResult> out;
  Rng rng(seed);
  {
    CheckResult r{.name = "final states keep unit trace", .tolerance = 1e-12};
    for (int k = 0; k < 50; ++k) {
      StrategyProfile profile;
      for (const StrategySpace& s : game.players()) {
        const double lo = s.kind == StrategyKind::PlanarRotation ? s.lo : 0.0;
        const double hi = s.kind == StrategyKind::PlanarRotation ? s.hi : kHalfPi;
        if (s.kind == StrategyKind::ExplicitSet)
          profile.emplace_back(s.members[rng.index(s.members.size())]);
        else
          profile.emplace_back(rng.uniform(lo, hi));
      }
      const DensityMatrix rf = final_state(game, profile);
      r.max_deviation =
          std::max(r.max_deviation, std::abs(trace(rf.matrix()) - cplx(1.0, 0.0)));
    }
    detail::finish(r);
    out.push_back(r);
  }
  if (game.player_count() == 2) {
    CheckResult r{.name = "payoffs do not commute with every sampled strategy",
                  .tolerance = 0.0};
    std::vector<double> angles;
    for (int k = 0; k < 16; ++k) angles.push_back(rng.uniform(0.0, kHalfPi));
    const NonTrivialityReport rep = non_triviality(game, angles);
    r.max_deviation = rep.trivial ? 1.0 : 0.0;
    r.detail = rep.trivial ? "payoff and strategy operators commute; the game is "
                             "effectively classical"
                           : "";
    detail::finish(r);
    out.push_back(r);
  }
  return out;
}

}  // namespace qgame
