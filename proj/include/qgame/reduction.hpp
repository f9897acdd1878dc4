#pragma once

// Reduce the three qubit models (one-qubit pure, one-qubit mixed,
// two-qubit entangled) to the angle-sum game. The numeric path is
// authoritative: coefficients come from sampling the engine payoff,
// never from the closed-form shortcuts; those shortcuts are reported
// alongside as reference rows with their residuals.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qgame/angle_game.hpp"
#include "qgame/engine.hpp"
#include "qgame/matrix.hpp"
#include "qgame/oracle.hpp"

namespace qgame {

struct InadmissibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Quadrature form f(x) = offset + sin_coeff sin(2x) + cos_coeff cos(2x)
/// of one player's payoff along the physical diagonal x = theta + phi.
struct SinusoidalPayoff {
  static constexpr double kCoeffTol = 1e-12;

  double offset = 0.0;
  double sin_coeff = 0.0;
  double cos_coeff = 0.0;

  double eval(double x) const {
    return offset + sin_coeff * std::sin(2.0 * x) + cos_coeff * std::cos(2.0 * x);
  }
  double amplitude() const { return std::hypot(sin_coeff, cos_coeff); }
  double phase() const { return std::atan2(cos_coeff, sin_coeff); }
  bool degenerate() const { return amplitude() <= kCoeffTol; }
  // the solver needs the phase inside [-pi/2, pi/2], i.e. sin_coeff >= 0
  bool admissible() const { return degenerate() || sin_coeff >= -kCoeffTol; }

  SinusoidPolar polar() const {
    double ph = phase();
    if (admissible()) ph = std::clamp(ph, -kHalfPi, kHalfPi);
    return {offset, amplitude(), ph};
  }
};

/// One reference-formula row: the closed-form value as printed in the
/// usual derivations next to the numerically extracted one.
struct FormulaResidual {
  std::string label;
  double reference = 0.0;
  double numeric = 0.0;
  double residual = 0.0;
};

struct ReductionReport {
  QuantumGame game;
  std::string model;
  double mixing = 0.0;  // meaningful for the mixed model only
  std::array<SinusoidalPayoff, 2> sinusoids;
  std::array<SinusoidPolar, 2> polar;
  std::array<bool, 2> admissible{};
  std::array<bool, 2> degenerate{};
  double angle_scale = 2.0;
  Interval physical_range{0.0, kQuarterPi};
  std::vector<FormulaResidual> formula_residuals;
  bool has_aggregates = false;
  std::array<double, 2> cos_aggregate{};  // A: enters the cos coefficient as A/4
  std::array<double, 2> sin_aggregate{};  // B: enters the sin coefficient as -B/2

  AngleSumGame solver_game() const { return AngleSumGame(polar[0], polar[1]); }
  bool all_admissible() const { return admissible[0] && admissible[1]; }
  bool any_degenerate() const { return degenerate[0] || degenerate[1]; }
};

// Exact three-point extraction (x = 0, pi/4, pi/2), then a dense
// least-squares cross-check that the payoff really has this form.
inline SinusoidalPayoff extract_sinusoid(const std::function<double(double)>& fn) {
  const double f0 = fn(0.0);
  const double fq = fn(kQuarterPi);
  const double fh = fn(kHalfPi);
  SinusoidalPayoff s;
  s.offset = 0.5 * (f0 + fh);
  s.cos_coeff = f0 - s.offset;
  s.sin_coeff = fq - s.offset;
  std::vector<std::pair<double, double>> samples;
  samples.reserve(1000);
  for (int k = 0; k < 1000; ++k) {
    const double x = kHalfPi * static_cast<double>(k) / 999.0;
    samples.emplace_back(x, fn(x));
  }
  const SinusoidFit fit = fit_sinusoid(samples);
  if (fit.max_residual > 1e-9)
    throw std::invalid_argument(
        "extract_sinusoid: payoff is not offset + a sin(2x) + b cos(2x); "
        "fit residual " + std::to_string(fit.max_residual));
  return s;
}

namespace detail {

inline double payoff_on_diagonal(const QuantumGame& game, double x,
                                 std::size_t player) {
  const double half = 0.5 * x;
  const StrategyProfile profile{StrategyChoice(half), StrategyChoice(half)};
  return payoff(game, profile, player);
}

inline void push_row(std::vector<FormulaResidual>& rows, std::string label,
                     double reference, double numeric) {
  rows.push_back({std::move(label), reference, numeric,
                  std::abs(reference - numeric)});
}

inline void require_offset_identity(const SinusoidalPayoff& s, double reference,
                                    std::size_t player) {
  if (std::abs(s.offset - reference) > 1e-12)
    throw std::logic_error("extracted offset for player " +
                           std::to_string(player + 1) +
                           " violates the trace identity");
}

inline void finish_report(ReductionReport& report) {
  for (std::size_t i = 0; i < 2; ++i) {
    report.polar[i] = report.sinusoids[i].polar();
    report.admissible[i] = report.sinusoids[i].admissible();
    report.degenerate[i] = report.sinusoids[i].degenerate();
  }
}

inline ReductionReport one_qubit_report(ComplexMatrix initial,
                                        const HermitianOperator& payoff1,
                                        const HermitianOperator& payoff2,
                                        std::optional<double> mixing) {
  if (payoff1.matrix().rows() != 2 || payoff2.matrix().rows() != 2)
    throw std::invalid_argument("one-qubit models need 2x2 payoff operators");
  QuantumGame game(DensityMatrix(std::move(initial)),
                   {StrategySpace::planar(0.0, kQuarterPi),
                    StrategySpace::planar(0.0, kQuarterPi)},
                   {payoff1, payoff2}, Ordering::Dynamic);
  ReductionReport report{.game = std::move(game)};
  report.model = mixing ? "one_qubit_mixed" : "one_qubit_pure";
  report.mixing = mixing.value_or(0.0);

  const std::array<const HermitianOperator*, 2> ops{&payoff1, &payoff2};
  for (std::size_t i = 0; i < 2; ++i) {
    report.sinusoids[i] = extract_sinusoid([&](double x) {
      return payoff_on_diagonal(report.game, x, i);
    });
    const ComplexMatrix& p = ops[i]->matrix();
    const double a = p(0, 0).real();
    const double d = p(1, 1).real();
    const double bb = 2.0 * p(0, 1).real();  // b + conj(b)
    require_offset_identity(report.sinusoids[i], 0.5 * (a + d), i);

    const std::string tag = "p" + std::to_string(i + 1);
    const SinusoidalPayoff& s = report.sinusoids[i];
    detail::push_row(report.formula_residuals, tag + ".offset=(a+d)/2", 0.5 * (a + d),
             s.offset);
    if (!mixing) {
      push_row(report.formula_residuals, tag + ".sin=(a-d)/2", 0.5 * (a - d),
               s.sin_coeff);
      push_row(report.formula_residuals, tag + ".cos=(b+b~)/2", 0.5 * bb,
               s.cos_coeff);
      push_row(report.formula_residuals,
               tag + ".amplitude=sqrt((a-d)^2+(b+b~)^2)/2",
               0.5 * std::hypot(a - d, bb), s.amplitude());
      push_row(report.formula_residuals, tag + ".phase=atan((b+b~)/(a-d))",
               std::atan(bb / (a - d)), s.phase());
    } else {
      const double mp = *mixing;
      push_row(report.formula_residuals, tag + ".sin=(1-2p)(b+b~)/2",
               (1.0 - 2.0 * mp) * 0.5 * bb, s.sin_coeff);
      push_row(report.formula_residuals, tag + ".cos=(1-p)(d-a)",
               (1.0 - mp) * (d - a), s.cos_coeff);
      push_row(report.formula_residuals,
               tag + ".amplitude=sqrt((1-p)^2(d-a)^2+(1-2p)^2(b+b~)^2)/2",
               0.5 * std::hypot((1.0 - mp) * (d - a), (1.0 - 2.0 * mp) * bb),
               s.amplitude());
      push_row(report.formula_residuals,
               tag + ".phase=atan((1-p)(d-a)/((1-2p)(b+b~)))",
               std::atan((1.0 - mp) * (d - a) / ((1.0 - 2.0 * mp) * bb)),
               s.phase());
    }
  }
  finish_report(report);
  return report;
}

}  // namespace detail

inline ReductionReport reduce_one_qubit_pure(const HermitianOperator& payoff1,
                                             const HermitianOperator& payoff2) {
  // |+><+|, written with exact entries
  ComplexMatrix rho = ComplexMatrix::from_rows({{0.5, 0.5}, {0.5, 0.5}});
  return detail::one_qubit_report(std::move(rho), payoff1, payoff2, std::nullopt);
}

inline ReductionReport reduce_one_qubit_mixed(const HermitianOperator& payoff1,
                                              const HermitianOperator& payoff2,
                                              double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("mixing weight must lie in [0, 1]");
  ComplexMatrix rho = ComplexMatrix::from_rows({{p, 0.0}, {0.0, 1.0 - p}});
  return detail::one_qubit_report(std::move(rho), payoff1, payoff2, p);
}

inline ReductionReport reduce_two_qubit(const HermitianOperator& payoff1,
                                        const HermitianOperator& payoff2) {
  if (payoff1.matrix().rows() != 4 || payoff2.matrix().rows() != 4)
    throw std::invalid_argument("the two-qubit model needs 4x4 payoff operators");
  // (|01> + |10>)/sqrt(2), written with exact entries
  ComplexMatrix rho(4, 4);
  rho(1, 1) = rho(1, 2) = rho(2, 1) = rho(2, 2) = 0.5;
  QuantumGame game(DensityMatrix(std::move(rho)),
                   {StrategySpace::planar(0.0, kQuarterPi, 0),
                    StrategySpace::planar(0.0, kQuarterPi, 1)},
                   {payoff1, payoff2}, Ordering::Static);
  ReductionReport report{.game = std::move(game)};
  report.model = "two_qubit_bell";
  report.has_aggregates = true;

  const std::array<const HermitianOperator*, 2> ops{&payoff1, &payoff2};
  for (std::size_t i = 0; i < 2; ++i) {
    report.sinusoids[i] = extract_sinusoid([&](double x) {
      return detail::payoff_on_diagonal(report.game, x, i);
    });
    const ComplexMatrix& x = ops[i]->matrix();
    const double diag_sum =
        x(0, 0).real() + x(1, 1).real() + x(2, 2).real() + x(3, 3).real();
    const double offset_ref =
        0.25 * (diag_sum + 2.0 * x(1, 2).real() - 2.0 * x(0, 3).real());
    const double agg_a = -x(0, 0).real() + x(1, 1).real() + x(2, 2).real() -
                         x(3, 3).real() + 2.0 * x(1, 2).real() +
                         2.0 * x(0, 3).real();
    const double agg_b = x(0, 1).real() + x(0, 2).real() + x(1, 3).real() +
                         x(2, 3).real();
    report.cos_aggregate[i] = agg_a;
    report.sin_aggregate[i] = agg_b;
    detail::require_offset_identity(report.sinusoids[i], offset_ref, i);

    const std::string tag = "p" + std::to_string(i + 1);
    const SinusoidalPayoff& s = report.sinusoids[i];
    detail::push_row(report.formula_residuals,
             tag + ".offset=(sum_diag+2Re(x23)-2Re(x14))/4", offset_ref, s.offset);
    detail::push_row(report.formula_residuals, tag + ".sin=-B/2", -0.5 * agg_b, s.sin_coeff);
    detail::push_row(report.formula_residuals, tag + ".cos=A/4", 0.25 * agg_a, s.cos_coeff);
    detail::push_row(report.formula_residuals, tag + ".amplitude=sqrt(A^2/4+4B^2)",
             std::sqrt(0.25 * agg_a * agg_a + 4.0 * agg_b * agg_b), s.amplitude());
    detail::push_row(report.formula_residuals, tag + ".phase=-atan(A/B)",
             -std::atan(agg_a / agg_b), s.phase());
    detail::push_row(report.formula_residuals, tag + ".amplitude=sqrt(A^2+4B^2)/4",
             0.25 * std::sqrt(agg_a * agg_a + 4.0 * agg_b * agg_b), s.amplitude());
    detail::push_row(report.formula_residuals, tag + ".phase=atan2(A/4,-B/2)",
             std::atan2(0.25 * agg_a, -0.5 * agg_b), s.phase());
  }
  detail::finish_report(report);
  return report;
}

inline double physical_payoff(const ReductionReport& report, double theta, double phi,
                              std::size_t player) {
  const StrategyProfile profile{StrategyChoice(theta), StrategyChoice(phi)};
  return payoff(report.game, profile, player);
}

// Solve in canonical coordinates, rescale to the physical square, and
// certify the result against the engine payoff itself.
inline NashSolution solve_physical(const ReductionReport& report,
                                   double epsilon = 1e-6, std::size_t grid_n = 500,
                                   double phase_equality_tol =
                                       AngleSumGame::kPhaseEqualityTol,
                                   bool certify = true) {
  for (std::size_t i = 0; i < 2; ++i)
    if (!report.admissible[i] && !report.degenerate[i])
      throw InadmissibleError(
          "player " + std::to_string(i + 1) +
          " has a negative sin coefficient (phase outside [-pi/2, pi/2]); "
          "the closed-form solver does not apply");
  const AngleSumGame canonical = report.solver_game();
  NashSolution sol = canonical.solve_closed_form(phase_equality_tol);
  if (sol.kind == NashSolution::Kind::Degenerate) return sol;

  const double inv = 1.0 / report.angle_scale;
  sol.theta *= inv;
  sol.phi *= inv;
  sol.theta_lo *= inv;
  sol.theta_hi *= inv;
  sol.angle_sum *= inv;

  if (!certify) return sol;
  double pt_theta = sol.theta, pt_phi = sol.phi;
  if (sol.kind == NashSolution::Kind::Continuum) {
    pt_theta = 0.5 * (sol.theta_lo + sol.theta_hi);
    pt_phi = sol.angle_sum - pt_theta;
  }
  const double lip = report.angle_scale *
                     std::max(report.polar[0].amplitude, report.polar[1].amplitude);
  sol.certificate = verify_nash(
      [&](double t, double p) { return physical_payoff(report, t, p, 0); },
      [&](double t, double p) { return physical_payoff(report, t, p, 1); },
      pt_theta, pt_phi, report.physical_range, report.physical_range, epsilon,
      grid_n, lip);
  return sol;
}

}  // namespace qgame
