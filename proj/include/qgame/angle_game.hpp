#pragma once

// Two-player game on the angle square [0, pi/2]^2 where each payoff is
//   f_i(theta, phi) = offset_i + amplitude_i * sin(theta + phi + phase_i).
// For amplitudes > 0 and phases in [-pi/2, pi/2] the best response is a
// clamp, and the Nash set has a closed form: a unique point away from
// phase equality, a continuum segment at it, and a degenerate outcome
// when an amplitude vanishes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qgame/matrix.hpp"
#include "qgame/oracle.hpp"

namespace qgame {

/// Amplitude-phase form of one sinusoidal payoff.
struct SinusoidPolar {
  double offset = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;
};

struct DegenerateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Closed-form Nash outcome. `kind` selects which fields are meaningful:
/// Unique fills (theta, phi); Continuum fills (phase, theta_lo, theta_hi,
/// angle_sum) and the points are {(t, angle_sum - t) : t in [lo, hi]};
/// Degenerate lists the constant-payoff players.
struct NashSolution {
  enum class Kind { Unique, Continuum, Degenerate };

  Kind kind = Kind::Unique;
  double theta = 0.0;
  double phi = 0.0;
  double phase = 0.0;
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  double angle_sum = 0.0;
  std::vector<std::size_t> degenerate_players;
  std::string note;
  int case_index = 0;  // 1..6 unique regions, 0 continuum, -1 degenerate
  std::optional<NashCertificate> certificate;
};

class AngleSumGame {
 public:
  static constexpr double kDegenerateTol = 1e-12;
  static constexpr double kPhaseEqualityTol = 1e-9;

  AngleSumGame(SinusoidPolar player1, SinusoidPolar player2)
      : players_{player1, player2} {
    for (const SinusoidPolar& p : players_) {
      if (!std::isfinite(p.offset) || !std::isfinite(p.amplitude) ||
          !std::isfinite(p.phase))
        throw std::invalid_argument("sinusoid parameters must be finite");
      if (p.amplitude < 0.0)
        throw std::invalid_argument("amplitude must be non-negative");
    }
  }

  const SinusoidPolar& player(std::size_t i) const {
    if (i >= 2) throw std::invalid_argument("player index out of range");
    return players_[i];
  }

  bool degenerate(std::size_t i) const {
    return player(i).amplitude <= kDegenerateTol;
  }

  bool any_degenerate() const { return degenerate(0) || degenerate(1); }

  bool phase_in_band(std::size_t i) const {
    return player(i).phase >= -kHalfPi && player(i).phase <= kHalfPi;
  }

  double eval(double theta, double phi, std::size_t i) const {
    check_domain(theta, "theta");
    check_domain(phi, "phi");
    const SinusoidPolar& p = player(i);
    return p.offset + p.amplitude * std::sin(theta + phi + p.phase);
  }

  double best_response_p1(double phi) const { return best_response_one(0, phi); }
  double best_response_p2(double theta) const { return best_response_one(1, theta); }

  std::pair<double, double> best_response(double theta, double phi) const {
    return {best_response_p1(phi), best_response_p2(theta)};
  }

  NashSolution solve_closed_form(double phase_equality_tol = kPhaseEqualityTol) const;

  struct IterationRecord {
    std::vector<std::pair<double, double>> trajectory;
    bool converged = false;
    bool cycle_detected = false;
    std::size_t rounds = 0;
    std::pair<double, double> last{0.0, 0.0};
  };

  IterationRecord iterate_best_response(std::pair<double, double> start,
                                        std::size_t max_rounds = 64,
                                        double tol = 1e-12) const;

  NashCertificate certify(double theta, double phi, double epsilon = 1e-6,
                          std::size_t grid_n = 500) const {
    const Interval box{0.0, kHalfPi};
    const double lip =
        2.0 * std::max(players_[0].amplitude, players_[1].amplitude);
    return verify_nash(
        [this](double t, double p) { return eval(t, p, 0); },
        [this](double t, double p) { return eval(t, p, 1); }, theta, phi, box, box,
        epsilon, grid_n, lip);
  }

 private:
  static void check_domain(double x, const char* name) {
    if (!(x >= 0.0 && x <= kHalfPi))
      throw std::domain_error(std::string(name) + " outside [0, pi/2]");
  }

  void require_band(std::size_t i) const {
    if (!phase_in_band(i))
      throw std::invalid_argument("player " + std::to_string(i + 1) +
                                  " phase outside [-pi/2, pi/2]");
  }

  double best_response_one(std::size_t i, double other) const {
    if (degenerate(i))
      throw DegenerateError("player " + std::to_string(i + 1) +
                            " payoff is constant; every angle is a best response");
    require_band(i);
    check_domain(other, i == 0 ? "phi" : "theta");
    return std::clamp(kHalfPi - other - player(i).phase, 0.0, kHalfPi);
  }

  SinusoidPolar players_[2];
};

inline NashSolution AngleSumGame::solve_closed_form(double phase_equality_tol) const {
  NashSolution out;
  if (any_degenerate()) {
    out.kind = NashSolution::Kind::Degenerate;
    out.case_index = -1;
    for (std::size_t i = 0; i < 2; ++i)
      if (degenerate(i)) out.degenerate_players.push_back(i);
    out.note = "constant payoff for player";
    out.note += out.degenerate_players.size() == 2 ? "s 1 and 2" : out.degenerate_players
                .front() == 0 ? " 1" : " 2";
    out.note += "; every strategy is a best response, no isolated equilibrium";
    return out;
  }
  require_band(0);
  require_band(1);
  const double s1 = players_[0].phase;
  const double s2 = players_[1].phase;

  if (std::abs(s1 - s2) <= phase_equality_tol) {
    const double shared = 0.5 * (s1 + s2);
    out.kind = NashSolution::Kind::Continuum;
    out.case_index = 0;
    out.phase = shared;
    out.theta_lo = std::max(0.0, -shared);
    out.theta_hi = std::min(kHalfPi, kHalfPi - shared);
    out.angle_sum = kHalfPi - shared;
    out.note = "equilibrium segment theta + phi = pi/2 - shared phase";
    return out;
  }

  const auto member = [&](int c) -> bool {
    switch (c) {
      case 1: return s1 <= 0.0 && s2 <= 0.0 && s1 > s2;
      case 2: return s1 <= 0.0 && s2 <= 0.0 && s1 < s2;
      case 3: return s1 <= 0.0 && s2 >= 0.0;
      case 4: return s1 >= 0.0 && s2 <= 0.0;
      case 5: return s1 >= 0.0 && s2 >= 0.0 && s1 > s2;
      default: return s1 >= 0.0 && s2 >= 0.0 && s1 < s2;
    }
  };
  const auto point_of = [&](int c) -> std::pair<double, double> {
    switch (c) {
      case 1: return {-s1 + 0.0, kHalfPi};
      case 2: return {kHalfPi, -s2 + 0.0};
      case 3: return {kHalfPi, 0.0};
      case 4: return {0.0, kHalfPi};
      case 5: return {0.0, kHalfPi - s2};
      default: return {kHalfPi - s1, 0.0};
    }
  };

  // On a region boundary (a phase exactly zero) several rows apply and
  // must yield one point.
  int chosen = 0;
  std::pair<double, double> pt{0.0, 0.0};
  for (int c = 1; c <= 6; ++c) {
    if (!member(c)) continue;
    const std::pair<double, double> p = point_of(c);
    if (chosen == 0) {
      chosen = c;
      pt = p;
    } else if (std::abs(p.first - pt.first) > 1e-15 ||
               std::abs(p.second - pt.second) > 1e-15) {
      throw std::logic_error("equilibrium table rows disagree on a region boundary");
    }
  }
  if (chosen == 0) throw std::logic_error("equilibrium table does not cover the phases");

  out.kind = NashSolution::Kind::Unique;
  out.case_index = chosen;
  out.theta = pt.first;
  out.phi = pt.second;
  return out;
}

inline AngleSumGame::IterationRecord AngleSumGame::iterate_best_response(
    std::pair<double, double> start, std::size_t max_rounds, double tol) const {
  if (any_degenerate())
    throw DegenerateError("best-response iteration undefined for constant payoffs");
  IterationRecord rec;
  rec.trajectory.push_back(start);
  rec.last = start;

  const std::pair<double, double> joint = best_response(start.first, start.second);
  if (std::abs(joint.first - start.first) <= tol &&
      std::abs(joint.second - start.second) <= tol) {
    rec.converged = true;
    return rec;
  }

  std::pair<double, double> cur = start;
  for (std::size_t r = 1; r <= max_rounds; ++r) {
    const std::pair<double, double> prev = cur;
    cur.first = best_response_p1(cur.second);
    cur.second = best_response_p2(cur.first);
    rec.trajectory.push_back(cur);
    rec.rounds = r;
    rec.last = cur;
    if (std::abs(cur.first - prev.first) <= tol &&
        std::abs(cur.second - prev.second) <= tol) {
      rec.converged = true;
      break;
    }
    const std::size_t window = rec.trajectory.size() >= 10 ? rec.trajectory.size() - 10
                                                           : 0;
    for (std::size_t k = window; k + 2 < rec.trajectory.size(); ++k) {
      const auto& old = rec.trajectory[k];
      if (std::abs(old.first - cur.first) <= tol &&
          std::abs(old.second - cur.second) <= tol) {
        rec.cycle_detected = true;
        break;
      }
    }
    if (rec.cycle_detected) break;
  }
  return rec;
}

inline void attach_certificate(const AngleSumGame& game, NashSolution& solution,
                               double epsilon = 1e-6, std::size_t grid_n = 500) {
  switch (solution.kind) {
    case NashSolution::Kind::Unique:
      solution.certificate = game.certify(solution.theta, solution.phi, epsilon, grid_n);
      break;
    case NashSolution::Kind::Continuum: {
      const double mid = 0.5 * (solution.theta_lo + solution.theta_hi);
      solution.certificate =
          game.certify(mid, solution.angle_sum - mid, epsilon, grid_n);
      break;
    }
    case NashSolution::Kind::Degenerate:
      break;
  }
}

}  // namespace qgame
