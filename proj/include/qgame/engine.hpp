#pragma once

// N-player trace-payoff engine. A game is (strategy spaces, initial
// density matrix, payoff operators); a strategy profile resolves to
// unitaries, the final state is their ordered conjugation of the
// initial state, and player i receives Tr(P_i rho_final).

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qgame/matrix.hpp"

namespace qgame {

enum class StrategyKind { PlanarRotation, ExplicitSet, UnrestrictedUnitary };

enum class Ordering { Static, Dynamic };

/// One player's admissible moves. Planar spaces hold a closed angle
/// interval; explicit sets enumerate unitaries; unrestricted spaces
/// accept any unitary of the right dimension. `target` embeds a 2x2
/// move on one tensor factor of a multi-qubit state.
struct StrategySpace {
  StrategyKind kind = StrategyKind::PlanarRotation;
  double lo = 0.0;
  double hi = kHalfPi;
  std::vector<ComplexMatrix> members;
  std::optional<std::size_t> target;

  static StrategySpace planar(double lo, double hi,
                              std::optional<std::size_t> target = {}) {
    StrategySpace s;
    s.kind = StrategyKind::PlanarRotation;
    s.lo = lo;
    s.hi = hi;
    s.target = target;
    return s;
  }

  static StrategySpace explicit_set(std::vector<ComplexMatrix> members,
                                    std::optional<std::size_t> target = {}) {
    StrategySpace s;
    s.kind = StrategyKind::ExplicitSet;
    s.members = std::move(members);
    s.target = target;
    return s;
  }

  static StrategySpace unrestricted(std::optional<std::size_t> target = {}) {
    StrategySpace s;
    s.kind = StrategyKind::UnrestrictedUnitary;
    s.target = target;
    return s;
  }
};

using StrategyChoice = std::variant<double, ComplexMatrix>;
using StrategyProfile = std::vector<StrategyChoice>;

namespace detail {

inline bool power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

inline std::size_t qubit_count(std::size_t dim) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < dim) ++k;
  return k;
}

inline ComplexMatrix embed_local(const ComplexMatrix& u, std::size_t target,
                                 std::size_t factors) {
  ComplexMatrix out = ComplexMatrix::identity(1);
  for (std::size_t f = 0; f < factors; ++f)
    out = tensor(out, f == target ? u : ComplexMatrix::identity(2));
  return out;
}

}  // namespace detail

class QuantumGame {
 public:
  QuantumGame(DensityMatrix initial_state, std::vector<StrategySpace> players,
              std::vector<HermitianOperator> payoffs,
              Ordering ordering = Ordering::Static)
      : initial_state_(std::move(initial_state)),
        players_(std::move(players)),
        payoffs_(std::move(payoffs)),
        ordering_(ordering) {
    const std::size_t dim = initial_state_.dimension();
    if (players_.empty()) throw std::invalid_argument("game needs at least one player");
    if (payoffs_.size() != players_.size())
      throw std::invalid_argument("need one payoff operator per player");
    for (const HermitianOperator& p : payoffs_)
      if (p.matrix().rows() != dim)
        throw std::invalid_argument("payoff dimension differs from the state");
    for (const StrategySpace& s : players_) {
      if (s.kind == StrategyKind::PlanarRotation && !(s.lo <= s.hi))
        throw std::invalid_argument("planar interval has lo > hi");
      if (s.target) {
        if (!detail::power_of_two(dim) || dim < 2)
          throw std::invalid_argument("local targets need a power-of-two dimension");
        if (*s.target >= detail::qubit_count(dim))
          throw std::invalid_argument("target factor index out of range");
      }
      for (const ComplexMatrix& m : s.members) {
        const std::size_t want = s.target ? 2 : dim;
        if (m.rows() != want || m.cols() != want)
          throw std::invalid_argument("explicit member has wrong dimension");
        const Validation v = check_unitary(m, kDefaultTol);
        if (!v.ok) throw std::invalid_argument("explicit member: " + v.violation);
      }
    }
  }

  std::size_t dimension() const { return initial_state_.dimension(); }
  std::size_t player_count() const { return players_.size(); }
  const DensityMatrix& initial_state() const { return initial_state_; }
  const std::vector<StrategySpace>& players() const { return players_; }
  const HermitianOperator& payoff_operator(std::size_t i) const {
    if (i >= payoffs_.size()) throw std::invalid_argument("payoff index out of range");
    return payoffs_[i];
  }
  Ordering ordering() const { return ordering_; }

 private:
  DensityMatrix initial_state_;
  std::vector<StrategySpace> players_;
  std::vector<HermitianOperator> payoffs_;
  Ordering ordering_;
};

// Resolve one player's choice to a full-dimension unitary. Angles mean
// the planar rotation by that angle; explicit matrices must pass the
// unitary check, and for explicit sets must match a declared member.
inline ComplexMatrix resolve_unitary(const QuantumGame& game,
                                     const StrategyProfile& profile,
                                     std::size_t player) {
  if (profile.size() != game.player_count())
    throw std::invalid_argument("profile length differs from the player count");
  const StrategySpace& space = game.players()[player];
  const StrategyChoice& choice = profile[player];
  const std::size_t dim = game.dimension();

  ComplexMatrix local;
  if (std::holds_alternative<double>(choice)) {
    const double angle = std::get<double>(choice);
    if (!std::isfinite(angle))
      throw std::invalid_argument("strategy angle must be finite");
    if (space.kind == StrategyKind::ExplicitSet)
      throw std::invalid_argument("explicit-set strategy expects a matrix choice");
    if (space.kind == StrategyKind::PlanarRotation &&
        (angle < space.lo - 1e-12 || angle > space.hi + 1e-12))
      throw std::invalid_argument("angle " + std::to_string(angle) +
                                  " outside the declared interval");
    local = rotation(angle);
  } else {
    local = std::get<ComplexMatrix>(choice);
    const std::size_t want = space.target ? 2 : dim;
    if (local.rows() != want || local.cols() != want)
      throw std::invalid_argument("strategy matrix has wrong dimension");
    const Validation v = check_unitary(local, kDefaultTol);
    if (!v.ok) throw std::invalid_argument("strategy matrix: " + v.violation);
    if (space.kind == StrategyKind::ExplicitSet) {
      bool found = false;
      for (const ComplexMatrix& m : space.members)
        if (max_abs_diff(m, local) <= kDefaultTol) {
          found = true;
          break;
        }
      if (!found)
        throw std::invalid_argument("strategy matrix is not a member of the set");
    }
  }

  if (space.target) return detail::embed_local(local, *space.target,
                                               detail::qubit_count(dim));
  if (local.rows() != dim)
    throw std::invalid_argument("strategy dimension differs from the state");
  return local;
}

namespace detail {

inline ComplexMatrix composed_unitary(const QuantumGame& game,
                                      const StrategyProfile& profile, bool reversed) {
  ComplexMatrix w = ComplexMatrix::identity(game.dimension());
  const std::size_t n = game.player_count();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t player = reversed ? n - 1 - k : k;
    // player 1 acts first, so later factors multiply from the left
    w = resolve_unitary(game, profile, player) * w;
  }
  return w;
}

inline ComplexMatrix final_state_matrix(const QuantumGame& game,
                                        const StrategyProfile& profile) {
  const ComplexMatrix w = composed_unitary(game, profile, false);
  return w * game.initial_state().matrix() * dagger(w);
}

}  // namespace detail

inline DensityMatrix final_state(const QuantumGame& game,
                                 const StrategyProfile& profile) {
  return DensityMatrix(detail::final_state_matrix(game, profile), kDefaultTol);
}

inline double payoff(const QuantumGame& game, const StrategyProfile& profile,
                     std::size_t player, double imag_tol = kDefaultTol) {
  const ComplexMatrix rho = detail::final_state_matrix(game, profile);
  const cplx t = trace(game.payoff_operator(player).matrix() * rho);
  if (std::abs(t.imag()) > imag_tol)
    throw std::runtime_error("payoff has imaginary residue " +
                             std::to_string(t.imag()));
  return t.real();
}

inline std::vector<double> payoff_all(const QuantumGame& game,
                                      const StrategyProfile& profile,
                                      double imag_tol = kDefaultTol) {
  const ComplexMatrix rho = detail::final_state_matrix(game, profile);
  std::vector<double> out(game.player_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const cplx t = trace(game.payoff_operator(i).matrix() * rho);
    if (std::abs(t.imag()) > imag_tol)
      throw std::runtime_error("payoff has imaginary residue " +
                               std::to_string(t.imag()));
    out[i] = t.real();
  }
  return out;
}

// P = sum_j C_j |b_j><b_j| for an orthonormal set of kets; the payoff
// then equals the projection form sum_j C_j <b_j| rho_f |b_j>.
inline HermitianOperator projection_payoff(const std::vector<double>& coefficients,
                                           const std::vector<ComplexMatrix>& basis,
                                           double tol = kDefaultTol) {
  if (coefficients.size() != basis.size() || basis.empty())
    throw std::invalid_argument("projection_payoff: need one coefficient per ket");
  const std::size_t dim = basis.front().rows();
  for (const ComplexMatrix& b : basis)
    if (b.cols() != 1 || b.rows() != dim)
      throw std::invalid_argument("projection_payoff: kets must share one dimension");
  double gram_dev = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const cplx g = (dagger(basis[i]) * basis[j])(0, 0);
      const cplx want = i == j ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
      gram_dev = std::max(gram_dev, std::abs(g - want));
    }
  if (gram_dev > tol)
    throw std::invalid_argument(
        "projection_payoff: kets are not orthonormal (max Gram deviation " +
        std::to_string(gram_dev) + ")");
  ComplexMatrix p(dim, dim);
  for (std::size_t j = 0; j < basis.size(); ++j)
    p = p + coefficients[j] * ketbra(basis[j]);
  return HermitianOperator(std::move(p), tol);
}

/// Commutation diagnostics behind the "payoffs must not commute with
/// every reachable strategy" triviality condition.
struct NonTrivialityReport {
  double payoff_commutator = 0.0;
  std::array<std::array<double, 2>, 2> min_commutator{};  // [payoff][player]
  std::array<std::array<double, 2>, 2> max_commutator{};
  bool trivial = false;
};

inline NonTrivialityReport non_triviality(const QuantumGame& game,
                                          const std::vector<double>& sample_angles,
                                          double tol = kDefaultTol) {
  if (game.player_count() != 2)
    throw std::invalid_argument("non_triviality: two-player games only");
  NonTrivialityReport rep;
  rep.payoff_commutator = max_abs(commutator(game.payoff_operator(0).matrix(),
                                             game.payoff_operator(1).matrix()));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k) {
      const StrategySpace& space = game.players()[k];
      std::vector<ComplexMatrix> unitaries;
      if (space.kind == StrategyKind::ExplicitSet) {
        for (const ComplexMatrix& m : space.members) {
          StrategyProfile probe(2, StrategyChoice(m));
          unitaries.push_back(resolve_unitary(game, probe, k));
        }
      } else {
        for (double a : sample_angles) {
          const double angle = space.kind == StrategyKind::PlanarRotation
                                   ? std::clamp(a, space.lo, space.hi)
                                   : a;
          StrategyProfile probe(2, StrategyChoice(angle));
          unitaries.push_back(resolve_unitary(game, probe, k));
        }
      }
      if (unitaries.empty())
        throw std::invalid_argument("non_triviality: no sample strategies");
      double lo = 0.0, hi = 0.0;
      bool first = true;
      for (const ComplexMatrix& u : unitaries) {
        const double c = max_abs(commutator(game.payoff_operator(i).matrix(), u));
        lo = first ? c : std::min(lo, c);
        hi = first ? c : std::max(hi, c);
        first = false;
      }
      rep.min_commutator[i][k] = lo;
      rep.max_commutator[i][k] = hi;
    }
  const bool p1_inert = std::max(rep.max_commutator[0][0], rep.max_commutator[0][1]) <= tol;
  const bool p2_inert = std::max(rep.max_commutator[1][0], rep.max_commutator[1][1]) <= tol;
  rep.trivial = rep.payoff_commutator <= tol || p1_inert || p2_inert;
  return rep;
}

// Max entrywise difference between forward and reversed composition of
// the profile; zero for local moves on distinct factors.
inline double ordering_sensitivity(const QuantumGame& game,
                                   const StrategyProfile& profile) {
  const ComplexMatrix fwd = detail::composed_unitary(game, profile, false);
  const ComplexMatrix rev = detail::composed_unitary(game, profile, true);
  const ComplexMatrix& rho = game.initial_state().matrix();
  return max_abs_diff(fwd * rho * dagger(fwd), rev * rho * dagger(rev));
}

}  // namespace qgame
