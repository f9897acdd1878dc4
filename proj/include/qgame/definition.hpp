#pragma once

// JSON game definitions for the CLI. Matrix entries are either a bare
// number or an [re, im] pair; unknown keys are rejected so typos fail
// loudly instead of silently changing the game.

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qgame/engine.hpp"
#include "qgame/matrix.hpp"
#include "qgame/reduction.hpp"

namespace qgame {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ModelKind { OneQubitPure, OneQubitMixed, TwoQubitBell, Custom };

inline std::string model_name(ModelKind m) {
  switch (m) {
    case ModelKind::OneQubitPure: return "one_qubit_pure";
    case ModelKind::OneQubitMixed: return "one_qubit_mixed";
    case ModelKind::TwoQubitBell: return "two_qubit_bell";
    default: return "custom";
  }
}

struct PlayerDecl {
  StrategyKind kind = StrategyKind::PlanarRotation;
  double lo = 0.0;
  double hi = kHalfPi;
  std::vector<ComplexMatrix> members;
  std::optional<std::size_t> target;

  bool operator==(const PlayerDecl&) const = default;
};

struct Tolerances {
  double hermitian = kDefaultTol;
  double density = kDefaultTol;
  double phase_equality = 1e-9;

  bool operator==(const Tolerances&) const = default;
};

struct GameDefinition {
  ModelKind model = ModelKind::OneQubitPure;
  double mixing = 0.0;  // one_qubit_mixed only
  ComplexMatrix payoff1;
  ComplexMatrix payoff2;
  // custom model
  std::size_t dimension = 2;
  ComplexMatrix initial_state;
  std::vector<PlayerDecl> players;
  Ordering ordering = Ordering::Static;
  std::uint64_t seed = 1;
  Tolerances tolerances;

  bool operator==(const GameDefinition&) const = default;
};

namespace detail {

using json = nlohmann::json;

inline ParseError key_error(const std::string& where, const std::string& what) {
  return ParseError(where + ": " + what);
}

inline void reject_unknown_keys(const json& obj, const std::string& where,
                                const std::vector<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const std::string& k : allowed)
      if (item.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw key_error(where, "unknown key '" + item.key() + "'");
  }
}

inline double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) throw key_error(where, "expected a number");
  return j.get<double>();
}

inline cplx entry_at(const json& j, const std::string& where) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cplx(j[0].get<double>(), j[1].get<double>());
  throw key_error(where, "matrix entries are a number or an [re, im] pair");
}

inline ComplexMatrix matrix_at(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw key_error(where, "expected an array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty())
    throw key_error(where, "expected rows to be arrays");
  const std::size_t cols = j[0].size();
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != cols)
      throw key_error(where, "row " + std::to_string(r) + " has wrong length");
    for (std::size_t c = 0; c < cols; ++c)
      m(r, c) = entry_at(row[c],
                         where + "[" + std::to_string(r) + "][" + std::to_string(c) +
                             "]");
  }
  return m;
}

inline nlohmann::ordered_json entry_to_json(const cplx& z) {
  if (z.imag() == 0.0) return nlohmann::ordered_json(z.real());
  return nlohmann::ordered_json::array({z.real(), z.imag()});
}

inline nlohmann::ordered_json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(entry_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

inline GameDefinition parse_definition(const std::string& text) {
  detail::json j;
  try {
    j = detail::json::parse(text);
  } catch (const detail::json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!j.is_object()) throw ParseError("definition: expected a JSON object");

  GameDefinition def;
  if (!j.contains("model") || !j["model"].is_string())
    throw ParseError("definition: 'model' string is required");
  const std::string model = j["model"].get<std::string>();
  if (model == "one_qubit_pure") def.model = ModelKind::OneQubitPure;
  else if (model == "one_qubit_mixed") def.model = ModelKind::OneQubitMixed;
  else if (model == "two_qubit_bell") def.model = ModelKind::TwoQubitBell;
  else if (model == "custom") def.model = ModelKind::Custom;
  else
    throw ParseError("definition: unknown model '" + model +
                     "' (expected one_qubit_pure, one_qubit_mixed, two_qubit_bell "
                     "or custom)");

  std::vector<std::string> allowed{"model", "P1", "P2", "seed", "tolerances"};
  if (def.model == ModelKind::OneQubitMixed) allowed.push_back("p");
  if (def.model == ModelKind::Custom) {
    allowed.push_back("dimension");
    allowed.push_back("initial_state");
    allowed.push_back("players");
    allowed.push_back("ordering");
  }
  detail::reject_unknown_keys(j, "definition", allowed);

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned())
      throw ParseError("seed: expected a non-negative integer");
    def.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("tolerances")) {
    const detail::json& t = j["tolerances"];
    if (!t.is_object()) throw ParseError("tolerances: expected an object");
    detail::reject_unknown_keys(t, "tolerances",
                                {"hermitian", "density", "phase_equality"});
    if (t.contains("hermitian"))
      def.tolerances.hermitian = detail::number_at(t["hermitian"], "tolerances.hermitian");
    if (t.contains("density"))
      def.tolerances.density = detail::number_at(t["density"], "tolerances.density");
    if (t.contains("phase_equality"))
      def.tolerances.phase_equality =
          detail::number_at(t["phase_equality"], "tolerances.phase_equality");
    for (double tol : {def.tolerances.hermitian, def.tolerances.density,
                       def.tolerances.phase_equality})
      if (!(tol > 0.0)) throw ParseError("tolerances: values must be positive");
  }

  if (!j.contains("P1") || !j.contains("P2"))
    throw ParseError("definition: payoff matrices 'P1' and 'P2' are required");
  def.payoff1 = detail::matrix_at(j["P1"], "P1");
  def.payoff2 = detail::matrix_at(j["P2"], "P2");

  const std::size_t want_dim =
      def.model == ModelKind::TwoQubitBell ? 4 : def.model == ModelKind::Custom ? 0 : 2;
  if (want_dim != 0)
    for (const auto* p : {&def.payoff1, &def.payoff2})
      if (p->rows() != want_dim || p->cols() != want_dim)
        throw ParseError("definition: " + model + " needs " +
                         std::to_string(want_dim) + "x" + std::to_string(want_dim) +
                         " payoff matrices");

  if (def.model == ModelKind::OneQubitMixed) {
    if (!j.contains("p")) throw ParseError("definition: mixed model requires 'p'");
    def.mixing = detail::number_at(j["p"], "p");
    if (!(def.mixing >= 0.0 && def.mixing <= 1.0))
      throw ParseError("p: mixing weight must lie in [0, 1]");
  }

  if (def.model == ModelKind::Custom) {
    if (!j.contains("dimension") || !j["dimension"].is_number_unsigned())
      throw ParseError("definition: custom model requires an unsigned 'dimension'");
    def.dimension = j["dimension"].get<std::size_t>();
    if (def.dimension < 1 || def.dimension > 64)
      throw ParseError("dimension: expected 1 <= dimension <= 64");
    if (!j.contains("initial_state"))
      throw ParseError("definition: custom model requires 'initial_state'");
    def.initial_state = detail::matrix_at(j["initial_state"], "initial_state");
    if (def.initial_state.rows() != def.dimension ||
        def.initial_state.cols() != def.dimension)
      throw ParseError("initial_state: dimension mismatch");
    for (const auto* p : {&def.payoff1, &def.payoff2})
      if (p->rows() != def.dimension || p->cols() != def.dimension)
        throw ParseError("definition: payoff dimension mismatch");
    if (!j.contains("players") || !j["players"].is_array() || j["players"].size() != 2)
      throw ParseError("players: custom model requires exactly 2 player entries");
    for (std::size_t k = 0; k < 2; ++k) {
      const detail::json& pj = j["players"][k];
      const std::string where = "players[" + std::to_string(k) + "]";
      if (!pj.is_object()) throw ParseError(where + ": expected an object");
      detail::reject_unknown_keys(pj, where, {"kind", "interval", "members", "target"});
      PlayerDecl decl;
      if (!pj.contains("kind") || !pj["kind"].is_string())
        throw ParseError(where + ": 'kind' string is required");
      const std::string kind = pj["kind"].get<std::string>();
      if (kind == "planar_rotation") decl.kind = StrategyKind::PlanarRotation;
      else if (kind == "explicit_set") decl.kind = StrategyKind::ExplicitSet;
      else if (kind == "unrestricted") decl.kind = StrategyKind::UnrestrictedUnitary;
      else
        throw ParseError(where + ": unknown kind '" + kind + "'");
      if (pj.contains("interval")) {
        const detail::json& iv = pj["interval"];
        if (!iv.is_array() || iv.size() != 2)
          throw ParseError(where + ".interval: expected [lo, hi]");
        decl.lo = detail::number_at(iv[0], where + ".interval[0]");
        decl.hi = detail::number_at(iv[1], where + ".interval[1]");
        if (!(decl.lo <= decl.hi))
          throw ParseError(where + ".interval: lo must not exceed hi");
      }
      if (pj.contains("members")) {
        if (decl.kind != StrategyKind::ExplicitSet)
          throw ParseError(where + ": 'members' only applies to explicit_set");
        for (const detail::json& mj : pj["members"])
          decl.members.push_back(detail::matrix_at(mj, where + ".members"));
        if (decl.members.empty())
          throw ParseError(where + ".members: need at least one unitary");
      } else if (decl.kind == StrategyKind::ExplicitSet) {
        throw ParseError(where + ": explicit_set requires 'members'");
      }
      if (pj.contains("target")) {
        if (!pj["target"].is_number_unsigned())
          throw ParseError(where + ".target: expected an unsigned factor index");
        decl.target = pj["target"].get<std::size_t>();
      }
      def.players.push_back(std::move(decl));
    }
    if (j.contains("ordering")) {
      const std::string ord = j["ordering"].is_string()
                                  ? j["ordering"].get<std::string>()
                                  : throw ParseError("ordering: expected a string");
      if (ord == "static") def.ordering = Ordering::Static;
      else if (ord == "dynamic") def.ordering = Ordering::Dynamic;
      else throw ParseError("ordering: expected 'static' or 'dynamic'");
    }
  }

  // structural validation beyond shape
  const std::pair<const ComplexMatrix*, const char*> payoff_list[] = {
      {&def.payoff1, "P1"}, {&def.payoff2, "P2"}};
  for (const auto& [mat, name] : payoff_list) {
    const Validation v = check_hermitian(*mat, def.tolerances.hermitian);
    if (!v.ok) throw ParseError(std::string(name) + ": " + v.violation);
  }
  if (def.model == ModelKind::Custom) {
    const Validation v = check_density(def.initial_state, def.tolerances.density);
    if (!v.ok) throw ParseError("initial_state: " + v.violation);
  }
  return def;
}

inline GameDefinition load_definition(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open definition file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_definition(buf.str());
}

inline std::string serialize_definition(const GameDefinition& def) {
  nlohmann::ordered_json j;
  j["model"] = model_name(def.model);
  if (def.model == ModelKind::OneQubitMixed) j["p"] = def.mixing;
  if (def.model == ModelKind::Custom) {
    j["dimension"] = def.dimension;
    j["initial_state"] = detail::matrix_to_json(def.initial_state);
    nlohmann::ordered_json players = nlohmann::ordered_json::array();
    for (const PlayerDecl& decl : def.players) {
      nlohmann::ordered_json pj;
      pj["kind"] = decl.kind == StrategyKind::PlanarRotation ? "planar_rotation"
                   : decl.kind == StrategyKind::ExplicitSet  ? "explicit_set"
                                                             : "unrestricted";
      if (decl.kind == StrategyKind::PlanarRotation)
        pj["interval"] = {decl.lo, decl.hi};
      if (decl.kind == StrategyKind::ExplicitSet) {
        nlohmann::ordered_json members = nlohmann::ordered_json::array();
        for (const ComplexMatrix& m : decl.members)
          members.push_back(detail::matrix_to_json(m));
        pj["members"] = std::move(members);
      }
      if (decl.target) pj["target"] = *decl.target;
      players.push_back(std::move(pj));
    }
    j["players"] = std::move(players);
    j["ordering"] = def.ordering == Ordering::Static ? "static" : "dynamic";
  }
  j["P1"] = detail::matrix_to_json(def.payoff1);
  j["P2"] = detail::matrix_to_json(def.payoff2);
  j["seed"] = def.seed;
  j["tolerances"] = {{"hermitian", def.tolerances.hermitian},
                     {"density", def.tolerances.density},
                     {"phase_equality", def.tolerances.phase_equality}};
  return j.dump(2) + "\n";
}

inline bool reducible(const GameDefinition& def) {
  return def.model != ModelKind::Custom;
}

inline QuantumGame build_game(const GameDefinition& def) {
  const double htol = def.tolerances.hermitian;
  switch (def.model) {
    case ModelKind::OneQubitPure: {
      ComplexMatrix rho = ComplexMatrix::from_rows({{0.5, 0.5}, {0.5, 0.5}});
      return QuantumGame(DensityMatrix(std::move(rho), def.tolerances.density),
                         {StrategySpace::planar(0.0, kQuarterPi),
                          StrategySpace::planar(0.0, kQuarterPi)},
                         {HermitianOperator(def.payoff1, htol),
                          HermitianOperator(def.payoff2, htol)},
                         Ordering::Dynamic);
    }
    case ModelKind::OneQubitMixed: {
      ComplexMatrix rho =
          ComplexMatrix::from_rows({{def.mixing, 0.0}, {0.0, 1.0 - def.mixing}});
      return QuantumGame(DensityMatrix(std::move(rho), def.tolerances.density),
                         {StrategySpace::planar(0.0, kQuarterPi),
                          StrategySpace::planar(0.0, kQuarterPi)},
                         {HermitianOperator(def.payoff1, htol),
                          HermitianOperator(def.payoff2, htol)},
                         Ordering::Dynamic);
    }
    case ModelKind::TwoQubitBell: {
      ComplexMatrix rho(4, 4);
      rho(1, 1) = rho(1, 2) = rho(2, 1) = rho(2, 2) = 0.5;
      return QuantumGame(DensityMatrix(std::move(rho), def.tolerances.density),
                         {StrategySpace::planar(0.0, kQuarterPi, 0),
                          StrategySpace::planar(0.0, kQuarterPi, 1)},
                         {HermitianOperator(def.payoff1, htol),
                          HermitianOperator(def.payoff2, htol)},
                         Ordering::Static);
    }
    default: {
      std::vector<StrategySpace> spaces;
      for (const PlayerDecl& d : def.players) {
        StrategySpace s;
        s.kind = d.kind;
        s.lo = d.lo;
        s.hi = d.hi;
        s.members = d.members;
        s.target = d.target;
        spaces.push_back(std::move(s));
      }
      return QuantumGame(DensityMatrix(def.initial_state, def.tolerances.density),
                         std::move(spaces),
                         {HermitianOperator(def.payoff1, htol),
                          HermitianOperator(def.payoff2, htol)},
                         def.ordering);
    }
  }
}

inline ReductionReport reduce_definition(const GameDefinition& def) {
  const double htol = def.tolerances.hermitian;
  const HermitianOperator p1(def.payoff1, htol);
  const HermitianOperator p2(def.payoff2, htol);
  switch (def.model) {
    case ModelKind::OneQubitPure: return reduce_one_qubit_pure(p1, p2);
    case ModelKind::OneQubitMixed: return reduce_one_qubit_mixed(p1, p2, def.mixing);
    case ModelKind::TwoQubitBell: return reduce_two_qubit(p1, p2);
    default:
      throw std::invalid_argument(
          "custom games have no canonical reduction; use eval or sweep");
  }
}

// Angle domain for eval/sweep: the physical square for the reducible
// models, the declared planar intervals for custom games.
inline std::pair<Interval, Interval> angle_domain(const GameDefinition& def) {
  if (def.model != ModelKind::Custom)
    return {Interval{0.0, kQuarterPi}, Interval{0.0, kQuarterPi}};
  std::pair<Interval, Interval> out{{0.0, kHalfPi}, {0.0, kHalfPi}};
  if (def.players.size() == 2) {
    if (def.players[0].kind == StrategyKind::PlanarRotation)
      out.first = {def.players[0].lo, def.players[0].hi};
    if (def.players[1].kind == StrategyKind::PlanarRotation)
      out.second = {def.players[1].lo, def.players[1].hi};
  }
  return out;
}

}  // namespace qgame
