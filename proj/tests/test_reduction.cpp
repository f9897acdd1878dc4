#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "qgame/matrix.hpp"
#include "qgame/reduction.hpp"
#include "qgame/rng.hpp"

using namespace qgame;

namespace {

const FormulaResidual& row(const ReductionReport& rep, const std::string& label) {
  for (const FormulaResidual& r : rep.formula_residuals)
    if (r.label == label) return r;
  FAIL("missing residual row: " + label);
  static FormulaResidual dummy;
  return dummy;
}

ComplexMatrix all_ones_off_diagonal() {
  // symmetric 4x4 with ones at (0,1), (0,2), (1,3), (2,3)
  ComplexMatrix m(4, 4);
  m(0, 1) = m(1, 0) = 1.0;
  m(0, 2) = m(2, 0) = 1.0;
  m(1, 3) = m(3, 1) = 1.0;
  m(2, 3) = m(3, 2) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("sinusoid extraction") {
  SECTION("three-point rule is exact on model functions") {
    const SinusoidalPayoff s = extract_sinusoid([](double x) {
      return 0.7 - 0.4 * std::sin(2.0 * x) + 1.1 * std::cos(2.0 * x);
    });
    CHECK_THAT(s.offset, Catch::Matchers::WithinAbs(0.7, 1e-12));
    CHECK_THAT(s.sin_coeff, Catch::Matchers::WithinAbs(-0.4, 1e-12));
    CHECK_THAT(s.cos_coeff, Catch::Matchers::WithinAbs(1.1, 1e-12));
  }

  SECTION("off-model payoffs are rejected loudly") {
    CHECK_THROWS_AS(extract_sinusoid([](double x) { return x * x; }),
                    std::invalid_argument);
  }

  SECTION("polar conversion") {
    const SinusoidalPayoff s{0.2, 0.6, -0.8};
    CHECK_THAT(s.amplitude(), Catch::Matchers::WithinAbs(1.0, 1e-15));
    CHECK_THAT(s.phase(), Catch::Matchers::WithinAbs(std::atan2(-0.8, 0.6), 1e-15));
    CHECK(s.admissible());
    CHECK_FALSE(s.degenerate());
    const SinusoidalPayoff bad{0.0, -0.5, 0.0};
    CHECK_FALSE(bad.admissible());
  }
}

TEST_CASE("one-qubit pure model") {
  const HermitianOperator p1(-1.0 * sigma_z());
  const HermitianOperator p2(sigma_x());
  const ReductionReport rep = reduce_one_qubit_pure(p1, p2);

  SECTION("extracted coefficients") {
    CHECK_THAT(rep.sinusoids[0].offset, Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(rep.sinusoids[0].sin_coeff, Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(rep.sinusoids[0].cos_coeff, Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(rep.sinusoids[1].sin_coeff, Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(rep.sinusoids[1].cos_coeff, Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK(rep.all_admissible());
    CHECK_FALSE(rep.any_degenerate());
    CHECK_THAT(rep.polar[0].phase, Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(rep.polar[1].phase, Catch::Matchers::WithinAbs(kHalfPi, 1e-12));
  }

  SECTION("the diagonal sin reference keeps its historical sign error") {
    const FormulaResidual& r = row(rep, "p1.sin=(a-d)/2");
    CHECK_THAT(r.reference, Catch::Matchers::WithinAbs(-1.0, 1e-12));
    CHECK_THAT(r.numeric, Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(r.residual, Catch::Matchers::WithinAbs(2.0, 1e-12));
    // the off-diagonal row has no such defect
    CHECK(row(rep, "p2.cos=(b+b~)/2").residual < 1e-12);
    CHECK(row(rep, "p1.offset=(a+d)/2").residual < 1e-12);
  }

  SECTION("closed-form solution lands on the physical square") {
    const NashSolution sol = solve_physical(rep);
    REQUIRE(sol.kind == NashSolution::Kind::Unique);
    CHECK_THAT(sol.theta, Catch::Matchers::WithinAbs(kQuarterPi, 1e-12));
    CHECK_THAT(sol.phi, Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(physical_payoff(rep, sol.theta, sol.phi, 0),
               Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(physical_payoff(rep, sol.theta, sol.phi, 1),
               Catch::Matchers::WithinAbs(0.0, 1e-12));
    REQUIRE(sol.certificate.has_value());
    CHECK(sol.certificate->pass);
  }

  SECTION("certification can be skipped") {
    const NashSolution sol = solve_physical(rep, 1e-6, 500,
                                            AngleSumGame::kPhaseEqualityTol, false);
    CHECK_FALSE(sol.certificate.has_value());
  }
}

TEST_CASE("one-qubit pure model rejects and degenerates") {
  SECTION("a positive-z payoff has a negative sin coefficient") {
    const ReductionReport rep =
        reduce_one_qubit_pure(HermitianOperator(sigma_z()),
                              HermitianOperator(sigma_x()));
    CHECK_FALSE(rep.admissible[0]);
    CHECK_THROWS_AS(solve_physical(rep), InadmissibleError);
  }

  SECTION("an identity payoff is constant") {
    const ReductionReport rep =
        reduce_one_qubit_pure(HermitianOperator(ComplexMatrix::identity(2)),
                              HermitianOperator(sigma_x()));
    CHECK(rep.degenerate[0]);
    CHECK(rep.admissible[0]);
    const NashSolution sol = solve_physical(rep);
    REQUIRE(sol.kind == NashSolution::Kind::Degenerate);
    CHECK(sol.degenerate_players == std::vector<std::size_t>{0});
  }

  SECTION("inadmissibility outranks degeneracy") {
    const ReductionReport a =
        reduce_one_qubit_pure(HermitianOperator(sigma_z()),
                              HermitianOperator(ComplexMatrix::identity(2)));
    CHECK_THROWS_AS(solve_physical(a), InadmissibleError);
    const ReductionReport b =
        reduce_one_qubit_pure(HermitianOperator(ComplexMatrix::identity(2)),
                              HermitianOperator(sigma_z()));
    CHECK_THROWS_AS(solve_physical(b), InadmissibleError);
  }
}

TEST_CASE("one-qubit mixed model") {
  const HermitianOperator p1(ComplexMatrix::from_rows({{2.0, 0.0}, {0.0, 0.0}}));
  const HermitianOperator p2(sigma_x());

  SECTION("mixing weight is validated") {
    CHECK_THROWS_AS(reduce_one_qubit_mixed(p1, p2, -0.1), std::domain_error);
    CHECK_THROWS_AS(reduce_one_qubit_mixed(p1, p2, 1.5), std::domain_error);
  }

  const ReductionReport rep = reduce_one_qubit_mixed(p1, p2, 0.25);

  SECTION("extracted coefficients at p = 1/4") {
    // rho = diag(1/4, 3/4): f1 = 1 - cos(2x)/2, f2 = -sin(2x)/2
    CHECK_THAT(rep.sinusoids[0].offset, Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(rep.sinusoids[0].sin_coeff, Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(rep.sinusoids[0].cos_coeff, Catch::Matchers::WithinAbs(-0.5, 1e-12));
    CHECK_THAT(rep.sinusoids[1].sin_coeff, Catch::Matchers::WithinAbs(-0.5, 1e-12));
    CHECK_THAT(rep.sinusoids[1].cos_coeff, Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK(rep.admissible[0]);
    CHECK_FALSE(rep.admissible[1]);
  }

  SECTION("both mixed reference rows differ from the numeric truth here") {
    const FormulaResidual& cos_row = row(rep, "p1.cos=(1-p)(d-a)");
    CHECK_THAT(cos_row.reference, Catch::Matchers::WithinAbs(-1.5, 1e-12));
    CHECK_THAT(cos_row.numeric, Catch::Matchers::WithinAbs(-0.5, 1e-12));
    CHECK_THAT(cos_row.residual, Catch::Matchers::WithinAbs(1.0, 1e-12));

    const FormulaResidual& sin_row = row(rep, "p2.sin=(1-2p)(b+b~)/2");
    CHECK_THAT(sin_row.reference, Catch::Matchers::WithinAbs(0.5, 1e-12));
    CHECK_THAT(sin_row.numeric, Catch::Matchers::WithinAbs(-0.5, 1e-12));
    CHECK_THAT(sin_row.residual, Catch::Matchers::WithinAbs(1.0, 1e-12));
  }

  SECTION("solving is blocked by the inadmissible second player") {
    CHECK_THROWS_AS(solve_physical(rep), InadmissibleError);
  }

  SECTION("p = 1/2 flattens every payoff") {
    const ReductionReport half = reduce_one_qubit_mixed(p1, p2, 0.5);
    CHECK(half.degenerate[0]);
    CHECK(half.degenerate[1]);
    const NashSolution sol = solve_physical(half);
    REQUIRE(sol.kind == NashSolution::Kind::Degenerate);
    CHECK(sol.degenerate_players == std::vector<std::size_t>{0, 1});
  }
}

TEST_CASE("two-qubit entangled model") {
  const HermitianOperator p1(tensor(sigma_z(), sigma_z()));
  const HermitianOperator p2(tensor(sigma_x(), sigma_x()));
  const ReductionReport rep = reduce_two_qubit(p1, p2);

  SECTION("extracted coefficients") {
    // f1 = -cos(2x), f2 = +cos(2x) on the diagonal
    CHECK_THAT(rep.sinusoids[0].cos_coeff, Catch::Matchers::WithinAbs(-1.0, 1e-12));
    CHECK_THAT(rep.sinusoids[0].sin_coeff, Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(rep.sinusoids[1].cos_coeff, Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(rep.polar[0].phase, Catch::Matchers::WithinAbs(-kHalfPi, 1e-12));
    CHECK_THAT(rep.polar[1].phase, Catch::Matchers::WithinAbs(kHalfPi, 1e-12));
    CHECK(rep.all_admissible());
  }

  SECTION("aggregates") {
    REQUIRE(rep.has_aggregates);
    CHECK_THAT(rep.cos_aggregate[0], Catch::Matchers::WithinAbs(-4.0, 1e-12));
    CHECK_THAT(rep.sin_aggregate[0], Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(rep.cos_aggregate[1], Catch::Matchers::WithinAbs(4.0, 1e-12));
    CHECK(row(rep, "p1.cos=A/4").residual < 1e-12);
    CHECK(row(rep, "p1.sin=-B/2").residual < 1e-12);
  }

  SECTION("the self-consistent polar rows agree, the historical pair does not") {
    CHECK(row(rep, "p1.amplitude=sqrt(A^2+4B^2)/4").residual < 1e-12);
    CHECK(row(rep, "p1.phase=atan2(A/4,-B/2)").residual < 1e-12);
    CHECK_THAT(row(rep, "p1.amplitude=sqrt(A^2/4+4B^2)").residual,
               Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(row(rep, "p1.phase=-atan(A/B)").residual,
               Catch::Matchers::WithinAbs(kPi, 1e-12));
  }

  SECTION("closed-form solution") {
    const NashSolution sol = solve_physical(rep);
    REQUIRE(sol.kind == NashSolution::Kind::Unique);
    CHECK_THAT(sol.theta, Catch::Matchers::WithinAbs(kQuarterPi, 1e-12));
    CHECK_THAT(sol.phi, Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(physical_payoff(rep, sol.theta, sol.phi, 0),
               Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(physical_payoff(rep, sol.theta, sol.phi, 1),
               Catch::Matchers::WithinAbs(0.0, 1e-12));
    REQUIRE(sol.certificate.has_value());
    CHECK(sol.certificate->pass);
  }

  SECTION("operators of the wrong size are rejected") {
    CHECK_THROWS_AS(reduce_two_qubit(HermitianOperator(sigma_z()),
                                     HermitianOperator(sigma_x())),
                    std::invalid_argument);
  }
}

TEST_CASE("two-qubit all-ones off-diagonal payoff is flat, not inadmissible") {
  const HermitianOperator p(all_ones_off_diagonal());
  const ReductionReport rep = reduce_two_qubit(p, p);

  CHECK(rep.degenerate[0]);
  CHECK(rep.degenerate[1]);
  CHECK_THAT(rep.sinusoids[0].amplitude(), Catch::Matchers::WithinAbs(0.0, 1e-12));

  // the printed sin aggregate claims -B/2 = -2; the payoff is identically zero
  const FormulaResidual& r = row(rep, "p1.sin=-B/2");
  CHECK_THAT(r.reference, Catch::Matchers::WithinAbs(-2.0, 1e-12));
  CHECK_THAT(r.numeric, Catch::Matchers::WithinAbs(0.0, 1e-12));

  const NashSolution sol = solve_physical(rep);
  CHECK(sol.kind == NashSolution::Kind::Degenerate);
}

TEST_CASE("reduced sinusoids reproduce the engine payoff everywhere") {
  Rng rng(301);
  for (int model = 0; model < 3; ++model) {
    const std::size_t dim = model == 2 ? 4 : 2;
    const HermitianOperator p1(random_hermitian(rng, dim));
    const HermitianOperator p2(random_hermitian(rng, dim));
    const ReductionReport rep =
        model == 0   ? reduce_one_qubit_pure(p1, p2)
        : model == 1 ? reduce_one_qubit_mixed(p1, p2, 0.3)
                     : reduce_two_qubit(p1, p2);
    double worst = 0.0;
    for (int i = 0; i < 25; ++i)
      for (int j = 0; j < 25; ++j) {
        const double t = kQuarterPi * i / 24.0;
        const double u = kQuarterPi * j / 24.0;
        for (std::size_t pl = 0; pl < 2; ++pl)
          worst = std::max(worst, std::abs(physical_payoff(rep, t, u, pl) -
                                           rep.sinusoids[pl].eval(t + u)));
      }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("continuum solutions rescale onto the physical diagonal") {
  // equal payoffs give equal phases, hence a continuum
  const HermitianOperator p(-1.0 * sigma_z());
  const ReductionReport rep = reduce_one_qubit_pure(p, p);
  const NashSolution sol = solve_physical(rep);
  REQUIRE(sol.kind == NashSolution::Kind::Continuum);
  CHECK_THAT(sol.angle_sum, Catch::Matchers::WithinAbs(kQuarterPi, 1e-12));
  CHECK(sol.theta_lo >= -1e-15);
  CHECK(sol.theta_hi <= kQuarterPi + 1e-15);
  REQUIRE(sol.certificate.has_value());
  CHECK(sol.certificate->pass);
  // every segment point maximizes both payoffs along the diagonal
  for (int j = 0; j <= 8; ++j) {
    const double t = sol.theta_lo + (sol.theta_hi - sol.theta_lo) * j / 8.0;
    CHECK_THAT(physical_payoff(rep, t, sol.angle_sum - t, 0),
               Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
}
