#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <utility>
#include <vector>

#include "qgame/oracle.hpp"
#include "qgame/rng.hpp"

using namespace qgame;

TEST_CASE("grid argmax") {
  SECTION("finds the peak of a smooth function within one step") {
    const auto f = [](double x) { return std::sin(x + 0.4); };
    const auto [arg, val] = grid_argmax(f, {0.0, kHalfPi}, 10001);
    const double exact = kHalfPi - 0.4;
    CHECK(std::abs(arg - exact) <= kHalfPi / 10000.0 + 1e-12);
    CHECK(val <= f(exact) + 1e-15);
  }

  SECTION("includes both endpoints exactly") {
    const auto up = [](double x) { return x; };
    CHECK(grid_argmax(up, {0.0, 0.7}, 8).first == 0.7);
    const auto down = [](double x) { return -x; };
    CHECK(grid_argmax(down, {0.2, 0.7}, 8).first == 0.2);
  }

  SECTION("ties keep the smaller argument") {
    const auto flat = [](double) { return 1.0; };
    CHECK(grid_argmax(flat, {0.3, 0.9}, 64).first == 0.3);
  }

  SECTION("needs at least two points") {
    CHECK_THROWS_AS(grid_argmax([](double x) { return x; }, {0.0, 1.0}, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("nash certificates") {
  // phases 0.3 > 0: player 2 peaks, player 1 is clamped to the floor, and
  // the equilibrium sits at (0, pi/2)
  const auto f1 = [](double t, double p) { return std::sin(t + p + 0.3); };
  const auto f2 = [](double t, double p) { return std::sin(t + p); };
  const Interval box{0.0, kHalfPi};

  SECTION("true equilibrium passes") {
    const NashCertificate c =
        verify_nash(f1, f2, 0.0, kHalfPi, box, box, 1e-6, 600, 2.0);
    CHECK(c.pass);
    CHECK(c.gain1 <= 1e-6);
    CHECK(c.gain2 <= 1e-6);
    CHECK_THAT(c.epsilon_effective,
               Catch::Matchers::WithinAbs(1e-6 + 2.0 * kHalfPi / 599.0, 1e-12));
  }

  SECTION("non-equilibrium point fails with a quantified gain") {
    const NashCertificate c = verify_nash(f1, f2, 0.0, 0.0, box, box, 1e-6, 600);
    CHECK_FALSE(c.pass);
    CHECK(c.gain1 > 0.1);
  }

  SECTION("gains are never meaningfully negative") {
    Rng rng(55);
    for (int k = 0; k < 50; ++k) {
      const double t = rng.uniform(0.0, kHalfPi);
      const double p = rng.uniform(0.0, kHalfPi);
      const NashCertificate c = verify_nash(f1, f2, t, p, box, box, 1e-6, 200);
      CHECK(c.gain1 >= -1e-12);
      CHECK(c.gain2 >= -1e-12);
    }
  }
}

TEST_CASE("nash scan") {
  const Interval box{0.0, kHalfPi};

  SECTION("flags the known equilibrium cell and nothing far away") {
    // the flat axis of an interior peak admits eps-hits out to
    // sqrt(2 eps / amplitude), so the 2-cell bound needs amplitude 4 here
    const auto f1 = [](double t, double p) { return 4.0 * std::sin(t + p + 0.4); };
    const auto f2 = [](double t, double p) { return 4.0 * std::sin(t + p + 0.1); };
    // interior case: equilibrium at (0, pi/2 - 0.1)
    const std::size_t n = 400;
    const auto hits = nash_scan(f1, f2, box, box, 1e-4, n);
    REQUIRE_FALSE(hits.empty());
    const double step = kHalfPi / static_cast<double>(n - 1);
    for (const auto& [t, p] : hits) {
      CHECK(std::abs(t - 0.0) <= 2.0 * step);
      CHECK(std::abs(p - (kHalfPi - 0.1)) <= 2.0 * step);
    }
  }

  SECTION("equal phases produce a diagonal band of hits") {
    const auto f1 = [](double t, double p) { return std::sin(t + p + 0.2); };
    const auto f2 = [](double t, double p) { return 2.0 * std::sin(t + p + 0.2); };
    const auto hits = nash_scan(f1, f2, box, box, 1e-4, 300);
    REQUIRE(hits.size() > 50);
    const double sum = kHalfPi - 0.2;
    const double step = kHalfPi / 299.0;
    for (const auto& [t, p] : hits)
      CHECK(std::abs(t + p - sum) <= 3.0 * step);
  }

  SECTION("cost guard rejects oversized grids") {
    const auto f = [](double, double) { return 0.0; };
    CHECK_THROWS_AS(nash_scan(f, f, box, box, 1e-4, 2001), std::invalid_argument);
  }
}

TEST_CASE("sinusoid least squares") {
  SECTION("recovers planted coefficients to machine precision") {
    Rng rng(71);
    for (int k = 0; k < 100; ++k) {
      const double off = rng.uniform(-3.0, 3.0);
      const double a = rng.uniform(-3.0, 3.0);
      const double b = rng.uniform(-3.0, 3.0);
      std::vector<std::pair<double, double>> samples;
      for (int j = 0; j < 48; ++j) {
        const double x = kHalfPi * j / 47.0;
        samples.emplace_back(x, off + a * std::sin(2 * x) + b * std::cos(2 * x));
      }
      const SinusoidFit fit = fit_sinusoid(samples);
      CHECK_THAT(fit.offset, Catch::Matchers::WithinAbs(off, 1e-10));
      CHECK_THAT(fit.sin_coeff, Catch::Matchers::WithinAbs(a, 1e-10));
      CHECK_THAT(fit.cos_coeff, Catch::Matchers::WithinAbs(b, 1e-10));
      CHECK(fit.max_residual < 1e-10);
    }
  }

  SECTION("reports the residual of an off-model signal") {
    std::vector<std::pair<double, double>> samples;
    for (int j = 0; j < 64; ++j) {
      const double x = kHalfPi * j / 63.0;
      samples.emplace_back(x, std::sin(3.0 * x));
    }
    CHECK(fit_sinusoid(samples).max_residual > 1e-3);
  }

  SECTION("rejects degenerate sample sets") {
    std::vector<std::pair<double, double>> same{{0.3, 1.0}, {0.3, 1.0}, {0.3, 1.0}};
    CHECK_THROWS_AS(fit_sinusoid(same), std::invalid_argument);
    std::vector<std::pair<double, double>> few{{0.1, 1.0}, {0.2, 2.0}};
    CHECK_THROWS_AS(fit_sinusoid(few), std::invalid_argument);
  }
}
