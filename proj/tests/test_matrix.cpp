#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "qgame/matrix.hpp"
#include "qgame/rng.hpp"

using namespace qgame;

TEST_CASE("matrix arithmetic basics") {
  const ComplexMatrix a = ComplexMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  const ComplexMatrix b = ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});

  SECTION("identity is neutral") {
    const ComplexMatrix id = ComplexMatrix::identity(2);
    CHECK(a * id == a);
    CHECK(id * a == a);
  }

  SECTION("multiplication follows the textbook rule") {
    const ComplexMatrix ab = a * b;
    CHECK(ab(0, 0) == cplx(2.0, 0.0));
    CHECK(ab(0, 1) == cplx(1.0, 0.0));
    CHECK(ab(1, 0) == cplx(4.0, 0.0));
    CHECK(ab(1, 1) == cplx(3.0, 0.0));
  }

  SECTION("dimension mismatches throw") {
    const ComplexMatrix col = ComplexMatrix::column({1.0, 0.0, 0.0});
    CHECK_THROWS_AS(a * col, std::invalid_argument);
    CHECK_THROWS_AS(a + col, std::invalid_argument);
    CHECK_THROWS_AS(trace(col), std::invalid_argument);
  }

  SECTION("ragged literals are rejected") {
    CHECK_THROWS_AS(ComplexMatrix::from_rows({{1.0, 2.0}, {3.0}}),
                    std::invalid_argument);
  }

  SECTION("scalar multiplication and subtraction") {
    const ComplexMatrix two_a = 2.0 * a;
    CHECK(two_a(1, 1) == cplx(8.0, 0.0));
    CHECK(max_abs(two_a - a - a) == 0.0);
  }
}

TEST_CASE("dagger and trace") {
  Rng rng(11);

  SECTION("dagger is an involution and reverses products") {
    for (int k = 0; k < 20; ++k) {
      const ComplexMatrix a = random_matrix(rng, 3);
      const ComplexMatrix b = random_matrix(rng, 3);
      CHECK(max_abs_diff(dagger(dagger(a)), a) == 0.0);
      CHECK(max_abs_diff(dagger(a * b), dagger(b) * dagger(a)) < 1e-12);
    }
  }

  SECTION("trace is linear and cyclic") {
    for (int k = 0; k < 20; ++k) {
      const ComplexMatrix a = random_matrix(rng, 4);
      const ComplexMatrix b = random_matrix(rng, 4);
      CHECK(std::abs(trace(a + b) - trace(a) - trace(b)) < 1e-12);
      CHECK(std::abs(trace(a * b) - trace(b * a)) < 1e-10);
    }
  }

  SECTION("trace of a ketbra is the norm") {
    const ComplexMatrix v = ComplexMatrix::column({cplx(0.6, 0.0), cplx(0.0, 0.8)});
    CHECK(std::abs(trace(ketbra(v)) - cplx(1.0, 0.0)) < 1e-15);
  }
}

TEST_CASE("tensor products use the first factor as the slow axis") {
  SECTION("basis kets compose as binary digits") {
    const ComplexMatrix k0 = basis_ket(2, 0);
    const ComplexMatrix k1 = basis_ket(2, 1);
    CHECK(tensor(k0, k1) == basis_ket(4, 1));  // |01>
    CHECK(tensor(k1, k0) == basis_ket(4, 2));  // |10>
    CHECK(tensor(k1, k1) == basis_ket(4, 3));  // |11>
  }

  SECTION("block structure") {
    const ComplexMatrix z = sigma_z();
    const ComplexMatrix x = sigma_x();
    const ComplexMatrix zx = tensor(z, x);
    CHECK(zx(0, 1) == cplx(1.0, 0.0));
    CHECK(zx(2, 3) == cplx(-1.0, 0.0));
    CHECK(zx(0, 3) == cplx(0.0, 0.0));
  }

  SECTION("mixed-product identity") {
    Rng rng(7);
    for (int k = 0; k < 10; ++k) {
      const ComplexMatrix a = random_matrix(rng, 2);
      const ComplexMatrix b = random_matrix(rng, 2);
      const ComplexMatrix c = random_matrix(rng, 2);
      const ComplexMatrix d = random_matrix(rng, 2);
      CHECK(max_abs_diff(tensor(a, b) * tensor(c, d), tensor(a * c, b * d)) < 1e-12);
    }
  }
}

TEST_CASE("planar rotations") {
  SECTION("known values") {
    CHECK(max_abs_diff(rotation(0.0), ComplexMatrix::identity(2)) == 0.0);
    const ComplexMatrix quarter = rotation(kHalfPi);
    CHECK(std::abs(quarter(0, 0)) < 1e-15);
    CHECK(quarter(0, 1) == cplx(-1.0, 0.0));
    CHECK(quarter(1, 0) == cplx(1.0, 0.0));
  }

  SECTION("composition adds angles") {
    const ComplexMatrix lhs = rotation(0.3) * rotation(0.4);
    CHECK(max_abs_diff(lhs, rotation(0.7)) < 1e-15);
  }

  SECTION("non-finite angles are rejected") {
    CHECK_THROWS_AS(rotation(std::nan("")), std::invalid_argument);
  }
}

TEST_CASE("pauli algebra") {
  const ComplexMatrix x = sigma_x();
  const ComplexMatrix y = sigma_y();
  const ComplexMatrix z = sigma_z();
  const cplx i(0.0, 1.0);

  CHECK(max_abs_diff(x * y, i * z) == 0.0);
  CHECK(max_abs_diff(commutator(x, y), 2.0 * i * z) == 0.0);
  CHECK(max_abs_diff(x * x, ComplexMatrix::identity(2)) == 0.0);
  CHECK(std::abs(trace(z)) == 0.0);
}

TEST_CASE("hermitian eigenvalues") {
  SECTION("paulis have eigenvalues -1 and 1") {
    for (const ComplexMatrix& m : {sigma_x(), sigma_y(), sigma_z()}) {
      const std::vector<double> eig = hermitian_eigenvalues(m);
      REQUIRE(eig.size() == 2);
      CHECK_THAT(eig[0], Catch::Matchers::WithinAbs(-1.0, 1e-14));
      CHECK_THAT(eig[1], Catch::Matchers::WithinAbs(1.0, 1e-14));
    }
  }

  SECTION("diagonal matrices are returned sorted") {
    const ComplexMatrix d =
        ComplexMatrix::from_rows({{3.0, 0.0, 0.0}, {0.0, -1.0, 0.0}, {0.0, 0.0, 2.0}});
    const std::vector<double> eig = hermitian_eigenvalues(d);
    CHECK(eig == std::vector<double>{-1.0, 2.0, 3.0});
  }

  SECTION("moment identities on random hermitian matrices") {
    Rng rng(23);
    for (int k = 0; k < 40; ++k) {
      const std::size_t n = 2 + k % 4;
      const ComplexMatrix h = random_hermitian(rng, n);
      const std::vector<double> eig = hermitian_eigenvalues(h);
      double sum = 0.0, sq = 0.0, cube = 0.0;
      for (double e : eig) {
        sum += e;
        sq += e * e;
        cube += e * e * e;
      }
      CHECK_THAT(sum, Catch::Matchers::WithinAbs(trace(h).real(), 1e-10));
      CHECK_THAT(sq, Catch::Matchers::WithinAbs(trace(h * h).real(), 1e-9));
      CHECK_THAT(cube, Catch::Matchers::WithinAbs(trace(h * h * h).real(), 1e-9));
    }
  }

  SECTION("shifting by the identity shifts the spectrum") {
    Rng rng(5);
    const ComplexMatrix h = random_hermitian(rng, 4);
    const std::vector<double> base = hermitian_eigenvalues(h);
    const std::vector<double> shifted =
        hermitian_eigenvalues(h + 2.5 * ComplexMatrix::identity(4));
    for (std::size_t i = 0; i < 4; ++i)
      CHECK_THAT(shifted[i], Catch::Matchers::WithinAbs(base[i] + 2.5, 1e-10));
  }
}

TEST_CASE("structural checks") {
  SECTION("hermitian check flags an asymmetric entry") {
    ComplexMatrix m = sigma_x();
    m(0, 1) = cplx(0.0, 0.5);
    const Validation v = check_hermitian(m);
    CHECK_FALSE(v.ok);
    CHECK(v.magnitude > 0.4);
  }

  SECTION("unitary check accepts rotations and rejects scalings") {
    CHECK(check_unitary(rotation(1.1)).ok);
    CHECK_FALSE(check_unitary(2.0 * rotation(1.1)).ok);
  }

  SECTION("density check needs unit trace and positivity") {
    CHECK(check_density(ComplexMatrix::from_rows({{0.5, 0.0}, {0.0, 0.5}})).ok);
    CHECK_FALSE(check_density(ComplexMatrix::from_rows({{0.9, 0.0}, {0.0, 0.4}})).ok);
    CHECK_FALSE(check_density(ComplexMatrix::from_rows({{2.0, 0.0}, {0.0, -1.0}})).ok);
    CHECK_FALSE(check_density(sigma_x()).ok);
  }

  SECTION("validated wrappers throw on construction") {
    CHECK_THROWS_AS(HermitianOperator(ComplexMatrix::from_rows({{1.0, 2.0},
                                                                {3.0, 4.0}})),
                    std::invalid_argument);
    CHECK_THROWS_AS(DensityMatrix(sigma_z()), std::invalid_argument);
    CHECK_NOTHROW(DensityMatrix(ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, 0.0}})));
  }

  SECTION("non-throwing validation carries the diagnostic") {
    const Validated<DensityMatrix> bad = validate_density(sigma_x());
    CHECK_FALSE(bad.ok());
    CHECK_FALSE(bad.diagnostic.violation.empty());
    CHECK_THROWS_AS(*bad, std::invalid_argument);
    const Validated<DensityMatrix> good =
        validate_density(ComplexMatrix::from_rows({{0.25, 0.0}, {0.0, 0.75}}));
    REQUIRE(good.ok());
    CHECK((*good).dimension() == 2);
  }
}

TEST_CASE("random generators have the advertised structure") {
  Rng rng(101);

  SECTION("random unitaries pass the unitary check") {
    for (int k = 0; k < 30; ++k) {
      const std::size_t n = 2 + k % 3;
      CHECK(check_unitary(random_unitary(rng, n), 1e-10).ok);
    }
  }

  SECTION("random densities pass the density check") {
    for (int k = 0; k < 30; ++k) {
      const std::size_t n = 2 + k % 3;
      CHECK(check_density(random_density_matrix(rng, n), 1e-10).ok);
    }
  }

  SECTION("seeding is deterministic") {
    Rng a(42), b(42);
    for (int k = 0; k < 100; ++k) CHECK(a.raw() == b.raw());
  }
}
