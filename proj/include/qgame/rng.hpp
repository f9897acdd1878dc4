#pragma once

// Seeded random helpers for tests and the self-check suites. The bit
// mapping from the raw mt19937_64 stream is spelled out so sequences
// are identical across standard libraries.

#include <cstdint>
#include <random>

#include "qgame/matrix.hpp"

namespace qgame {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }

  // [0, 1) with 53 random bits
  double unit() { return static_cast<double>(raw() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(unit() * static_cast<double>(n));
  }

  double normal() {
    double u = unit();
    while (u == 0.0) u = unit();
    const double v = unit();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * kPi * v);
  }

 private:
  std::mt19937_64 engine_;
};

inline ComplexMatrix random_matrix(Rng& rng, std::size_t n, double scale = 1.0) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = scale * cplx(rng.normal(), rng.normal());
  return m;
}

inline ComplexMatrix random_hermitian(Rng& rng, std::size_t n, double scale = 1.0) {
  const ComplexMatrix a = random_matrix(rng, n, scale);
  return 0.5 * (a + dagger(a));
}

// Gram-Schmidt on Gaussian columns; a second orthogonalization pass
// keeps the result unitary to machine precision.
inline ComplexMatrix random_unitary(Rng& rng, std::size_t n) {
  const ComplexMatrix g = random_matrix(rng, n, 1.0);
  ComplexMatrix u(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<cplx> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = g(i, j);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < j; ++k) {
        cplx proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) proj += std::conj(u(i, k)) * v[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= proj * u(i, k);
      }
    double norm = 0.0;
    for (const cplx& z : v) norm += std::norm(z);
    norm = std::sqrt(norm);
    if (norm < 1e-8) {
      // effectively dependent draw; restart with fresh randomness
      return random_unitary(rng, n);
    }
    for (std::size_t i = 0; i < n; ++i) u(i, j) = v[i] / norm;
  }
  return u;
}

inline ComplexMatrix random_density_matrix(Rng& rng, std::size_t n) {
  const ComplexMatrix a = random_matrix(rng, n, 1.0);
  ComplexMatrix p = a * dagger(a);
  const double t = trace(p).real();
  p = (1.0 / t) * p;
  // clean the diagonal so the unit-trace check holds exactly
  cplx diag_sum = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) diag_sum += p(i, i);
  p(n - 1, n - 1) = cplx(1.0, 0.0) - diag_sum;
  return p;
}

inline DensityMatrix random_density(Rng& rng, std::size_t n) {
  return DensityMatrix(random_density_matrix(rng, n));
}

}  // namespace qgame
