#pragma once

// Dense complex linear algebra for small quantum objects: states,
// unitaries, payoff operators. Dimensions stay tiny (2 and 4 in
// practice, 8 at most), so storage is a row-major std::vector and the
// algorithms are plain loops.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qgame {

using cplx = std::complex<double>;

inline constexpr double kDefaultTol = 1e-10;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;
inline constexpr double kQuarterPi = std::numbers::pi / 4.0;

/// Row-major dense complex matrix with value semantics.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix from_rows(
      std::initializer_list<std::initializer_list<cplx>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    ComplexMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw std::invalid_argument("ragged matrix literal");
      std::size_t j = 0;
      for (const cplx& v : row) m(i, j++) = v;
      ++i;
    }
    return m;
  }

  static ComplexMatrix column(std::initializer_list<cplx> entries) {
    ComplexMatrix m(entries.size(), 1);
    std::size_t i = 0;
    for (const cplx& v : entries) m(i++, 0) = v;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_ && rows_ > 0; }

  cplx& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  const std::vector<cplx>& entries() const { return entries_; }

  bool all_finite() const {
    for (const cplx& z : entries_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> entries_;
};

namespace detail {
inline std::string dims(const ComplexMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}
}  // namespace detail

inline ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("multiply: dimension mismatch " + detail::dims(a) +
                                " * " + detail::dims(b));
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  return multiply(a, b);
}

inline ComplexMatrix operator*(const cplx& s, const ComplexMatrix& m) {
  ComplexMatrix out = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) *= s;
  return out;
}

inline ComplexMatrix operator*(double s, const ComplexMatrix& m) {
  return cplx(s, 0.0) * m;
}

inline ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("add: dimension mismatch " + detail::dims(a) +
                                " + " + detail::dims(b));
  ComplexMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) += b(i, j);
  return out;
}

inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("subtract: dimension mismatch " + detail::dims(a) +
                                " - " + detail::dims(b));
  ComplexMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) -= b(i, j);
  return out;
}

inline ComplexMatrix dagger(const ComplexMatrix& m) {
  ComplexMatrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = std::conj(m(i, j));
  return out;
}

inline cplx trace(const ComplexMatrix& m) {
  if (!m.square()) throw std::invalid_argument("trace: matrix must be square");
  cplx t = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

// Kronecker product; the first factor indexes the slow axis, so for
// qubits the basis order is |00>, |01>, |10>, |11>.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

inline ComplexMatrix rotation(double theta) {
  if (!std::isfinite(theta))
    throw std::invalid_argument("rotation: angle must be finite");
  const double c = std::cos(theta), s = std::sin(theta);
  return ComplexMatrix::from_rows({{c, -s}, {s, c}});
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

inline double max_abs(const ComplexMatrix& m) {
  double v = 0.0;
  for (const cplx& z : m.entries()) v = std::max(v, std::abs(z));
  return v;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return max_abs(a - b);
}

inline ComplexMatrix sigma_x() {
  return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
}

inline ComplexMatrix sigma_y() {
  return ComplexMatrix::from_rows({{0.0, cplx(0.0, -1.0)}, {cplx(0.0, 1.0), 0.0}});
}

inline ComplexMatrix sigma_z() {
  return ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}});
}

inline ComplexMatrix basis_ket(std::size_t dim, std::size_t k) {
  if (k >= dim) throw std::invalid_argument("basis_ket: index out of range");
  ComplexMatrix v(dim, 1);
  v(k, 0) = 1.0;
  return v;
}

inline ComplexMatrix ketbra(const ComplexMatrix& ket) {
  if (ket.cols() != 1) throw std::invalid_argument("ketbra: expected a column vector");
  return ket * dagger(ket);
}

// Eigenvalues of a Hermitian matrix via cyclic complex Jacobi rotations,
// ascending. Quadratic convergence makes a handful of sweeps enough at
// these sizes.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  if (!m.square())
    throw std::invalid_argument("hermitian_eigenvalues: matrix must be square");
  const std::size_t n = m.rows();
  ComplexMatrix a = m;
  // symmetrize so tolerated Hermiticity error cannot bias a sweep
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx mean = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = mean;
      a(j, i) = std::conj(mean);
    }
  }
  const double stop = 1e-14 * std::max(1.0, max_abs(a));
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= stop) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= stop * 1e-2) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx phase = apq / mag;
        ComplexMatrix j = ComplexMatrix::identity(n);
        j(p, p) = c;
        j(q, q) = c;
        j(p, q) = s * phase;
        j(q, p) = -s * std::conj(phase);
        a = dagger(j) * a * j;
      }
  }
  std::vector<double> eigs(n);
  for (std::size_t i = 0; i < n; ++i) eigs[i] = a(i, i).real();
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

/// Outcome of a structural check: ok, or the violated invariant plus its size.
struct Validation {
  bool ok = true;
  std::string violation;
  double magnitude = 0.0;
};

namespace detail {
inline std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}
}  // namespace detail

inline Validation check_hermitian(const ComplexMatrix& m, double tol = kDefaultTol) {
  if (!m.square()) return {false, "matrix is not square (" + detail::dims(m) + ")", 0.0};
  if (!m.all_finite()) return {false, "matrix has non-finite entries", 0.0};
  double dev = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      dev = std::max(dev, std::abs(m(i, j) - std::conj(m(j, i))));
  if (dev > tol)
    return {false, "not Hermitian: max |M - M^dagger| = " + detail::fmt(dev), dev};
  return {};
}

inline Validation check_unitary(const ComplexMatrix& m, double tol = kDefaultTol) {
  if (!m.square()) return {false, "matrix is not square (" + detail::dims(m) + ")", 0.0};
  if (!m.all_finite()) return {false, "matrix has non-finite entries", 0.0};
  const double dev = max_abs_diff(dagger(m) * m, ComplexMatrix::identity(m.rows()));
  if (dev > tol)
    return {false, "not unitary: max |M^dagger M - I| = " + detail::fmt(dev), dev};
  return {};
}

inline Validation check_density(const ComplexMatrix& m, double tol = kDefaultTol) {
  Validation herm = check_hermitian(m, tol);
  if (!herm.ok) return herm;
  const double trace_dev = std::abs(trace(m) - cplx(1.0, 0.0));
  if (trace_dev > tol)
    return {false, "trace differs from one by " + detail::fmt(trace_dev), trace_dev};
  const std::vector<double> eigs = hermitian_eigenvalues(m);
  if (eigs.front() < -tol)
    return {false, "negative eigenvalue " + detail::fmt(eigs.front()), -eigs.front()};
  return {};
}

/// Hermitian matrix validated on construction; throws std::invalid_argument.
class HermitianOperator {
 public:
  explicit HermitianOperator(ComplexMatrix m, double tol = kDefaultTol)
      : matrix_(std::move(m)), tol_(tol) {
    const Validation v = check_hermitian(matrix_, tol_);
    if (!v.ok) throw std::invalid_argument("HermitianOperator: " + v.violation);
  }
  const ComplexMatrix& matrix() const { return matrix_; }
  double tolerance() const { return tol_; }

 private:
  ComplexMatrix matrix_;
  double tol_;
};

/// Density matrix (Hermitian, unit trace, PSD) validated on construction.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m, double tol = kDefaultTol)
      : matrix_(std::move(m)), tol_(tol) {
    const Validation v = check_density(matrix_, tol_);
    if (!v.ok) throw std::invalid_argument("DensityMatrix: " + v.violation);
  }
  const ComplexMatrix& matrix() const { return matrix_; }
  double tolerance() const { return tol_; }
  std::size_t dimension() const { return matrix_.rows(); }

 private:
  ComplexMatrix matrix_;
  double tol_;
};

/// Non-throwing validation result: either the wrapper or the diagnostic.
template <typename T>
struct Validated {
  std::optional<T> value;
  Validation diagnostic;

  bool ok() const { return value.has_value(); }
  const T& operator*() const {
    if (!value) throw std::invalid_argument(diagnostic.violation);
    return *value;
  }
};

inline Validated<HermitianOperator> validate_hermitian(const ComplexMatrix& m,
                                                       double tol = kDefaultTol) {
  Validation v = check_hermitian(m, tol);
  if (!v.ok) return {std::nullopt, std::move(v)};
  return {HermitianOperator(m, tol), std::move(v)};
}

inline Validated<DensityMatrix> validate_density(const ComplexMatrix& m,
                                                 double tol = kDefaultTol) {
  Validation v = check_density(m, tol);
  if (!v.ok) return {std::nullopt, std::move(v)};
  return {DensityMatrix(m, tol), std::move(v)};
}

inline Validation validate_unitary(const ComplexMatrix& m, double tol = kDefaultTol) {
  return check_unitary(m, tol);
}

}  // namespace qgame
