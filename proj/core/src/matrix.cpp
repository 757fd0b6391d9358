#include "sspec/matrix.hpp"

#include <cmath>
#include <string>

#include "sspec/errors.hpp"

namespace sspec {

DenseMatrix::DenseMatrix(std::size_t n, std::vector<double> row_major) : n_(n), data_(std::move(row_major)) {
  if (data_.size() != n * n) {
    throw LengthMismatch("dense matrix of dimension " + std::to_string(n) + " needs " + std::to_string(n * n) +
                         " entries, got " + std::to_string(data_.size()));
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::exchange(std::size_t n) {
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, n - 1 - i) = 1.0;
  return m;
}

double DenseMatrix::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double DenseMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

DenseMatrix multiply(const DenseMatrix& lhs, const DenseMatrix& rhs) {
  const std::size_t n = lhs.dimension();
  if (rhs.dimension() != n) throw LengthMismatch("matrix product of mismatched dimensions");
  DenseMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double a = lhs(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

DenseMatrix power(const DenseMatrix& base, unsigned power) {
  if (power == 0) throw InvalidArgument("matrix power must be at least 1");
  DenseMatrix out = base;
  for (unsigned p = 1; p < power; ++p) out = multiply(out, base);
  return out;
}

SymmetricMatrix::SymmetricMatrix(DenseMatrix m) : m_(std::move(m)) {
  const std::size_t n = m_.dimension();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double a = m_(i, j);
      if (std::isnan(a)) throw InvalidArgument("matrix contains NaN");
      if (a != m_(j, i)) {
        throw InvalidArgument("matrix is not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
}

}  // namespace sspec
