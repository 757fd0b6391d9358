#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sspec {

/// Dense row-major square matrix. Indices are 0-based.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}
  DenseMatrix(std::size_t n, std::vector<double> row_major);

  static DenseMatrix identity(std::size_t n);
  /// The exchange matrix J: ones on the anti-diagonal.
  static DenseMatrix exchange(std::size_t n);

  std::size_t dimension() const noexcept { return n_; }

  double& operator()(std::size_t row, std::size_t col) noexcept { return data_[row * n_ + col]; }
  double operator()(std::size_t row, std::size_t col) const noexcept { return data_[row * n_ + col]; }

  std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * n_, n_}; }
  std::span<const double> data() const noexcept { return data_; }

  double trace() const noexcept;
  double max_abs() const noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

DenseMatrix multiply(const DenseMatrix& lhs, const DenseMatrix& rhs);
/// lhs^power by repeated multiplication; power >= 1.
DenseMatrix power(const DenseMatrix& base, unsigned power);

/// Dense real symmetric matrix. The full matrix is stored; symmetry is exact
/// (a(i,j) and a(j,i) are bit-equal), checked on construction.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  /// Throws InvalidArgument unless `m` is exactly symmetric and NaN-free.
  explicit SymmetricMatrix(DenseMatrix m);

  std::size_t dimension() const noexcept { return m_.dimension(); }
  double operator()(std::size_t row, std::size_t col) const noexcept { return m_(row, col); }
  const DenseMatrix& dense() const noexcept { return m_; }

  friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

 private:
  DenseMatrix m_;
};

}  // namespace sspec
