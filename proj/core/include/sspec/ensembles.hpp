#pragma once

// Structured random-matrix ensembles.
//
// Every ensemble here is a real symmetric matrix whose entries are
// determined by a short vector of independent parameters b_0, b_1, ...
// The map from a position (i, j) to the index of the parameter it carries
// is `diagonal_class`; two entries are forced equal exactly when their
// classes agree. Matrices are always built un-normalized.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "sspec/matrix.hpp"
#include "sspec/random.hpp"

namespace sspec {

/// Law of the independent parameters. Each variant has mean 0 and variance 1.
enum class EntryDistribution {
  StdNormal,
  Rademacher,        ///< +1 or -1 with probability 1/2 each
  UniformSymmetric,  ///< uniform on [-sqrt(3), sqrt(3)]
};

enum class EnsembleFamily {
  /// Symmetric Toeplitz with a palindromic first row (b0 b1 ... b1 b0); even N only.
  PalindromicToeplitz,
  /// Symmetric circulant: first row (x0 x1 ... x1) with x_{N-j} = x_j.
  CirculantSymmetricToeplitz,
  /// Column reversal of the palindromic Toeplitz matrix: H = T J.
  PalindromicHankel,
  PlainSymmetricToeplitz,
  Diagonal,
};

/// Which occurrences of b0 are forced to zero.
///
/// `MainDiagonal` zeroes the b0 entries on the Toeplitz main diagonal and
/// keeps the b0 corner entries of the palindromic form. `MainDiagonalAndCorners`
/// zeroes every b0 entry. For the Hankel family both refer to the positions
/// that map to those Toeplitz positions under column reversal, so H = T J
/// continues to hold.
enum class DiagonalZeroing { None, MainDiagonal, MainDiagonalAndCorners };

struct EnsembleKind {
  EnsembleFamily family = EnsembleFamily::PalindromicToeplitz;
  DiagonalZeroing zeroing = DiagonalZeroing::None;

  friend bool operator==(const EnsembleKind&, const EnsembleKind&) = default;
};

/// The independent parameters (b_0, b_1, ...) of one matrix.
struct ParameterVector {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const noexcept { return values[i]; }
};

/// Class index of entries that are identically zero (off-diagonal entries of
/// a diagonal matrix, or b0 entries removed by `DiagonalZeroing`).
inline constexpr std::size_t kStructuralZero = std::numeric_limits<std::size_t>::max();

std::string_view to_string(EntryDistribution dist) noexcept;
std::string_view to_string(EnsembleFamily family) noexcept;
std::string_view to_string(DiagonalZeroing zeroing) noexcept;

/// Draws `count` independent values from `dist` using `stream`.
ParameterVector sample_parameters(EntryDistribution dist, std::size_t count, RandomStream& stream);

/// N/2 for the palindromic families, floor(N/2)+1 for the circulant family and
/// N otherwise. Throws IncompatibleDimension for N == 0 or an odd palindromic N.
std::size_t free_parameter_count(EnsembleFamily family, std::size_t n);
inline std::size_t free_parameter_count(const EnsembleKind& kind, std::size_t n) {
  return free_parameter_count(kind.family, n);
}

/// Parameter index carried by entry (i, j), with 1-based i and j, or
/// kStructuralZero. Honors `kind.zeroing`.
std::size_t diagonal_class(const EnsembleKind& kind, std::size_t n, std::size_t i, std::size_t j);

/// Class table for all N^2 positions, row-major with 0-based storage.
std::vector<std::size_t> class_table(const EnsembleKind& kind, std::size_t n);

SymmetricMatrix build_matrix(const EnsembleKind& kind, const ParameterVector& params, std::size_t n);

/// The top-left k x k block.
SymmetricMatrix principal_submatrix(const SymmetricMatrix& m, std::size_t k);

}  // namespace sspec
