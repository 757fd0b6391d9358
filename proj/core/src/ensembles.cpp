#include "sspec/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "sspec/errors.hpp"

namespace sspec {
namespace {

bool is_palindromic(EnsembleFamily family) noexcept {
  return family == EnsembleFamily::PalindromicToeplitz || family == EnsembleFamily::PalindromicHankel;
}

void check_dimension(EnsembleFamily family, std::size_t n) {
  if (n == 0) throw IncompatibleDimension("dimension must be positive");
  if (is_palindromic(family) && n % 2 != 0) {
    throw IncompatibleDimension(std::string(to_string(family)) + " requires even N, got " + std::to_string(n));
  }
}

// Class of a position given in Toeplitz form: `offset` = |i - j| after the
// Hankel column reversal has been undone.
std::size_t toeplitz_class(EnsembleFamily family, std::size_t n, std::size_t offset) noexcept {
  switch (family) {
    case EnsembleFamily::PalindromicToeplitz:
    case EnsembleFamily::PalindromicHankel:
      return std::min(offset, n - 1 - offset);
    case EnsembleFamily::CirculantSymmetricToeplitz:
      return std::min(offset, n - offset);
    case EnsembleFamily::PlainSymmetricToeplitz:
    case EnsembleFamily::Diagonal:
      return offset;
  }
  return offset;
}

std::size_t class_unchecked(const EnsembleKind& kind, std::size_t n, std::size_t i, std::size_t j) noexcept {
  const std::size_t col = kind.family == EnsembleFamily::PalindromicHankel ? n + 1 - j : j;
  const std::size_t offset = i > col ? i - col : col - i;

  std::size_t cls;
  if (kind.family == EnsembleFamily::Diagonal) {
    if (offset != 0) return kStructuralZero;
    cls = i - 1;
  } else {
    cls = toeplitz_class(kind.family, n, offset);
  }

  if (cls == 0) {
    if (kind.zeroing == DiagonalZeroing::MainDiagonalAndCorners) return kStructuralZero;
    if (kind.zeroing == DiagonalZeroing::MainDiagonal && offset == 0) return kStructuralZero;
  }
  return cls;
}

}  // namespace

std::string_view to_string(EntryDistribution dist) noexcept {
  switch (dist) {
    case EntryDistribution::StdNormal: return "std-normal";
    case EntryDistribution::Rademacher: return "rademacher";
    case EntryDistribution::UniformSymmetric: return "uniform-symmetric";
  }
  return "unknown";
}

std::string_view to_string(EnsembleFamily family) noexcept {
  switch (family) {
    case EnsembleFamily::PalindromicToeplitz: return "palindromic-toeplitz";
    case EnsembleFamily::CirculantSymmetricToeplitz: return "circulant-symmetric-toeplitz";
    case EnsembleFamily::PalindromicHankel: return "palindromic-hankel";
    case EnsembleFamily::PlainSymmetricToeplitz: return "plain-toeplitz";
    case EnsembleFamily::Diagonal: return "diagonal";
  }
  return "unknown";
}

std::string_view to_string(DiagonalZeroing zeroing) noexcept {
  switch (zeroing) {
    case DiagonalZeroing::None: return "none";
    case DiagonalZeroing::MainDiagonal: return "main";
    case DiagonalZeroing::MainDiagonalAndCorners: return "main-and-corners";
  }
  return "unknown";
}

ParameterVector sample_parameters(EntryDistribution dist, std::size_t count, RandomStream& stream) {
  if (count == 0) throw InvalidArgument("sample_parameters: count must be positive");
  ParameterVector out;
  out.values.resize(count);
  auto& engine = stream.engine();
  switch (dist) {
    case EntryDistribution::StdNormal: {
      std::normal_distribution<double> normal(0.0, 1.0);
      for (auto& v : out.values) v = normal(engine);
      break;
    }
    case EntryDistribution::Rademacher: {
      std::bernoulli_distribution coin(0.5);
      for (auto& v : out.values) v = coin(engine) ? 1.0 : -1.0;
      break;
    }
    case EntryDistribution::UniformSymmetric: {
      const double half_width = std::sqrt(3.0);
      std::uniform_real_distribution<double> uniform(-half_width, half_width);
      for (auto& v : out.values) v = uniform(engine);
      break;
    }
  }
  return out;
}

std::size_t free_parameter_count(EnsembleFamily family, std::size_t n) {
  check_dimension(family, n);
  switch (family) {
    case EnsembleFamily::PalindromicToeplitz:
    case EnsembleFamily::PalindromicHankel:
      return n / 2;
    case EnsembleFamily::CirculantSymmetricToeplitz:
      return n / 2 + 1;
    case EnsembleFamily::PlainSymmetricToeplitz:
    case EnsembleFamily::Diagonal:
      return n;
  }
  return n;
}

std::size_t diagonal_class(const EnsembleKind& kind, std::size_t n, std::size_t i, std::size_t j) {
  check_dimension(kind.family, n);
  if (i < 1 || i > n || j < 1 || j > n) {
    throw IndexOutOfRange("position (" + std::to_string(i) + ", " + std::to_string(j) + ") outside 1.." +
                          std::to_string(n));
  }
  return class_unchecked(kind, n, i, j);
}

std::vector<std::size_t> class_table(const EnsembleKind& kind, std::size_t n) {
  check_dimension(kind.family, n);
  std::vector<std::size_t> table(n * n);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) table[(i - 1) * n + (j - 1)] = class_unchecked(kind, n, i, j);
  }
  return table;
}

SymmetricMatrix build_matrix(const EnsembleKind& kind, const ParameterVector& params, std::size_t n) {
  const std::size_t expected = free_parameter_count(kind, n);
  if (params.size() != expected) {
    throw LengthMismatch(std::string(to_string(kind.family)) + " at N=" + std::to_string(n) + " takes " +
                         std::to_string(expected) + " parameters, got " + std::to_string(params.size()));
  }
  DenseMatrix m(n);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const std::size_t cls = class_unchecked(kind, n, i, j);
      m(i - 1, j - 1) = cls == kStructuralZero ? 0.0 : params[cls];
    }
  }
  return SymmetricMatrix(std::move(m));
}

SymmetricMatrix principal_submatrix(const SymmetricMatrix& m, std::size_t k) {
  const std::size_t n = m.dimension();
  if (k < 1 || k > n) {
    throw IndexOutOfRange("principal submatrix size " + std::to_string(k) + " outside 1.." + std::to_string(n));
  }
  DenseMatrix sub(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) sub(i, j) = m(i, j);
  }
  return SymmetricMatrix(std::move(sub));
}

}  // namespace sspec
