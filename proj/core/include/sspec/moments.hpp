#pragma once

// Exact finite-N moments by brute-force enumeration of the trace expansion
//
//   E[Trace(A^m)] = sum over (i_1..i_m) of E[a_{i1 i2} a_{i2 i3} ... a_{im i1}],
//
// grouped by how the m cyclic "edges" (i_t, i_{t+1}) fall into diagonal
// classes. Everything here is independent of the eigensolver and serves as
// the oracle for the Monte Carlo path in spectra.hpp.

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "sspec/ensembles.hpp"

namespace sspec {

struct EnumerationOptions {
  std::uint64_t budget = 100'000'000;  ///< maximum number of tuples visited
  unsigned threads = 0;
};

/// Exact rational number, numerator / denominator with denominator > 0.
struct Fraction {
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;

  double value() const noexcept { return static_cast<double>(numerator) / static_cast<double>(denominator); }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// m-th moment of the standard Gaussian: (m-1)!! for even m, 0 for odd m.
double gaussian_moment(unsigned m);

/// Exact j-th moment of an entry distribution.
Fraction distribution_moment_exact(EntryDistribution dist, unsigned j);
inline double distribution_moment(EntryDistribution dist, unsigned j) {
  return distribution_moment_exact(dist, j).value();
}

/// Sorted (descending) multiplicities of the distinct classes met by the
/// edges of one tuple, e.g. {2, 2} when four edges fall into two classes
/// twice each.
using ProfileSignature = std::vector<unsigned>;

struct ExactMomentReport {
  EnsembleKind kind;
  std::size_t n = 0;
  unsigned m = 0;
  EntryDistribution dist = EntryDistribution::StdNormal;
  /// E[M_m(A_N)] = weighted_sum / N^{m/2 + 1}.
  double value = 0.0;
  /// sum over signatures of count * prod p_{n_j}, exact.
  Fraction weighted_sum;
  std::map<ProfileSignature, std::uint64_t> tuple_count_by_profile;
  /// Tuples touching a structural-zero entry; they contribute nothing.
  std::uint64_t structural_zero_tuples = 0;
};

/// Visits all N^m index tuples. Throws BudgetExceeded when N^m exceeds
/// `options.budget`.
ExactMomentReport exact_expected_moment(const EnsembleKind& kind, std::size_t n, unsigned m, EntryDistribution dist,
                                        const EnumerationOptions& options = {});

/// prod_j p_{n_j} for one signature.
Fraction profile_weight(EntryDistribution dist, const ProfileSignature& signature);

/// A perfect matching of the 2k edges. Edge t (1-based) joins i_t and
/// i_{t+1}, with i_{2k+1} = i_1. Each pair is stored (smaller, larger).
struct Matching {
  unsigned k = 0;
  std::vector<std::pair<unsigned, unsigned>> pairs;

  friend bool operator==(const Matching&, const Matching&) = default;
};

/// All (2k-1)!! perfect matchings of {1..2k}, 1 <= k <= 6. Canonical order:
/// the smallest unpaired edge is paired with each remaining edge in
/// increasing order, recursively.
std::vector<Matching> enumerate_matchings(unsigned k);

/// True when some pair joins two cyclically consecutive edges.
bool has_adjacent_pair(const Matching& matching);

/// Number of tuples in {1..N}^{2k} whose edges realize exactly this
/// matching: paired edges share a class, distinct pairs have distinct
/// classes, and no edge is a structural zero.
std::uint64_t matching_solution_count(const EnsembleKind& kind, const Matching& matching, std::size_t n,
                                      const EnumerationOptions& options = {});

/// (N, count / N^{k+1}) for each N.
std::vector<std::pair<std::size_t, double>> matching_contribution_series(const EnsembleKind& kind,
                                                                         const Matching& matching,
                                                                         const std::vector<std::size_t>& ns,
                                                                         const EnumerationOptions& options = {});

}  // namespace sspec
