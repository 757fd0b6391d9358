#pragma once

// Executable checks of the structural facts the moment analysis rests on:
// interlacing, the rank inequality, the Hankel/Toeplitz correspondence, the
// palindromic/circulant submatrix identity, irrelevance of b0, and the
// almost-sure CLT for weighted cosine sums.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sspec/ensembles.hpp"
#include "sspec/spectra.hpp"

namespace sspec {

/// Slack added to every bound to absorb eigensolver round-off.
inline constexpr double kCheckSlack = 1e-8;

struct CheckReport {
  std::string name;
  bool passed = false;
  double worst_violation = 0.0;
  double bound = 0.0;
  std::string details;
};

/// Builds a report with passed = worst_violation <= bound + kCheckSlack.
CheckReport make_report(std::string name, double worst_violation, double bound, std::string details);

/// Ascending spectra of A (length N) and of its (N-1) principal submatrix.
/// worst_violation is the largest amount by which lambda_i <= mu_i <= lambda_{i+1} fails.
CheckReport check_interlacing(std::span<const double> full, std::span<const double> sub);

/// sup |F_A - F_B| against 4/N. Both samples are compared on the scale of
/// their raw eigenvalues, i.e. each value is multiplied back by sqrt of its
/// own dimension (a common rescaling leaves the sup distance unchanged).
CheckReport check_rank_inequality(const SpectralSample& sample_a, const SpectralSample& sample_b);

/// For the palindromic Hankel/Toeplitz pair built from `params`: H J = J H = T
/// exactly, H^2 = T^2 and H^4 = T^4 to relative 1e-10, and equal traces of
/// even powers up to 6. Exact mismatches are reported as the number of
/// differing entries so any mismatch fails. Odd-power traces go in details.
CheckReport check_hankel_toeplitz(const ParameterVector& params, std::size_t n);

/// The (N-1) principal submatrix of the palindromic Toeplitz matrix equals
/// the (N-1) symmetric circulant with the same parameters, bit for bit.
/// worst_violation counts mismatched entries.
CheckReport check_submatrix_identity(const ParameterVector& params, std::size_t n);

/// Compares the ESD of A with the ESDs after zeroing b0 on the main diagonal
/// and after also zeroing the corners, undoing the b0/sqrt(N) diagonal shift
/// first. Bound 8/N.
CheckReport check_b0_irrelevance(const ParameterVector& params, std::size_t n);
/// The same over `draws` paired random draws; worst case reported.
CheckReport check_b0_irrelevance(EntryDistribution dist, std::size_t n, std::size_t draws, std::uint64_t seed,
                                 unsigned threads = 0);

/// S_n^{(k)} = (n/2)^{-1/2} sum_{l=1..n} X_l cos(pi k l / n) for k = 1..n.
/// `x` holds X_1..X_n.
std::vector<double> cosine_sums_half(std::span<const double> x);
/// S_N^{(k)} = N^{-1/2} sum_{l=0..N-1} X_l cos(2 pi k l / N), N = 2n,
/// k = 0..N-1, with X_{N-l} = X_l. `x` holds X_0..X_n.
std::vector<double> cosine_sums_full(std::span<const double> x);

struct CltResult {
  double ks = 0.0;
  CheckReport report;
};

/// KS distance between the n cosine sums of X_1..X_n and Phi. Bound 3/sqrt(n).
CltResult clt_from_values(std::span<const double> x);
/// Draws X_1..X_n from `dist`; n even and >= 4.
CltResult clt_experiment(EntryDistribution dist, std::size_t n, std::uint64_t seed);

struct CltTrend {
  std::vector<std::size_t> ns;
  std::vector<double> median_ks;
  std::vector<std::vector<double>> ks_by_seed;  ///< [n index][seed index]
  CheckReport report;
};

/// The `count` per-seed master seeds used by trend runs under `seed`.
std::vector<std::uint64_t> trend_seeds(std::uint64_t seed, std::size_t count);

/// Runs n0, 2 n0, 4 n0, 8 n0 on nested prefixes of one draw per seed and
/// passes when the median KS decreases at every step.
CltTrend clt_trend(EntryDistribution dist, std::size_t n0, std::span<const std::uint64_t> seeds);

struct SuiteOptions {
  std::vector<std::size_t> sizes = {10, 50, 100, 200};
  std::size_t seeds = 50;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

/// Named suites: interlacing, rank, hankel, submatrix, b0, clt, or all.
/// Each returns one aggregated report per (suite, family or size).
std::vector<CheckReport> run_suite(const std::string& suite, const SuiteOptions& options = {});
std::vector<std::string> suite_names();

}  // namespace sspec
