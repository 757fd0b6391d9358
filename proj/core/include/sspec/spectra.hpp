#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "sspec/ensembles.hpp"
#include "sspec/matrix.hpp"

namespace sspec {

struct EigenOptions {
  /// Off-diagonal e_i is deflated once |e_i| <= tol * (|d_i| + |d_{i+1}|).
  double tol = std::numeric_limits<double>::epsilon();
  /// QL sweeps allowed per eigenvalue before NoConvergence.
  int max_iterations = 50;
};

/// Eigenvalues of a real symmetric matrix, ascending. Householder reduction
/// to tridiagonal form followed by implicit QL with Wilkinson shifts.
std::vector<double> eigenvalues_dense(const SymmetricMatrix& m, const EigenOptions& options = {});

/// Eigenvalues of the symmetric circulant with first row x_0, x_1, ...,
/// x_{N-1}, x_{N-l} = x_l, via lambda_k = sum_l x_l cos(2 pi k l / N).
/// Un-normalized and ascending. `params` holds x_0 .. x_{floor(N/2)}.
std::vector<double> eigenvalues_circulant(const ParameterVector& params, std::size_t n);

/// Eigenvalues of the ensemble member built from `params`. Uses the cosine
/// formula for the circulant family and the dense solver otherwise.
std::vector<double> ensemble_eigenvalues(const EnsembleKind& kind, const ParameterVector& params, std::size_t n,
                                         const EigenOptions& options = {});

/// Eigenvalues divided by sqrt(N), ascending. N is usually the number of
/// values; it is kept separately because the divisor is fixed by the matrix
/// dimension while moments and CDFs weight each stored value equally.
class SpectralSample {
 public:
  SpectralSample() = default;
  /// Sorts `values`; throws InvalidArgument on NaN.
  SpectralSample(std::size_t n, std::vector<double> values);

  std::size_t dimension() const noexcept { return n_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// Divides each eigenvalue by sqrt(N). The only place normalization happens.
/// Any number of eigenvalues is accepted.
SpectralSample normalize_spectrum(std::span<const double> eigenvalues, std::size_t n);

/// (1/N) sum values^m, i.e. N^{-(m/2+1)} sum lambda_i^m.
double spectral_moment(const SpectralSample& sample, unsigned m);

/// Right-continuous step CDF F(x) = #{values <= x} / N.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> sorted_values);

  double operator()(double x) const noexcept;
  std::span<const double> support() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

EmpiricalDistribution empirical_cdf(const SpectralSample& sample);

/// sup_x |F(x) - G(x)|, evaluated at every jump point of either CDF.
double sup_distance(const EmpiricalDistribution& f, const EmpiricalDistribution& g);

struct MomentEstimate {
  unsigned m = 0;
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t draws = 0;    ///< draws that contributed
  std::size_t skipped = 0;  ///< draws dropped after NoConvergence
};

struct MonteCarloConfig {
  EnsembleKind kind;
  EntryDistribution dist = EntryDistribution::StdNormal;
  std::size_t n = 0;
  unsigned m = 0;
  std::size_t draws = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;  ///< 0: hardware concurrency
  EigenOptions eigen;
};

/// Normalized spectrum of draw `draw` under master `seed`.
SpectralSample sample_spectrum(const EnsembleKind& kind, EntryDistribution dist, std::size_t n, std::uint64_t seed,
                               std::uint64_t draw, const EigenOptions& options = {});

/// Mean and standard error of spectral_moment over independent draws. Output
/// is identical for every thread count. Draws that fail to converge are
/// skipped; more than 1% skipped raises NoConvergence.
MomentEstimate monte_carlo_moment(const MonteCarloConfig& config);

/// Compensated (Neumaier) sum in the given order.
double compensated_sum(std::span<const double> values) noexcept;

}  // namespace sspec
