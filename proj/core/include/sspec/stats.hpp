#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sspec/spectra.hpp"

namespace sspec {

/// Phi(x) for the standard normal. Throws InvalidArgument on NaN.
double std_normal_cdf(double x);

/// Two-sided Kolmogorov statistic of a sorted sample against a fully
/// specified CDF: max_i max(i/n - F(s_i), F(s_i) - (i-1)/n).
double ks_statistic(std::span<const double> sorted_sample, const std::function<double(double)>& cdf);

/// Consecutive differences of normalized eigenvalues, rescaled to mean 1.
struct SpacingSample {
  std::vector<double> spacings;
  std::size_t lo = 0;  ///< 1-based first eigenvalue of the window
  std::size_t hi = 0;  ///< 1-based last eigenvalue of the window
};

/// Differences between eigenvalues lo..hi (1-based, inclusive) of the sorted
/// sample, divided by their mean. Yields hi - lo spacings.
SpacingSample spacings(const SpectralSample& sample, std::size_t lo, std::size_t hi);

/// Spacings of window lo..hi from `draws` independent spectra, each window
/// normalized to mean 1 on its own and the results concatenated in draw order.
std::vector<double> pooled_spacings(const EnsembleKind& kind, EntryDistribution dist, std::size_t n,
                                    std::size_t draws, std::size_t lo, std::size_t hi, std::uint64_t seed,
                                    unsigned threads = 0, const EigenOptions& options = {});

enum class SpacingModel {
  PoissonExp,  ///< e^{-x}
  WignerGOE,   ///< (pi/2) x e^{-pi x^2 / 4}, unit-mean Wigner surmise
};

/// Density of the model at x >= 0. Throws InvalidArgument for negative x.
double reference_density(SpacingModel model, double x);
/// Matching CDF, 0 for x < 0.
double reference_cdf(SpacingModel model, double x) noexcept;

struct Histogram {
  std::vector<double> edges;          ///< strictly increasing, size = bins + 1
  std::vector<std::size_t> counts;    ///< per half-open bin [e_i, e_{i+1})
  std::size_t total = 0;              ///< all values offered, in range or not
  std::size_t below = 0;
  std::size_t above = 0;              ///< includes values equal to the last edge

  std::size_t in_range() const noexcept { return total - below - above; }
};

Histogram histogram(std::span<const double> values, std::span<const double> edges);

/// `bins` equal-width bins over [lo, hi).
std::vector<double> uniform_edges(double lo, double hi, std::size_t bins);

}  // namespace sspec
