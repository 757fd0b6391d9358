#include "sspec/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sspec/errors.hpp"
#include "sspec/parallel.hpp"

namespace sspec {

double std_normal_cdf(double x) {
  if (std::isnan(x)) throw InvalidArgument("std_normal_cdf of NaN");
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double ks_statistic(std::span<const double> sorted_sample, const std::function<double(double)>& cdf) {
  if (sorted_sample.empty()) throw InvalidArgument("ks_statistic of an empty sample");
  if (!std::is_sorted(sorted_sample.begin(), sorted_sample.end())) {
    throw InvalidArgument("ks_statistic requires a sorted sample");
  }
  const double n = static_cast<double>(sorted_sample.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sorted_sample.size(); ++i) {
    const double f = cdf(sorted_sample[i]);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    worst = std::max({worst, above, below});
  }
  return worst;
}

SpacingSample spacings(const SpectralSample& sample, std::size_t lo, std::size_t hi) {
  if (lo < 1 || lo >= hi || hi > sample.size()) {
    throw IndexOutOfRange("spacing window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                          "] invalid for a sample of " + std::to_string(sample.size()));
  }
  SpacingSample out;
  out.lo = lo;
  out.hi = hi;
  out.spacings.reserve(hi - lo);
  for (std::size_t i = lo; i < hi; ++i) out.spacings.push_back(sample[i] - sample[i - 1]);
  const double mean = compensated_sum(out.spacings) / static_cast<double>(out.spacings.size());
  if (!(mean > 0.0)) throw InvalidArgument("spacing window has zero mean spacing");
  for (double& s : out.spacings) s /= mean;
  return out;
}

std::vector<double> pooled_spacings(const EnsembleKind& kind, EntryDistribution dist, std::size_t n,
                                    std::size_t draws, std::size_t lo, std::size_t hi, std::uint64_t seed,
                                    unsigned threads, const EigenOptions& options) {
  if (lo < 1 || lo >= hi || hi > n) {
    throw IndexOutOfRange("spacing window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                          "] invalid for N = " + std::to_string(n));
  }
  std::vector<std::vector<double>> per_draw(draws);
  parallel_for(draws, threads, [&](std::size_t d) {
    per_draw[d] = spacings(sample_spectrum(kind, dist, n, seed, d, options), lo, hi).spacings;
  });
  std::vector<double> pooled;
  pooled.reserve(draws * (hi - lo));
  for (const auto& s : per_draw) pooled.insert(pooled.end(), s.begin(), s.end());
  return pooled;
}

double reference_density(SpacingModel model, double x) {
  if (std::isnan(x) || x < 0.0) throw InvalidArgument("reference densities are defined for x >= 0");
  switch (model) {
    case SpacingModel::PoissonExp:
      return std::exp(-x);
    case SpacingModel::WignerGOE:
      return 0.5 * std::numbers::pi * x * std::exp(-0.25 * std::numbers::pi * x * x);
  }
  return 0.0;
}

double reference_cdf(SpacingModel model, double x) noexcept {
  if (!(x > 0.0)) return 0.0;
  switch (model) {
    case SpacingModel::PoissonExp:
      return -std::expm1(-x);
    case SpacingModel::WignerGOE:
      return -std::expm1(-0.25 * std::numbers::pi * x * x);
  }
  return 0.0;
}

Histogram histogram(std::span<const double> values, std::span<const double> edges) {
  if (edges.size() < 2) throw InvalidArgument("histogram needs at least two edges");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) throw InvalidArgument("histogram edges must be strictly increasing");
  }
  Histogram h;
  h.edges.assign(edges.begin(), edges.end());
  h.counts.assign(edges.size() - 1, 0);
  for (double v : values) {
    ++h.total;
    if (v < edges.front()) {
      ++h.below;
    } else if (!(v < edges.back())) {
      ++h.above;
    } else {
      const auto it = std::upper_bound(edges.begin(), edges.end(), v);
      ++h.counts[static_cast<std::size_t>(it - edges.begin()) - 1];
    }
  }
  return h;
}

std::vector<double> uniform_edges(double lo, double hi, std::size_t bins) {
  if (bins == 0 || !(hi > lo)) throw InvalidArgument("uniform_edges needs bins >= 1 and hi > lo");
  std::vector<double> edges(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) edges[i] = lo + width * static_cast<double>(i);
  edges.back() = hi;
  return edges;
}

}  // namespace sspec
