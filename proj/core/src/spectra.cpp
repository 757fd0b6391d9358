#include "sspec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "sspec/errors.hpp"
#include "sspec/parallel.hpp"
#include "sspec/random.hpp"

namespace sspec {
namespace {

// Reduces the symmetric matrix to tridiagonal form by Householder
// reflections. Only the lower triangle of the working copy is referenced.
// On return diag has N entries and offdiag N entries with offdiag[N-1] = 0;
// offdiag[i] couples diag[i] and diag[i+1].
void tridiagonalize(std::vector<double>& a, std::size_t n, std::vector<double>& diag, std::vector<double>& offdiag) {
  diag.assign(n, 0.0);
  offdiag.assign(n, 0.0);
  std::vector<double> v(n), p(n);

  for (std::size_t k = 0; k + 2 < n; ++k) {
    diag[k] = a[k * n + k];
    const std::size_t first = k + 1;
    const std::size_t len = n - first;

    double scale = 0.0;
    for (std::size_t i = first; i < n; ++i) scale = std::max(scale, std::abs(a[i * n + k]));
    double tail = 0.0;
    for (std::size_t i = first + 1; i < n; ++i) tail += a[i * n + k] * a[i * n + k];
    if (scale == 0.0 || tail == 0.0) {
      offdiag[k] = a[first * n + k];
      continue;
    }

    double norm_sq = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      v[i] = a[(first + i) * n + k] / scale;
      norm_sq += v[i] * v[i];
    }
    const double alpha = v[0] >= 0.0 ? -std::sqrt(norm_sq) : std::sqrt(norm_sq);
    offdiag[k] = alpha * scale;
    v[0] -= alpha;
    const double vtv = norm_sq - 2.0 * alpha * (v[0] + alpha) + alpha * alpha;
    const double beta = 2.0 / vtv;

    // p = beta * A22 v using the lower triangle.
    std::fill(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(len), 0.0);
    for (std::size_t i = 0; i < len; ++i) {
      const double* row = &a[(first + i) * n + first];
      const double vi = v[i];
      double acc = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        acc += row[j] * v[j];
        p[j] += row[j] * vi;
      }
      p[i] += acc + row[i] * vi;
    }
    double ptv = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      p[i] *= beta;
      ptv += p[i] * v[i];
    }
    const double half = 0.5 * beta * ptv;
    for (std::size_t i = 0; i < len; ++i) p[i] -= half * v[i];  // p is now w

    // A22 -= v w^T + w v^T
    for (std::size_t i = 0; i < len; ++i) {
      double* row = &a[(first + i) * n + first];
      const double vi = v[i];
      const double wi = p[i];
      for (std::size_t j = 0; j <= i; ++j) row[j] -= vi * p[j] + wi * v[j];
    }
  }

  if (n >= 2) {
    diag[n - 2] = a[(n - 2) * n + (n - 2)];
    offdiag[n - 2] = a[(n - 1) * n + (n - 2)];
  }
  diag[n - 1] = a[(n - 1) * n + (n - 1)];
}

// Implicit QL with Wilkinson shifts on the symmetric tridiagonal (d, e).
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, const EigenOptions& options) {
  const std::size_t n = d.size();
  for (std::size_t l = 0; l < n; ++l) {
    int iterations = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= options.tol * dd) break;
      }
      if (m == l) break;
      if (iterations++ == options.max_iterations) {
        throw NoConvergence("tridiagonal QL did not converge for eigenvalue " + std::to_string(l) + " within " +
                            std::to_string(options.max_iterations) + " iterations");
      }

      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
}

}  // namespace

std::vector<double> eigenvalues_dense(const SymmetricMatrix& m, const EigenOptions& options) {
  if (!(options.tol > 0.0)) throw InvalidArgument("eigenvalue tolerance must be positive");
  const std::size_t n = m.dimension();
  if (n == 0) return {};

  std::vector<double> work(m.dense().data().begin(), m.dense().data().end());
  std::vector<double> diag, offdiag;
  tridiagonalize(work, n, diag, offdiag);
  tridiagonal_ql(diag, offdiag, options);
  std::sort(diag.begin(), diag.end());
  return diag;
}

std::vector<double> eigenvalues_circulant(const ParameterVector& params, std::size_t n) {
  const std::size_t expected = free_parameter_count(EnsembleFamily::CirculantSymmetricToeplitz, n);
  if (params.size() != expected) {
    throw LengthMismatch("circulant of size " + std::to_string(n) + " takes " + std::to_string(expected) +
                         " parameters, got " + std::to_string(params.size()));
  }

  std::vector<double> cosines(n);
  for (std::size_t r = 0; r < n; ++r) {
    cosines[r] = std::cos(2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n));
  }
  std::vector<double> row(n);
  for (std::size_t l = 0; l < n; ++l) row[l] = params[std::min(l, n - l)];

  std::vector<double> eigs(n);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    std::size_t phase = 0;  // k * l mod n
    for (std::size_t l = 0; l < n; ++l) {
      acc += row[l] * cosines[phase];
      phase += k;
      if (phase >= n) phase -= n;
    }
    eigs[k] = acc;
  }
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

std::vector<double> ensemble_eigenvalues(const EnsembleKind& kind, const ParameterVector& params, std::size_t n,
                                         const EigenOptions& options) {
  if (kind.family == EnsembleFamily::CirculantSymmetricToeplitz) {
    // x0 sits only on the main diagonal, so either zeroing mode removes it.
    if (kind.zeroing == DiagonalZeroing::None) return eigenvalues_circulant(params, n);
    ParameterVector zeroed = params;
    if (!zeroed.values.empty()) zeroed.values[0] = 0.0;
    return eigenvalues_circulant(zeroed, n);
  }
  return eigenvalues_dense(build_matrix(kind, params, n), options);
}

SpectralSample::SpectralSample(std::size_t n, std::vector<double> values) : n_(n), values_(std::move(values)) {
  if (std::any_of(values_.begin(), values_.end(), [](double v) { return std::isnan(v); })) {
    throw InvalidArgument("spectral sample contains NaN");
  }
  std::sort(values_.begin(), values_.end());
}

SpectralSample normalize_spectrum(std::span<const double> eigenvalues, std::size_t n) {
  const double root = std::sqrt(static_cast<double>(n));
  std::vector<double> values(eigenvalues.begin(), eigenvalues.end());
  for (double& v : values) v /= root;
  return SpectralSample(n, std::move(values));
}

double spectral_moment(const SpectralSample& sample, unsigned m) {
  if (sample.size() == 0) throw InvalidArgument("spectral moment of an empty sample");
  std::vector<double> powers(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double acc = 1.0;
    for (unsigned p = 0; p < m; ++p) acc *= sample[i];
    powers[i] = acc;
  }
  return compensated_sum(powers) / static_cast<double>(sample.size());
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> sorted_values) : values_(std::move(sorted_values)) {
  if (values_.empty()) throw InvalidArgument("empirical distribution of an empty sample");
  if (!std::is_sorted(values_.begin(), values_.end())) {
    throw InvalidArgument("empirical distribution requires sorted values");
  }
}

double EmpiricalDistribution::operator()(double x) const noexcept {
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

EmpiricalDistribution empirical_cdf(const SpectralSample& sample) {
  return EmpiricalDistribution(std::vector<double>(sample.values().begin(), sample.values().end()));
}

double sup_distance(const EmpiricalDistribution& f, const EmpiricalDistribution& g) {
  double worst = 0.0;
  for (const auto* dist : {&f, &g}) {
    for (double x : dist->support()) worst = std::max(worst, std::abs(f(x) - g(x)));
  }
  return worst;
}

SpectralSample sample_spectrum(const EnsembleKind& kind, EntryDistribution dist, std::size_t n, std::uint64_t seed,
                               std::uint64_t draw, const EigenOptions& options) {
  auto stream = RandomStream::substream(seed, draw);
  const auto params = sample_parameters(dist, free_parameter_count(kind, n), stream);
  return normalize_spectrum(ensemble_eigenvalues(kind, params, n, options), n);
}

MomentEstimate monte_carlo_moment(const MonteCarloConfig& config) {
  if (config.draws < 2) throw InvalidArgument("monte_carlo_moment needs at least 2 draws");
  free_parameter_count(config.kind, config.n);  // validates the dimension up front

  std::vector<std::optional<double>> per_draw(config.draws);
  parallel_for(config.draws, config.threads, [&](std::size_t d) {
    try {
      const auto sample = sample_spectrum(config.kind, config.dist, config.n, config.seed, d, config.eigen);
      per_draw[d] = spectral_moment(sample, config.m);
    } catch (const NoConvergence&) {
      per_draw[d].reset();
    }
  });

  std::vector<double> values;
  values.reserve(config.draws);
  for (const auto& v : per_draw) {
    if (v) values.push_back(*v);
  }
  MomentEstimate est;
  est.m = config.m;
  est.draws = values.size();
  est.skipped = config.draws - values.size();
  if (est.skipped * 100 > config.draws || est.draws < 2) {
    throw NoConvergence(std::to_string(est.skipped) + " of " + std::to_string(config.draws) +
                        " draws failed to converge");
  }

  const double count = static_cast<double>(est.draws);
  est.mean = compensated_sum(values) / count;
  std::vector<double> squares(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) squares[i] = (values[i] - est.mean) * (values[i] - est.mean);
  const double variance = compensated_sum(squares) / (count - 1.0);
  est.std_error = std::sqrt(variance / count);
  return est;
}

double compensated_sum(std::span<const double> values) noexcept {
  double sum = 0.0;
  double correction = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      correction += (sum - t) + v;
    } else {
      correction += (v - t) + sum;
    }
    sum = t;
  }
  return sum + correction;
}

}  // namespace sspec
