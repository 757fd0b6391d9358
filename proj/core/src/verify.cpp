#include "sspec/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sspec/errors.hpp"
#include "sspec/parallel.hpp"
#include "sspec/random.hpp"
#include "sspec/stats.hpp"

namespace sspec {
namespace {

constexpr double kHankelPowerTolerance = 1e-10;

CheckReport make_report_with_slack(std::string name, double worst, double bound, double slack, std::string details) {
  CheckReport r;
  r.name = std::move(name);
  r.worst_violation = worst;
  r.bound = bound;
  r.passed = worst <= bound + slack;
  r.details = std::move(details);
  return r;
}

std::size_t count_mismatches(const DenseMatrix& a, const DenseMatrix& b) {
  std::size_t mismatches = 0;
  const auto lhs = a.data();
  const auto rhs = b.data();
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (lhs[i] != rhs[i]) ++mismatches;
  }
  return mismatches;
}

double relative_difference(const DenseMatrix& a, const DenseMatrix& b) {
  double diff = 0.0;
  const auto lhs = a.data();
  const auto rhs = b.data();
  for (std::size_t i = 0; i < lhs.size(); ++i) diff = std::max(diff, std::abs(lhs[i] - rhs[i]));
  const double scale = std::max({a.max_abs(), b.max_abs(), std::numeric_limits<double>::min()});
  return diff / scale;
}

double relative_difference(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), std::numeric_limits<double>::min()});
  return std::abs(a - b) / scale;
}

// sum_ij m_ij m_ji = Trace(m^2) for the matrices used here.
double trace_of_product(const DenseMatrix& a, const DenseMatrix& b) {
  const std::size_t n = a.dimension();
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) t += a(i, j) * b(j, i);
  }
  return t;
}

std::vector<double> cosine_table(std::size_t n) {
  // cos(pi r / n) for r = 0 .. 2n-1
  std::vector<double> table(2 * n);
  for (std::size_t r = 0; r < 2 * n; ++r) {
    table[r] = std::cos(std::numbers::pi * static_cast<double>(r) / static_cast<double>(n));
  }
  return table;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

CheckReport aggregate(const std::string& name, const std::vector<CheckReport>& parts, double bound) {
  double worst = 0.0;
  std::size_t failures = 0;
  for (const auto& p : parts) {
    worst = std::max(worst, p.worst_violation);
    if (!p.passed) ++failures;
  }
  CheckReport r;
  r.name = name;
  r.worst_violation = worst;
  r.bound = bound;
  r.passed = failures == 0;
  r.details = std::to_string(parts.size() - failures) + "/" + std::to_string(parts.size()) + " runs passed";
  for (const auto& p : parts) {
    if (!p.passed) {
      r.details += "; first failure: " + p.details;
      break;
    }
  }
  return r;
}

constexpr EnsembleFamily kAllFamilies[] = {
    EnsembleFamily::PalindromicToeplitz, EnsembleFamily::CirculantSymmetricToeplitz,
    EnsembleFamily::PalindromicHankel, EnsembleFamily::PlainSymmetricToeplitz, EnsembleFamily::Diagonal};

bool supports(EnsembleFamily family, std::size_t n) {
  const bool palindromic =
      family == EnsembleFamily::PalindromicToeplitz || family == EnsembleFamily::PalindromicHankel;
  return n >= 2 && (!palindromic || n % 2 == 0);
}

// Per-run seeds: draw index packs (suite, family, size, seed) so suites never share draws.
std::uint64_t run_index(std::uint64_t suite, std::uint64_t family, std::size_t n, std::size_t s) {
  return (((suite * 8 + family) * 4096 + n) << 20) + s;
}

ParameterVector draw_params(EnsembleFamily family, std::size_t n, std::uint64_t seed, std::uint64_t index) {
  auto stream = RandomStream::substream(seed, index);
  return sample_parameters(EntryDistribution::StdNormal, free_parameter_count(family, n), stream);
}

std::vector<CheckReport> spectral_sweep(const std::string& suite, std::uint64_t suite_id, const SuiteOptions& options) {
  std::vector<CheckReport> out;
  for (std::size_t f = 0; f < std::size(kAllFamilies); ++f) {
    const EnsembleFamily family = kAllFamilies[f];
    for (std::size_t n : options.sizes) {
      if (!supports(family, n)) continue;
      const EnsembleKind kind{family, DiagonalZeroing::None};
      std::vector<CheckReport> parts(options.seeds);
      parallel_for(options.seeds, options.threads, [&](std::size_t s) {
        const auto params = draw_params(family, n, options.seed, run_index(suite_id, f, n, s));
        const auto full = build_matrix(kind, params, n);
        const auto sub = principal_submatrix(full, n - 1);
        const auto full_eigs = eigenvalues_dense(full);
        const auto sub_eigs = eigenvalues_dense(sub);
        if (suite_id == 0) {
          parts[s] = check_interlacing(full_eigs, sub_eigs);
        } else {
          parts[s] = check_rank_inequality(normalize_spectrum(full_eigs, n), normalize_spectrum(sub_eigs, n - 1));
        }
      });
      const double bound = suite_id == 0 ? 0.0 : 4.0 / static_cast<double>(n);
      out.push_back(aggregate(suite + "/" + std::string(to_string(family)) + "/N=" + std::to_string(n), parts, bound));
    }
  }
  return out;
}

std::vector<CheckReport> param_sweep(const std::string& suite, std::uint64_t suite_id, const SuiteOptions& options) {
  std::vector<CheckReport> out;
  for (std::size_t n : options.sizes) {
    if (n % 2 != 0) continue;
    std::vector<CheckReport> parts(options.seeds);
    parallel_for(options.seeds, options.threads, [&](std::size_t s) {
      const auto params =
          draw_params(EnsembleFamily::PalindromicToeplitz, n, options.seed, run_index(suite_id, 0, n, s));
      switch (suite_id) {
        case 2: parts[s] = check_hankel_toeplitz(params, n); break;
        case 3: parts[s] = check_submatrix_identity(params, n); break;
        default: parts[s] = check_b0_irrelevance(params, n); break;
      }
    });
    const double bound = suite_id == 2 ? kHankelPowerTolerance : suite_id == 3 ? 0.0 : 8.0 / static_cast<double>(n);
    out.push_back(aggregate(suite + "/N=" + std::to_string(n), parts, bound));
  }
  return out;
}

}  // namespace

CheckReport make_report(std::string name, double worst_violation, double bound, std::string details) {
  return make_report_with_slack(std::move(name), worst_violation, bound, kCheckSlack, std::move(details));
}

CheckReport check_interlacing(std::span<const double> full, std::span<const double> sub) {
  if (full.empty() || sub.size() + 1 != full.size()) {
    throw LengthMismatch("interlacing needs spectra of lengths N and N-1");
  }
  double worst = 0.0;
  std::size_t where = 0;
  for (std::size_t i = 0; i < sub.size(); ++i) {
    const double v = std::max({0.0, full[i] - sub[i], sub[i] - full[i + 1]});
    if (v > worst) {
      worst = v;
      where = i;
    }
  }
  std::string details = "N=" + std::to_string(full.size()) + ", worst violation " + format_double(worst);
  if (worst > 0.0) details += " at submatrix eigenvalue " + std::to_string(where + 1);
  return make_report("interlacing", worst, 0.0, std::move(details));
}

CheckReport check_rank_inequality(const SpectralSample& sample_a, const SpectralSample& sample_b) {
  const std::size_t n = sample_a.dimension();
  if (n < 2 || sample_b.dimension() + 1 != n) {
    throw LengthMismatch("rank inequality compares dimensions N and N-1");
  }
  auto raw = [](const SpectralSample& s) {
    const double root = std::sqrt(static_cast<double>(s.dimension()));
    std::vector<double> v(s.values().begin(), s.values().end());
    for (double& x : v) x *= root;
    return EmpiricalDistribution(std::move(v));
  };
  const double sup = sup_distance(raw(sample_a), raw(sample_b));
  const double bound = 4.0 / static_cast<double>(n);
  return make_report("rank-inequality", sup, bound,
                     "N=" + std::to_string(n) + ", sup|F_A - F_B| = " + format_double(sup) + " vs 4/N = " +
                         format_double(bound));
}

CheckReport check_hankel_toeplitz(const ParameterVector& params, std::size_t n) {
  if (n % 2 != 0) throw IncompatibleDimension("Hankel/Toeplitz correspondence needs even N");
  const DenseMatrix t = build_matrix({EnsembleFamily::PalindromicToeplitz}, params, n).dense();
  const DenseMatrix h = build_matrix({EnsembleFamily::PalindromicHankel}, params, n).dense();
  const DenseMatrix j = DenseMatrix::exchange(n);

  const std::size_t mismatches = count_mismatches(multiply(h, j), t) + count_mismatches(multiply(j, h), t);

  const DenseMatrix h2 = multiply(h, h);
  const DenseMatrix t2 = multiply(t, t);
  const DenseMatrix h3 = multiply(h2, h);
  const DenseMatrix t3 = multiply(t2, t);
  const DenseMatrix h4 = multiply(h2, h2);
  const DenseMatrix t4 = multiply(t2, t2);

  double worst = std::max(relative_difference(h2, t2), relative_difference(h4, t4));
  // Trace(X^2) = tr(X X), Trace(X^4) = tr(X^2 X^2), Trace(X^6) = tr(X^3 X^3).
  worst = std::max(worst, relative_difference(trace_of_product(h, h), trace_of_product(t, t)));
  worst = std::max(worst, relative_difference(trace_of_product(h2, h2), trace_of_product(t2, t2)));
  worst = std::max(worst, relative_difference(trace_of_product(h3, h3), trace_of_product(t3, t3)));

  const double odd_gap = relative_difference(h3.trace(), t3.trace());
  std::string details = "N=" + std::to_string(n) + ", exact mismatches " + std::to_string(mismatches) +
                        ", even-power relative gap " + format_double(worst) + ", Trace(H^3) vs Trace(T^3) relative gap " +
                        format_double(odd_gap) + " (not required)";
  if (mismatches > 0) worst = static_cast<double>(mismatches);
  return make_report_with_slack("hankel-toeplitz", worst, kHankelPowerTolerance, 0.0, std::move(details));
}

CheckReport check_submatrix_identity(const ParameterVector& params, std::size_t n) {
  if (n % 2 != 0) throw IncompatibleDimension("submatrix identity needs even N");
  const auto pal = build_matrix({EnsembleFamily::PalindromicToeplitz}, params, n);
  const auto sub = principal_submatrix(pal, n - 1);
  const auto circ = build_matrix({EnsembleFamily::CirculantSymmetricToeplitz}, params, n - 1);
  const std::size_t mismatches = count_mismatches(sub.dense(), circ.dense());
  return make_report_with_slack("submatrix-identity", static_cast<double>(mismatches), 0.0, 0.0,
                                "N=" + std::to_string(n) + ", mismatched entries " + std::to_string(mismatches));
}

CheckReport check_b0_irrelevance(const ParameterVector& params, std::size_t n) {
  if (params.size() == 0) throw LengthMismatch("b0 check needs at least one parameter");
  const double shift = params[0] / std::sqrt(static_cast<double>(n));

  auto esd = [&](DiagonalZeroing zeroing) {
    const EnsembleKind kind{EnsembleFamily::PalindromicToeplitz, zeroing};
    auto sample = normalize_spectrum(eigenvalues_dense(build_matrix(kind, params, n)), n);
    std::vector<double> v(sample.values().begin(), sample.values().end());
    if (zeroing != DiagonalZeroing::None) {
      for (double& x : v) x += shift;
    }
    return EmpiricalDistribution(std::move(v));
  };
  const auto full = esd(DiagonalZeroing::None);
  const double main_only = sup_distance(full, esd(DiagonalZeroing::MainDiagonal));
  const double with_corners = sup_distance(full, esd(DiagonalZeroing::MainDiagonalAndCorners));
  const double bound = 8.0 / static_cast<double>(n);
  return make_report("b0-irrelevance", std::max(main_only, with_corners), bound,
                     "N=" + std::to_string(n) + ", b0=" + format_double(params[0]) +
                         ", shift-corrected sup distance: main diagonal " + format_double(main_only) +
                         ", main diagonal and corners " + format_double(with_corners) + " vs 8/N = " +
                         format_double(bound));
}

CheckReport check_b0_irrelevance(EntryDistribution dist, std::size_t n, std::size_t draws, std::uint64_t seed,
                                 unsigned threads) {
  const std::size_t count = free_parameter_count(EnsembleFamily::PalindromicToeplitz, n);
  if (draws == 0) throw InvalidArgument("b0 check needs at least one draw");
  std::vector<CheckReport> parts(draws);
  parallel_for(draws, threads, [&](std::size_t d) {
    auto stream = RandomStream::substream(seed, d);
    parts[d] = check_b0_irrelevance(sample_parameters(dist, count, stream), n);
  });
  return aggregate("b0-irrelevance/N=" + std::to_string(n), parts, 8.0 / static_cast<double>(n));
}

std::vector<double> cosine_sums_half(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) throw InvalidArgument("cosine sums need at least one value");
  const auto table = cosine_table(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n) / 2.0);
  std::vector<double> sums(n);
  for (std::size_t k = 1; k <= n; ++k) {
    double acc = 0.0;
    std::size_t phase = k % (2 * n);  // k * l mod 2n at l = 1
    for (std::size_t l = 1; l <= n; ++l) {
      acc += x[l - 1] * table[phase];
      phase += k;
      if (phase >= 2 * n) phase -= 2 * n;
    }
    sums[k - 1] = scale * acc;
  }
  return sums;
}

std::vector<double> cosine_sums_full(std::span<const double> x) {
  if (x.size() < 2) throw InvalidArgument("full cosine sums need X_0..X_n with n >= 1");
  const std::size_t n = x.size() - 1;
  const std::size_t big = 2 * n;
  const auto table = cosine_table(n);  // cos(2 pi r / N) = cos(pi r / n)
  const double scale = 1.0 / std::sqrt(static_cast<double>(big));
  std::vector<double> sums(big);
  for (std::size_t k = 0; k < big; ++k) {
    double acc = 0.0;
    std::size_t phase = 0;
    for (std::size_t l = 0; l < big; ++l) {
      acc += x[l <= n ? l : big - l] * table[phase];
      phase += k;
      if (phase >= big) phase -= big;
    }
    sums[k] = scale * acc;
  }
  return sums;
}

CltResult clt_from_values(std::span<const double> x) {
  auto sums = cosine_sums_half(x);
  std::sort(sums.begin(), sums.end());
  CltResult result;
  result.ks = ks_statistic(sums, [](double v) { return std_normal_cdf(v); });
  const double bound = 3.0 / std::sqrt(static_cast<double>(x.size()));
  result.report = make_report_with_slack("clt", result.ks, bound, 0.0,
                                         "n=" + std::to_string(x.size()) + ", KS to Phi " + format_double(result.ks) +
                                             " vs 3/sqrt(n) = " + format_double(bound));
  return result;
}

CltResult clt_experiment(EntryDistribution dist, std::size_t n, std::uint64_t seed) {
  if (n < 4 || n % 2 != 0) throw InvalidArgument("clt_experiment needs an even n >= 4");
  auto stream = RandomStream::substream(seed, 0);
  const auto x = sample_parameters(dist, n, stream);
  return clt_from_values(x.values);
}

CltTrend clt_trend(EntryDistribution dist, std::size_t n0, std::span<const std::uint64_t> seeds) {
  if (n0 < 4 || n0 % 2 != 0) throw InvalidArgument("clt_trend needs an even n0 >= 4");
  if (seeds.empty()) throw InvalidArgument("clt_trend needs at least one seed");
  CltTrend trend;
  for (std::size_t step = 0; step < 4; ++step) trend.ns.push_back(n0 << step);
  trend.ks_by_seed.assign(trend.ns.size(), std::vector<double>(seeds.size()));

  parallel_for(seeds.size(), 0, [&](std::size_t s) {
    auto stream = RandomStream::substream(seeds[s], 0);
    const auto x = sample_parameters(dist, trend.ns.back(), stream);
    for (std::size_t step = 0; step < trend.ns.size(); ++step) {
      trend.ks_by_seed[step][s] = clt_from_values(std::span(x.values).first(trend.ns[step])).ks;
    }
  });

  double worst_step = -std::numeric_limits<double>::infinity();
  std::string details = "median KS:";
  for (std::size_t step = 0; step < trend.ns.size(); ++step) {
    trend.median_ks.push_back(median(trend.ks_by_seed[step]));
    details += " n=" + std::to_string(trend.ns[step]) + ":" + format_double(trend.median_ks.back());
    if (step > 0) worst_step = std::max(worst_step, trend.median_ks[step] - trend.median_ks[step - 1]);
  }
  // Strict decrease: every step must change the median by a negative amount.
  trend.report = make_report_with_slack("clt-trend", worst_step, 0.0, 0.0, std::move(details));
  if (worst_step == 0.0) trend.report.passed = false;
  return trend;
}

std::vector<std::uint64_t> trend_seeds(std::uint64_t seed, std::size_t count) {
  std::vector<std::uint64_t> seeds;
  for (std::size_t s = 0; s < count; ++s) seeds.push_back(split_seed(seed, 0xC17 + s));
  return seeds;
}

std::vector<std::string> suite_names() { return {"interlacing", "rank", "hankel", "submatrix", "b0", "clt"}; }

std::vector<CheckReport> run_suite(const std::string& suite, const SuiteOptions& options) {
  if (suite == "all") {
    std::vector<CheckReport> all;
    for (const auto& name : suite_names()) {
      auto part = run_suite(name, options);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  if (suite == "interlacing") return spectral_sweep(suite, 0, options);
  if (suite == "rank") return spectral_sweep(suite, 1, options);
  if (suite == "hankel") return param_sweep(suite, 2, options);
  if (suite == "submatrix") return param_sweep(suite, 3, options);
  if (suite == "b0") return param_sweep(suite, 4, options);
  if (suite == "clt") {
    const auto seeds = trend_seeds(options.seed, 10);
    auto trend = clt_trend(EntryDistribution::StdNormal, 1024, seeds);
    auto single = clt_experiment(EntryDistribution::StdNormal, 4096, options.seed);
    single.report.name = "clt/n=4096";
    return {trend.report, single.report};
  }
  throw InvalidArgument("unknown verification suite '" + suite + "'");
}

}  // namespace sspec
