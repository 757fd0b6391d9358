#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "sspec/errors.hpp"
#include "sspec/spectra.hpp"

using namespace sspec;

namespace {

std::vector<double> eigen_reference(const SymmetricMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.dimension());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(out.begin(), out.end());
  return out;
}

SymmetricMatrix random_symmetric(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  RandomStream stream(seed);
  const auto p = sample_parameters(EntryDistribution::StdNormal, n * n, stream);
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) m(i, j) = m(j, i) = scale * p[i * n + j];
  return SymmetricMatrix(std::move(m));
}

double max_gap(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
  return gap;
}

double spectral_radius(const std::vector<double>& v) {
  return std::max(std::abs(v.front()), std::abs(v.back()));
}

}  // namespace

TEST_CASE("eigenvalues_dense on known spectra") {
  CHECK(eigenvalues_dense(SymmetricMatrix(DenseMatrix(3, {3, 0, 0, 0, 1, 0, 0, 0, 2}))) ==
        std::vector<double>{1, 2, 3});

  const auto j2 = eigenvalues_dense(SymmetricMatrix(DenseMatrix::exchange(2)));
  CHECK(j2[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(j2[1] == doctest::Approx(1.0).epsilon(1e-14));

  const auto rank_one = eigenvalues_dense(build_matrix({EnsembleFamily::PalindromicToeplitz}, {{2.5}}, 2));
  CHECK(std::abs(rank_one[0]) < 1e-14);
  CHECK(rank_one[1] == doctest::Approx(5.0).epsilon(1e-14));

  // J_N has eigenvalues -1 (floor(N/2) times) and +1.
  for (std::size_t n : {3, 8, 31}) {
    const auto e = eigenvalues_dense(SymmetricMatrix(DenseMatrix::exchange(n)));
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(e[i] - (i < n / 2 ? -1.0 : 1.0)) < 1e-12);
  }

  CHECK(eigenvalues_dense(SymmetricMatrix(DenseMatrix(1, {-4.0}))) == std::vector<double>{-4.0});
  CHECK(eigenvalues_dense(SymmetricMatrix(DenseMatrix(5))) == std::vector<double>(5, 0.0));
  CHECK(eigenvalues_dense(SymmetricMatrix(DenseMatrix::identity(6))) == std::vector<double>(6, 1.0));
}

TEST_CASE("eigenvalues_dense agrees with an independent solver") {
  for (std::size_t n = 1; n <= 64; n += 3) {
    for (double scale : {1e-6, 1.0, 1e6}) {
      CAPTURE(n);
      CAPTURE(scale);
      const auto m = random_symmetric(n, 1000 + n, scale);
      const auto ours = eigenvalues_dense(m);
      const auto ref = eigen_reference(m);
      CHECK(std::is_sorted(ours.begin(), ours.end()));
      CHECK(max_gap(ours, ref) <= 1e-12 * spectral_radius(ref) * static_cast<double>(n));
    }
  }
  SUBCASE("structured ensembles, including degenerate spectra") {
    for (auto family : {EnsembleFamily::PalindromicToeplitz, EnsembleFamily::CirculantSymmetricToeplitz,
                        EnsembleFamily::PalindromicHankel, EnsembleFamily::PlainSymmetricToeplitz}) {
      for (std::size_t n : {2, 10, 50, 120}) {
        auto stream = RandomStream::substream(77, n);
        const EnsembleKind kind{family};
        const auto p = sample_parameters(EntryDistribution::StdNormal, free_parameter_count(kind, n), stream);
        const auto m = build_matrix(kind, p, n);
        const auto ref = eigen_reference(m);
        CHECK(max_gap(eigenvalues_dense(m), ref) <= 1e-8);
      }
    }
  }
}

TEST_CASE("eigenvalues_dense errors") {
  const auto m = random_symmetric(6, 3);
  CHECK_THROWS_AS(eigenvalues_dense(m, {.tol = 0.0}), InvalidArgument);
  CHECK_THROWS_AS(eigenvalues_dense(m, {.tol = 1e-300, .max_iterations = 0}), NoConvergence);
}

TEST_CASE("eigenvalues_circulant") {
  const auto ones = eigenvalues_circulant({{1, 0, 0}}, 5);
  for (double v : ones) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));

  auto cycle = eigenvalues_circulant({{0, 1, 0}}, 5);
  std::vector<double> expected;
  for (int k = 0; k < 5; ++k) expected.push_back(2.0 * std::cos(2.0 * std::numbers::pi * k / 5.0));
  std::sort(expected.begin(), expected.end());
  CHECK(max_gap(cycle, expected) < 1e-14);

  CHECK_THROWS_AS(eigenvalues_circulant({{1, 2}}, 5), LengthMismatch);

  SUBCASE("fast path equals the dense solver") {
    const EnsembleKind circ{EnsembleFamily::CirculantSymmetricToeplitz};
    for (std::size_t n = 3; n <= 101; ++n) {
      auto stream = RandomStream::substream(2024, n);
      const auto p = sample_parameters(EntryDistribution::StdNormal, free_parameter_count(circ, n), stream);
      CAPTURE(n);
      CHECK(max_gap(eigenvalues_circulant(p, n), eigenvalues_dense(build_matrix(circ, p, n))) <= 1e-8);
    }
  }
  SUBCASE("zeroing removes x0 on the fast path") {
    const ParameterVector p{{3.0, 1.0, -0.5, 0.25}};
    const EnsembleKind zeroed{EnsembleFamily::CirculantSymmetricToeplitz, DiagonalZeroing::MainDiagonal};
    CHECK(max_gap(ensemble_eigenvalues(zeroed, p, 6), eigenvalues_dense(build_matrix(zeroed, p, 6))) < 1e-12);
  }
}

TEST_CASE("palindromic Toeplitz matrices always have a zero eigenvalue") {
  for (std::size_t n = 2; n <= 60; n += 2) {
    auto stream = RandomStream::substream(31, n);
    const auto p = sample_parameters(EntryDistribution::StdNormal, n / 2, stream);
    const auto m = build_matrix({EnsembleFamily::PalindromicToeplitz}, p, n);
    const auto e = eigenvalues_dense(m);
    const double smallest = *std::min_element(e.begin(), e.end(), [](double a, double b) {
      return std::abs(a) < std::abs(b);
    });
    CHECK(std::abs(smallest) <= 1e-8 * spectral_radius(e));
  }
}

TEST_CASE("normalize_spectrum and spectral_moment") {
  const std::vector<double> two_zero{2.0, 0.0};
  const auto s = normalize_spectrum(two_zero, 4);
  CHECK(std::vector<double>(s.values().begin(), s.values().end()) == std::vector<double>{0.0, 1.0});

  const std::vector<double> zeros(7, 0.0);
  const auto zero_sample = normalize_spectrum(zeros, 7);
  for (double v : zero_sample.values()) CHECK(v == 0.0);

  const auto pal2 = eigenvalues_dense(build_matrix({EnsembleFamily::PalindromicToeplitz}, {{1.0}}, 2));
  const auto sample = normalize_spectrum(pal2, 2);
  CHECK(std::abs(sample[0]) < 1e-15);
  CHECK(sample[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(spectral_moment(sample, 0) == 1.0);
  CHECK(spectral_moment(sample, 4) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(spectral_moment(SpectralSample(2, {-1.0, 1.0}), 2) == 1.0);
  CHECK_THROWS_AS(SpectralSample(2, {0.0, std::nan("")}), InvalidArgument);
}

TEST_CASE("trace identity and moment antisymmetry") {
  for (auto family : {EnsembleFamily::PalindromicToeplitz, EnsembleFamily::PlainSymmetricToeplitz,
                      EnsembleFamily::CirculantSymmetricToeplitz}) {
    for (std::size_t n : {8, 24, 40}) {
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        auto stream = RandomStream::substream(seed, n);
        const EnsembleKind kind{family};
        const auto p = sample_parameters(EntryDistribution::UniformSymmetric, free_parameter_count(kind, n), stream);
        const auto m = build_matrix(kind, p, n);
        const auto sample = normalize_spectrum(ensemble_eigenvalues(kind, p, n), n);
        for (unsigned power : {2u, 4u}) {
          const double lhs = std::pow(static_cast<double>(n), power / 2.0 + 1.0) * spectral_moment(sample, power);
          const double rhs = oracle::trace_of_power(m.dense(), power);
          CHECK(std::abs(lhs - rhs) <= 1e-8 * std::abs(rhs));
        }
        std::vector<double> negated(sample.values().begin(), sample.values().end());
        for (double& v : negated) v = -v;
        const SpectralSample flipped(n, negated);
        for (unsigned power = 1; power <= 5; ++power) {
          const double sign = power % 2 ? -1.0 : 1.0;
          CHECK(spectral_moment(flipped, power) ==
                doctest::Approx(sign * spectral_moment(sample, power)).epsilon(1e-12).scale(1.0));
        }
      }
    }
  }
}

TEST_CASE("empirical_cdf") {
  const auto f = empirical_cdf(SpectralSample(2, {0.0, 1.0}));
  CHECK(f(0.5) == 0.5);
  CHECK(f(-1.0) == 0.0);
  CHECK(f(1.0) == 1.0);
  CHECK(f(0.0) == 0.5);
  CHECK(f(-1e300) == 0.0);
  CHECK(f(1e300) == 1.0);

  const EmpiricalDistribution g({0.0, 1.0, 2.0});
  const EmpiricalDistribution h({0.0, 1.0, 2.0, 3.0});
  CHECK(sup_distance(g, g) == 0.0);
  CHECK(sup_distance(g, h) == doctest::Approx(0.25));
  CHECK(sup_distance(EmpiricalDistribution({0.0}), EmpiricalDistribution({5.0})) == 1.0);
  CHECK_THROWS_AS(EmpiricalDistribution({1.0, 0.0}), InvalidArgument);
}

TEST_CASE("monte_carlo_moment") {
  MonteCarloConfig config;
  config.kind = {EnsembleFamily::PalindromicToeplitz};
  config.n = 128;
  config.m = 2;
  config.draws = 100;
  config.seed = 42;

  SUBCASE("second moment is 1 in expectation") {
    const auto est = monte_carlo_moment(config);
    CHECK(est.draws == 100);
    CHECK(est.skipped == 0);
    CHECK(std::abs(est.mean - 1.0) <= 3.0 * est.std_error);
  }
  SUBCASE("third moment vanishes") {
    config.n = 512;
    config.m = 3;
    config.draws = 200;
    const auto est = monte_carlo_moment(config);
    CHECK(std::abs(est.mean) <= 4.0 * est.std_error);
  }
  SUBCASE("identical for any thread count") {
    config.n = 64;
    config.m = 4;
    config.threads = 1;
    const auto one = monte_carlo_moment(config);
    config.threads = 7;
    const auto seven = monte_carlo_moment(config);
    CHECK(one.mean == seven.mean);
    CHECK(one.std_error == seven.std_error);
  }
  SUBCASE("standard error shrinks like 1/sqrt(draws)") {
    config.n = 32;
    config.m = 4;
    config.draws = 100;
    const double small = monte_carlo_moment(config).std_error;
    config.draws = 400;
    const double large = monte_carlo_moment(config).std_error;
    CHECK(large / small > 0.35);
    CHECK(large / small < 0.7);
  }
  SUBCASE("errors") {
    config.draws = 1;
    CHECK_THROWS_AS(monte_carlo_moment(config), InvalidArgument);
    config.draws = 10;
    config.n = 7;
    CHECK_THROWS_AS(monte_carlo_moment(config), IncompatibleDimension);
    config.n = 16;
    config.eigen = {.tol = 1e-300, .max_iterations = 0};
    CHECK_THROWS_AS(monte_carlo_moment(config), NoConvergence);
  }
}

TEST_CASE("compensated_sum") {
  const std::vector<double> values{1e16, 1.0, -1e16, 1.0};
  CHECK(compensated_sum(values) == 2.0);
}
