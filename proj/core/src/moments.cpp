#include "sspec/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <boost/rational.hpp>

#include "sspec/errors.hpp"
#include "sspec/parallel.hpp"

namespace sspec {
namespace {

using Rational = boost::rational<std::int64_t>;

constexpr unsigned kMaxEnumeratedOrder = 8;
constexpr unsigned kMaxMatchingPairs = 6;
constexpr unsigned kMaxExactMomentOrder = 32;

Fraction to_fraction(const Rational& r) { return {r.numerator(), r.denominator()}; }
Rational to_rational(const Fraction& f) { return {f.numerator, f.denominator}; }

// n^power, or 0 when it exceeds `limit`.
std::uint64_t bounded_power(std::size_t n, unsigned power, std::uint64_t limit) {
  std::uint64_t total = 1;
  for (unsigned p = 0; p < power; ++p) {
    if (n != 0 && total > limit / n) return 0;
    total *= n;
  }
  return total <= limit ? total : 0;
}

void check_budget(std::size_t n, unsigned length, std::uint64_t budget, const char* what) {
  if (bounded_power(n, length, budget) == 0 && n != 0) {
    throw BudgetExceeded(std::string(what) + ": " + std::to_string(n) + "^" + std::to_string(length) +
                         " tuples exceed the enumeration budget of " + std::to_string(budget));
  }
}

// Signatures are packed 4 bits per multiplicity, largest first.
std::uint32_t pack(const std::array<unsigned, kMaxEnumeratedOrder>& mult, unsigned count) {
  std::uint32_t key = 0;
  for (unsigned i = 0; i < count; ++i) key |= static_cast<std::uint32_t>(mult[i]) << (4 * i);
  return key;
}

ProfileSignature unpack(std::uint32_t key) {
  ProfileSignature sig;
  while (key != 0) {
    sig.push_back(key & 0xFu);
    key >>= 4;
  }
  return sig;
}

struct ProfileTally {
  std::vector<std::pair<std::uint32_t, std::uint64_t>> counts;
  std::uint64_t structural_zero = 0;

  void add(std::uint32_t key) {
    for (auto& [k, c] : counts) {
      if (k == key) {
        ++c;
        return;
      }
    }
    counts.emplace_back(key, 1);
  }
};

class TupleProfiler {
 public:
  TupleProfiler(const std::vector<std::size_t>& table, std::size_t n, unsigned m)
      : table_(table), n_(n), m_(m) {}

  void run_from(std::size_t first, ProfileTally& tally) const {
    std::array<std::size_t, kMaxEnumeratedOrder> idx{};
    std::array<std::size_t, kMaxEnumeratedOrder> cls{};
    idx[0] = first;
    descend(1, idx, cls, tally);
  }

 private:
  void descend(unsigned depth, std::array<std::size_t, kMaxEnumeratedOrder>& idx,
               std::array<std::size_t, kMaxEnumeratedOrder>& cls, ProfileTally& tally) const {
    if (depth == m_) {
      cls[m_ - 1] = table_[idx[m_ - 1] * n_ + idx[0]];
      record(cls, tally);
      return;
    }
    const std::size_t* row = &table_[idx[depth - 1] * n_];
    for (std::size_t i = 0; i < n_; ++i) {
      idx[depth] = i;
      cls[depth - 1] = row[i];
      descend(depth + 1, idx, cls, tally);
    }
  }

  void record(const std::array<std::size_t, kMaxEnumeratedOrder>& cls, ProfileTally& tally) const {
    std::array<std::size_t, kMaxEnumeratedOrder> distinct{};
    std::array<unsigned, kMaxEnumeratedOrder> mult{};
    unsigned count = 0;
    for (unsigned t = 0; t < m_; ++t) {
      if (cls[t] == kStructuralZero) {
        ++tally.structural_zero;
        return;
      }
      unsigned s = 0;
      while (s < count && distinct[s] != cls[t]) ++s;
      if (s == count) {
        distinct[count] = cls[t];
        mult[count] = 0;
        ++count;
      }
      ++mult[s];
    }
    std::sort(mult.begin(), mult.begin() + count, std::greater<>());
    tally.add(pack(mult, count));
  }

  const std::vector<std::size_t>& table_;
  std::size_t n_;
  unsigned m_;
};

class MatchingCounter {
 public:
  MatchingCounter(const std::vector<std::size_t>& table, std::size_t n, const Matching& matching)
      : table_(table), n_(n), edges_(2 * matching.k), partner_(edges_) {
    for (auto [a, b] : matching.pairs) {
      partner_[a - 1] = b - 1;
      partner_[b - 1] = a - 1;
    }
  }

  std::uint64_t count_from(std::size_t first) const {
    std::array<std::size_t, 2 * kMaxMatchingPairs> idx{};
    std::array<std::size_t, 2 * kMaxMatchingPairs> cls{};
    idx[0] = first;
    std::uint64_t total = 0;
    descend(1, idx, cls, total);
    return total;
  }

 private:
  // Edge e has just become known; edges 0..e-1 are already known.
  bool consistent(unsigned e, const std::array<std::size_t, 2 * kMaxMatchingPairs>& cls) const {
    if (cls[e] == kStructuralZero) return false;
    for (unsigned f = 0; f < e; ++f) {
      const bool same = cls[f] == cls[e];
      if (f == partner_[e] ? !same : same) return false;
    }
    return true;
  }

  void descend(unsigned depth, std::array<std::size_t, 2 * kMaxMatchingPairs>& idx,
               std::array<std::size_t, 2 * kMaxMatchingPairs>& cls, std::uint64_t& total) const {
    const std::size_t* row = &table_[idx[depth - 1] * n_];
    for (std::size_t i = 0; i < n_; ++i) {
      idx[depth] = i;
      cls[depth - 1] = row[i];
      if (!consistent(depth - 1, cls)) continue;
      if (depth + 1 == edges_) {
        cls[edges_ - 1] = table_[i * n_ + idx[0]];
        if (consistent(edges_ - 1, cls)) ++total;
      } else {
        descend(depth + 1, idx, cls, total);
      }
    }
  }

  const std::vector<std::size_t>& table_;
  std::size_t n_;
  unsigned edges_;
  std::vector<unsigned> partner_;
};

void build_matchings(std::vector<unsigned>& remaining, std::vector<std::pair<unsigned, unsigned>>& current,
                     unsigned k, std::vector<Matching>& out) {
  if (remaining.empty()) {
    out.push_back(Matching{k, current});
    return;
  }
  const unsigned head = remaining.front();
  for (std::size_t pick = 1; pick < remaining.size(); ++pick) {
    const unsigned other = remaining[pick];
    std::vector<unsigned> rest;
    rest.reserve(remaining.size() - 2);
    for (std::size_t r = 1; r < remaining.size(); ++r) {
      if (r != pick) rest.push_back(remaining[r]);
    }
    current.emplace_back(head, other);
    build_matchings(rest, current, k, out);
    current.pop_back();
  }
}

}  // namespace

double gaussian_moment(unsigned m) {
  if (m % 2 == 1) return 0.0;
  double product = 1.0;
  for (unsigned f = m; f >= 2; f -= 2) product *= static_cast<double>(f - 1);
  return product;
}

Fraction distribution_moment_exact(EntryDistribution dist, unsigned j) {
  if (j > kMaxExactMomentOrder) {
    throw InvalidArgument("exact entry moments are available up to order " + std::to_string(kMaxExactMomentOrder));
  }
  if (j == 0) return {1, 1};
  if (j % 2 == 1) return {0, 1};
  switch (dist) {
    case EntryDistribution::StdNormal: {
      std::int64_t product = 1;
      for (unsigned f = 1; f < j; f += 2) product *= f;
      return {product, 1};
    }
    case EntryDistribution::Rademacher:
      return {1, 1};
    case EntryDistribution::UniformSymmetric: {
      // integral of x^j / (2 sqrt 3) over [-sqrt 3, sqrt 3] = 3^{j/2} / (j + 1)
      std::int64_t power = 1;
      for (unsigned p = 0; p < j / 2; ++p) power *= 3;
      return to_fraction(Rational(power, static_cast<std::int64_t>(j) + 1));
    }
  }
  return {0, 1};
}

Fraction profile_weight(EntryDistribution dist, const ProfileSignature& signature) {
  Rational weight(1);
  for (unsigned multiplicity : signature) weight *= to_rational(distribution_moment_exact(dist, multiplicity));
  return to_fraction(weight);
}

ExactMomentReport exact_expected_moment(const EnsembleKind& kind, std::size_t n, unsigned m, EntryDistribution dist,
                                        const EnumerationOptions& options) {
  ExactMomentReport report;
  report.kind = kind;
  report.n = n;
  report.m = m;
  report.dist = dist;

  const auto table = class_table(kind, n);
  if (m > kMaxEnumeratedOrder) {
    throw BudgetExceeded("exact moments are enumerated up to order " + std::to_string(kMaxEnumeratedOrder));
  }
  check_budget(n, m, options.budget, "exact_expected_moment");

  if (m == 0) {
    // Trace(A^0) = N.
    report.tuple_count_by_profile[{}] = n;
    report.weighted_sum = {static_cast<std::int64_t>(n), 1};
    report.value = 1.0;
    return report;
  }

  std::vector<ProfileTally> tallies(n);
  const TupleProfiler profiler(table, n, m);
  parallel_for(n, options.threads, [&](std::size_t first) { profiler.run_from(first, tallies[first]); });

  for (const auto& tally : tallies) {
    report.structural_zero_tuples += tally.structural_zero;
    for (auto [key, count] : tally.counts) report.tuple_count_by_profile[unpack(key)] += count;
  }

  Rational total(0);
  for (const auto& [signature, count] : report.tuple_count_by_profile) {
    total += Rational(static_cast<std::int64_t>(count)) * to_rational(profile_weight(dist, signature));
  }
  report.weighted_sum = to_fraction(total);
  const long double scale = std::pow(static_cast<long double>(n), static_cast<long double>(m) / 2.0L + 1.0L);
  report.value = static_cast<double>(static_cast<long double>(total.numerator()) /
                                     static_cast<long double>(total.denominator()) / scale);
  return report;
}

std::vector<Matching> enumerate_matchings(unsigned k) {
  if (k < 1 || k > kMaxMatchingPairs) {
    throw InvalidArgument("matchings are enumerated for 1 <= k <= " + std::to_string(kMaxMatchingPairs));
  }
  std::vector<unsigned> edges(2 * k);
  for (unsigned e = 0; e < 2 * k; ++e) edges[e] = e + 1;
  std::vector<Matching> out;
  std::vector<std::pair<unsigned, unsigned>> current;
  build_matchings(edges, current, k, out);
  return out;
}

bool has_adjacent_pair(const Matching& matching) {
  const unsigned edges = 2 * matching.k;
  for (auto [a, b] : matching.pairs) {
    if (b == a + 1 || (a == 1 && b == edges)) return true;
  }
  return false;
}

std::uint64_t matching_solution_count(const EnsembleKind& kind, const Matching& matching, std::size_t n,
                                      const EnumerationOptions& options) {
  if (matching.k < 1 || matching.k > kMaxMatchingPairs || matching.pairs.size() != matching.k) {
    throw InvalidArgument("matching must have 1..6 pairs");
  }
  std::vector<unsigned> seen(2 * matching.k, 0);
  for (auto [a, b] : matching.pairs) {
    if (a < 1 || b < 1 || a > 2 * matching.k || b > 2 * matching.k || a == b) {
      throw InvalidArgument("matching pair outside 1..2k");
    }
    ++seen[a - 1];
    ++seen[b - 1];
  }
  if (std::any_of(seen.begin(), seen.end(), [](unsigned s) { return s != 1; })) {
    throw InvalidArgument("pairs do not form a perfect matching");
  }

  const auto table = class_table(kind, n);
  check_budget(n, 2 * matching.k, options.budget, "matching_solution_count");

  const MatchingCounter counter(table, n, matching);
  std::vector<std::uint64_t> partial(n, 0);
  parallel_for(n, options.threads, [&](std::size_t first) { partial[first] = counter.count_from(first); });
  std::uint64_t total = 0;
  for (auto p : partial) total += p;
  return total;
}

std::vector<std::pair<std::size_t, double>> matching_contribution_series(const EnsembleKind& kind,
                                                                         const Matching& matching,
                                                                         const std::vector<std::size_t>& ns,
                                                                         const EnumerationOptions& options) {
  for (std::size_t n : ns) check_budget(n, 2 * matching.k, options.budget, "matching_contribution_series");
  std::vector<std::pair<std::size_t, double>> series;
  series.reserve(ns.size());
  for (std::size_t n : ns) {
    const auto count = matching_solution_count(kind, matching, n, options);
    series.emplace_back(n, static_cast<double>(count) / std::pow(static_cast<double>(n), matching.k + 1.0));
  }
  return series;
}

}  // namespace sspec
