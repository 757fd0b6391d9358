#include "sspec_cli/cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <stdexcept>

#include "CLI11.hpp"
#include "sspec/errors.hpp"
#include "sspec/moments.hpp"
#include "sspec/spectra.hpp"
#include "sspec/stats.hpp"
#include "sspec/verify.hpp"
#include "sspec_cli/output.hpp"

namespace sspec::cli {
namespace {

struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr std::array kFamilies = {EnsembleFamily::PalindromicToeplitz, EnsembleFamily::CirculantSymmetricToeplitz,
                                  EnsembleFamily::PalindromicHankel, EnsembleFamily::PlainSymmetricToeplitz,
                                  EnsembleFamily::Diagonal};
constexpr std::array kDistributions = {EntryDistribution::StdNormal, EntryDistribution::Rademacher,
                                       EntryDistribution::UniformSymmetric};
constexpr std::array kZeroings = {DiagonalZeroing::None, DiagonalZeroing::MainDiagonal,
                                  DiagonalZeroing::MainDiagonalAndCorners};

template <typename Enum, std::size_t N>
Enum parse_name(const std::string& flag, const std::string& text, const std::array<Enum, N>& all) {
  std::string names;
  for (Enum e : all) {
    if (to_string(e) == text) return e;
    names += names.empty() ? "" : ", ";
    names += to_string(e);
  }
  throw ValidationFailure(flag + ": unknown value '" + text + "' (expected one of " + names + ")");
}

template <typename Enum, std::size_t N>
std::string choices(const std::array<Enum, N>& all) {
  std::string names;
  for (Enum e : all) {
    names += names.empty() ? "" : "|";
    names += to_string(e);
  }
  return names;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationFailure(message);
}

enum class Format { Csv, Json };

struct Output {
  Json json;
  Table table;
  int status = kExitOk;
};

// Flags shared by every subcommand.
struct Common {
  std::string threads = "auto";
  std::string out;
  std::string format;

  void attach(CLI::App& app) {
    app.add_option("--threads", threads, "Worker threads: a positive integer or 'auto'")
        ->envname("STRUCTURED_SPECTRA_THREADS");
    app.add_option("--out", out, "Write output to this file instead of stdout");
    app.add_option("--format", format, "Output format: csv or json (default depends on the subcommand)");
  }

  unsigned thread_count() const {
    if (threads == "auto") return 0;
    unsigned value = 0;
    const auto* end = threads.data() + threads.size();
    const auto [ptr, ec] = std::from_chars(threads.data(), end, value);
    require(ec == std::errc() && ptr == end && value > 0,
            "--threads: expected a positive integer or 'auto', got '" + threads + "'");
    return value;
  }

  Format resolve_format(Format fallback) const {
    if (format.empty()) return fallback;
    if (format == "csv") return Format::Csv;
    if (format == "json") return Format::Json;
    throw ValidationFailure("--format: expected csv or json, got '" + format + "'");
  }
};

// Ensemble selection flags.
struct KindFlags {
  std::string family = std::string(to_string(EnsembleFamily::PalindromicToeplitz));
  std::string zeroing = std::string(to_string(DiagonalZeroing::None));

  void attach(CLI::App& app) {
    app.add_option("--kind", family, "Ensemble: " + choices(kFamilies))->capture_default_str();
    app.add_option("--zeroing", zeroing, "Zeroed b0 entries: " + choices(kZeroings))->capture_default_str();
  }

  EnsembleKind resolve() const {
    return {parse_name("--kind", family, kFamilies), parse_name("--zeroing", zeroing, kZeroings)};
  }
};

struct DistFlag {
  std::string name = std::string(to_string(EntryDistribution::StdNormal));

  void attach(CLI::App& app) {
    app.add_option("--dist", name, "Entry distribution: " + choices(kDistributions))->capture_default_str();
  }
  EntryDistribution resolve() const { return parse_name("--dist", name, kDistributions); }
};

void validate_dimension(const EnsembleKind& kind, std::size_t n) {
  require(n >= 1, "--n: must be at least 1");
  const bool palindromic =
      kind.family == EnsembleFamily::PalindromicToeplitz || kind.family == EnsembleFamily::PalindromicHankel;
  require(!palindromic || n % 2 == 0,
          "--n: " + std::string(to_string(kind.family)) + " needs an even dimension, got " + std::to_string(n));
}

Json kind_json(const EnsembleKind& kind) {
  return Json{{"kind", to_string(kind.family)}, {"zeroing", to_string(kind.zeroing)}};
}

Json report_json(const CheckReport& r) {
  return Json{{"name", r.name},
              {"passed", r.passed},
              {"worst_violation", r.worst_violation},
              {"bound", r.bound},
              {"details", r.details}};
}

std::string signature_text(const ProfileSignature& sig) {
  std::string s;
  for (unsigned v : sig) {
    if (!s.empty()) s += ' ';
    s += std::to_string(v);
  }
  return s;
}

std::string pairs_text(const Matching& m) {
  std::string s;
  for (auto [a, b] : m.pairs) {
    if (!s.empty()) s += ' ';
    s += std::to_string(a) + '-' + std::to_string(b);
  }
  return s;
}

// ---------------------------------------------------------------------------

struct SpectrumCmd {
  KindFlags kind;
  DistFlag dist;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::uint64_t draw = 0;

  void attach(CLI::App& app) {
    kind.attach(app);
    dist.attach(app);
    app.add_option("--n", n, "Matrix dimension")->required();
    app.add_option("--seed", seed, "Master seed")->capture_default_str();
    app.add_option("--draw", draw, "Draw index under the master seed")->capture_default_str();
  }

  Output execute(const Common&) const {
    const auto k = kind.resolve();
    const auto d = dist.resolve();
    validate_dimension(k, n);
    const auto sample = sample_spectrum(k, d, n, seed, draw);

    Output o;
    o.table.header = {"normalized_eigenvalue"};
    Json values = Json::array();
    for (double v : sample.values()) {
      o.table.rows.push_back({v});
      values.push_back(v);
    }
    o.json = kind_json(k);
    o.json["dist"] = to_string(d);
    o.json["n"] = n;
    o.json["seed"] = seed;
    o.json["draw"] = draw;
    o.json["normalized_eigenvalues"] = std::move(values);
    return o;
  }
};

struct MomentsCmd {
  KindFlags kind;
  DistFlag dist;
  std::size_t n = 0;
  std::vector<unsigned> ms;
  std::size_t draws = 100;
  std::uint64_t seed = 0;

  void attach(CLI::App& app) {
    kind.attach(app);
    dist.attach(app);
    app.add_option("--n", n, "Matrix dimension")->required();
    app.add_option("--m", ms, "Moment order(s)")->required();
    app.add_option("--draws", draws, "Independent draws")->capture_default_str();
    app.add_option("--seed", seed, "Master seed")->capture_default_str();
  }

  Output execute(const Common& common) const {
    const auto k = kind.resolve();
    const auto d = dist.resolve();
    validate_dimension(k, n);
    require(draws >= 2, "--draws: at least 2 draws are needed for a standard error");

    Output o;
    o.table.header = {"kind", "zeroing", "dist", "n", "m", "draws", "skipped", "mean", "std_error", "gaussian_reference"};
    Json all = Json::array();
    for (unsigned m : ms) {
      MonteCarloConfig config;
      config.kind = k;
      config.dist = d;
      config.n = n;
      config.m = m;
      config.draws = draws;
      config.seed = seed;
      config.threads = common.thread_count();
      const auto est = monte_carlo_moment(config);
      Json j = kind_json(k);
      j["dist"] = to_string(d);
      j["n"] = n;
      j["m"] = m;
      j["draws"] = est.draws;
      j["skipped"] = est.skipped;
      j["seed"] = seed;
      j["mean"] = est.mean;
      j["std_error"] = est.std_error;
      j["gaussian_reference"] = gaussian_moment(m);
      all.push_back(std::move(j));
      o.table.rows.push_back({std::string(to_string(k.family)), std::string(to_string(k.zeroing)),
                              std::string(to_string(d)), static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(m),
                              static_cast<std::uint64_t>(est.draws), static_cast<std::uint64_t>(est.skipped), est.mean,
                              est.std_error, gaussian_moment(m)});
    }
    o.json = all.size() == 1 ? all[0] : all;
    return o;
  }
};

struct ExactMomentsCmd {
  KindFlags kind;
  DistFlag dist;
  std::size_t n = 0;
  unsigned m = 0;
  std::uint64_t budget = EnumerationOptions{}.budget;

  void attach(CLI::App& app) {
    kind.attach(app);
    dist.attach(app);
    app.add_option("--n", n, "Matrix dimension")->required();
    app.add_option("--m", m, "Moment order, at most 8")->required();
    app.add_option("--budget", budget, "Maximum number of index tuples to visit")->capture_default_str();
  }

  Output execute(const Common& common) const {
    const auto k = kind.resolve();
    const auto d = dist.resolve();
    validate_dimension(k, n);
    require(m <= 8, "--m: exact moments are enumerated up to order 8");
    const auto r = exact_expected_moment(k, n, m, d, {.budget = budget, .threads = common.thread_count()});

    Output o;
    o.json = kind_json(k);
    o.json["dist"] = to_string(d);
    o.json["n"] = n;
    o.json["m"] = m;
    o.json["value"] = r.value;
    o.json["weighted_sum"] = Json{{"numerator", r.weighted_sum.numerator}, {"denominator", r.weighted_sum.denominator}};
    o.json["structural_zero_tuples"] = r.structural_zero_tuples;
    Json profiles = Json::array();
    o.table.header = {"signature", "count", "weight"};
    for (const auto& [sig, count] : r.tuple_count_by_profile) {
      const double weight = profile_weight(d, sig).value();
      profiles.push_back(Json{{"signature", sig}, {"count", count}, {"weight", weight}});
      o.table.rows.push_back({signature_text(sig), count, weight});
    }
    o.json["tuple_count_by_profile"] = std::move(profiles);
    return o;
  }
};

struct MatchingsCmd {
  KindFlags kind;
  std::size_t n = 0;
  unsigned k = 2;
  std::uint64_t budget = EnumerationOptions{}.budget;

  void attach(CLI::App& app) {
    kind.attach(app);
    app.add_option("--n", n, "Matrix dimension")->required();
    app.add_option("--k", k, "Number of pairs, 1..6")->capture_default_str();
    app.add_option("--budget", budget, "Maximum number of index tuples per matching")->capture_default_str();
  }

  Output execute(const Common& common) const {
    const auto kd = kind.resolve();
    validate_dimension(kd, n);
    require(k >= 1 && k <= 6, "--k: must be between 1 and 6");
    const EnumerationOptions options{.budget = budget, .threads = common.thread_count()};
    const double scale = std::pow(static_cast<double>(n), static_cast<double>(k) + 1.0);

    Output o;
    o.table.header = {"matching_id", "pairs", "count", "normalized"};
    o.json = kind_json(kd);
    o.json["n"] = n;
    o.json["k"] = k;
    Json list = Json::array();
    const auto all = enumerate_matchings(k);
    for (std::size_t id = 0; id < all.size(); ++id) {
      const auto count = matching_solution_count(kd, all[id], n, options);
      const double normalized = static_cast<double>(count) / scale;
      o.table.rows.push_back({static_cast<std::uint64_t>(id + 1), pairs_text(all[id]), count, normalized});
      Json pairs = Json::array();
      for (auto [a, b] : all[id].pairs) pairs.push_back(Json::array({a, b}));
      list.push_back(Json{{"matching_id", id + 1},
                          {"pairs", std::move(pairs)},
                          {"adjacent", has_adjacent_pair(all[id])},
                          {"count", count},
                          {"normalized", normalized}});
    }
    o.json["matchings"] = std::move(list);
    return o;
  }
};

struct SpacingsCmd {
  KindFlags kind;
  DistFlag dist;
  std::size_t n = 0;
  std::size_t draws = 1;
  std::size_t lo = 0;
  std::size_t hi = 0;
  std::uint64_t seed = 0;
  double min_spacing = 0.0;
  std::size_t bins = 20;
  double max_spacing = 4.0;

  void attach(CLI::App& app) {
    kind.attach(app);
    dist.attach(app);
    app.add_option("--n", n, "Matrix dimension")->required();
    app.add_option("--draws", draws, "Independent draws")->capture_default_str();
    app.add_option("--lo", lo, "First eigenvalue of the window (1-based)")->required();
    app.add_option("--hi", hi, "Last eigenvalue of the window (1-based, inclusive)")->required();
    app.add_option("--seed", seed, "Master seed")->capture_default_str();
    app.add_option("--min-spacing", min_spacing, "Drop normalized spacings below this value")->capture_default_str();
    app.add_option("--bins", bins, "Histogram bins")->capture_default_str();
    app.add_option("--max-spacing", max_spacing, "Right edge of the histogram")->capture_default_str();
  }

  Output execute(const Common& common) const {
    const auto k = kind.resolve();
    const auto d = dist.resolve();
    validate_dimension(k, n);
    require(draws >= 1, "--draws: must be at least 1");
    require(lo >= 1 && lo < hi, "--lo: must satisfy 1 <= lo < hi");
    require(hi <= n, "--hi: must not exceed --n");
    require(bins >= 1, "--bins: must be at least 1");
    require(std::isfinite(min_spacing) && min_spacing >= 0.0, "--min-spacing: must be a finite value >= 0");
    require(std::isfinite(max_spacing) && max_spacing > 0.0, "--max-spacing: must be a finite value > 0");

    const auto pooled = pooled_spacings(k, d, n, draws, lo, hi, seed, common.thread_count());
    std::vector<double> kept;
    for (double s : pooled)
      if (s >= min_spacing) kept.push_back(s);
    std::sort(kept.begin(), kept.end());

    const auto edges = uniform_edges(0.0, max_spacing, bins);
    const auto h = histogram(kept, edges);

    Output o;
    o.table.header = {"bin_left", "bin_right", "count", "empirical_density", "poisson_ref", "goe_ref"};
    Json bin_list = Json::array();
    for (std::size_t b = 0; b < bins; ++b) {
      const double left = edges[b];
      const double right = edges[b + 1];
      const double width = right - left;
      const double density =
          kept.empty() ? 0.0 : static_cast<double>(h.counts[b]) / (static_cast<double>(kept.size()) * width);
      // Reference curves averaged over the bin, comparable with the bin density.
      const double poisson = (reference_cdf(SpacingModel::PoissonExp, right) -
                              reference_cdf(SpacingModel::PoissonExp, left)) / width;
      const double goe = (reference_cdf(SpacingModel::WignerGOE, right) -
                          reference_cdf(SpacingModel::WignerGOE, left)) / width;
      o.table.rows.push_back({left, right, static_cast<std::uint64_t>(h.counts[b]), density, poisson, goe});
      bin_list.push_back(Json{{"bin_left", left},
                              {"bin_right", right},
                              {"count", h.counts[b]},
                              {"empirical_density", density},
                              {"poisson_ref", poisson},
                              {"goe_ref", goe}});
    }

    o.json = kind_json(k);
    o.json["dist"] = to_string(d);
    o.json["n"] = n;
    o.json["draws"] = draws;
    o.json["lo"] = lo;
    o.json["hi"] = hi;
    o.json["seed"] = seed;
    o.json["min_spacing"] = min_spacing;
    o.json["spacing_count"] = pooled.size();
    o.json["kept"] = kept.size();
    o.json["above_range"] = h.above;
    if (!kept.empty()) {
      o.json["ks_poisson"] = ks_statistic(kept, [](double x) { return reference_cdf(SpacingModel::PoissonExp, x); });
      o.json["ks_goe"] = ks_statistic(kept, [](double x) { return reference_cdf(SpacingModel::WignerGOE, x); });
    }
    o.json["bins"] = std::move(bin_list);
    return o;
  }
};

struct CltCmd {
  DistFlag dist;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  bool trend = false;
  std::size_t seeds = 10;

  void attach(CLI::App& app) {
    dist.attach(app);
    app.add_option("--n", n, "Number of terms (the smallest size with --trend)")->required();
    app.add_option("--seed", seed, "Master seed")->capture_default_str();
    app.add_flag("--trend", trend, "Run n, 2n, 4n, 8n on nested prefixes over several seeds");
    app.add_option("--seeds", seeds, "Seeds for --trend")->capture_default_str();
  }

  Output execute(const Common&) const {
    const auto d = dist.resolve();
    require(n >= 4 && n % 2 == 0, "--n: must be even and at least 4");
    Output o;
    if (!trend) {
      const auto r = clt_experiment(d, n, seed);
      o.json = Json{{"dist", to_string(d)}, {"n", n},           {"seed", seed},
                    {"ks", r.ks},           {"bound", r.report.bound}, {"passed", r.report.passed}};
      o.table.header = {"dist", "n", "seed", "ks", "bound", "passed"};
      o.table.rows.push_back({std::string(to_string(d)), static_cast<std::uint64_t>(n), seed, r.ks, r.report.bound,
                              std::string(r.report.passed ? "true" : "false")});
      return o;
    }
    require(seeds >= 1, "--seeds: must be at least 1");
    const auto seed_list = trend_seeds(seed, seeds);
    const auto t = clt_trend(d, n, seed_list);
    o.json = Json{{"dist", to_string(d)}, {"n0", n}, {"seed", seed}, {"seeds", seed_list}, {"ns", t.ns},
                  {"median_ks", t.median_ks}, {"ks_by_seed", t.ks_by_seed}, {"passed", t.report.passed},
                  {"details", t.report.details}};
    o.table.header = {"n", "median_ks"};
    for (std::size_t i = 0; i < t.ns.size(); ++i)
      o.table.rows.push_back({static_cast<std::uint64_t>(t.ns[i]), t.median_ks[i]});
    return o;
  }
};

struct VerifyCmd {
  std::string suite = "all";
  std::vector<std::size_t> sizes = SuiteOptions{}.sizes;
  std::size_t seeds = SuiteOptions{}.seeds;
  std::uint64_t seed = SuiteOptions{}.seed;

  void attach(CLI::App& app) {
    std::string names = "all";
    for (const auto& s : suite_names()) names += "|" + s;
    app.add_option("--suite", suite, "Suite: " + names)->capture_default_str();
    app.add_option("--sizes", sizes, "Matrix dimensions swept by the structural suites")->capture_default_str();
    app.add_option("--seeds", seeds, "Random draws per dimension")->capture_default_str();
    app.add_option("--seed", seed, "Master seed")->capture_default_str();
  }

  Output execute(const Common& common) const {
    const auto names = suite_names();
    require(suite == "all" || std::find(names.begin(), names.end(), suite) != names.end(),
            "--suite: unknown suite '" + suite + "'");
    require(!sizes.empty(), "--sizes: at least one size is needed");
    for (std::size_t n : sizes) require(n >= 2, "--sizes: every size must be at least 2");
    require(seeds >= 1, "--seeds: must be at least 1");

    SuiteOptions options;
    options.sizes = sizes;
    options.seeds = seeds;
    options.seed = seed;
    options.threads = common.thread_count();
    const auto reports = run_suite(suite, options);

    Output o;
    o.json = Json::array();
    o.table.header = {"name", "passed", "worst_violation", "bound", "details"};
    bool all_passed = true;
    for (const auto& r : reports) {
      all_passed = all_passed && r.passed;
      o.json.push_back(report_json(r));
      o.table.rows.push_back({r.name, std::string(r.passed ? "true" : "false"), r.worst_violation, r.bound, r.details});
    }
    o.status = all_passed ? kExitOk : kExitCheckFailed;
    return o;
  }
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    out.flush();
    if (!out) throw IoFailure("failed writing to standard output");
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoFailure("--out: cannot open '" + path + "' for writing");
  file << text;
  file.close();
  if (!file) throw IoFailure("--out: failed writing '" + path + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectra and moments of structured random matrix ensembles", "structured_spectra"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "structured_spectra 0.1.0");

  Common common;
  SpectrumCmd spectrum;
  MomentsCmd moments;
  ExactMomentsCmd exact;
  MatchingsCmd matchings;
  SpacingsCmd spacing;
  CltCmd clt;
  VerifyCmd verify;

  struct Entry {
    CLI::App* app;
    Format fallback;
    std::function<Output()> execute;
  };
  std::vector<Entry> entries;
  auto add = [&](const char* name, const char* help, auto& cmd, Format fallback) {
    CLI::App* sub = app.add_subcommand(name, help);
    common.attach(*sub);
    cmd.attach(*sub);
    entries.push_back({sub, fallback, [&cmd, &common] { return cmd.execute(common); }});
  };
  add("spectrum", "Normalized eigenvalues of one draw", spectrum, Format::Csv);
  add("moments", "Monte Carlo spectral moments", moments, Format::Json);
  add("exact-moments", "Exact expected moments by tuple enumeration", exact, Format::Json);
  add("matchings", "Per-matching solution counts", matchings, Format::Csv);
  add("spacings", "Histogram of mean-normalized eigenvalue spacings", spacing, Format::Csv);
  add("clt", "Kolmogorov-Smirnov distance of weighted cosine sums to the normal law", clt, Format::Json);
  add("verify", "Structural property suites", verify, Format::Json);

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("structured_spectra");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return kExitOk;
  } catch (const CLI::ConversionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (!app.get_subcommands().empty()) err << "run with --help for usage\n";
    return kExitUsage;
  }

  for (const auto& entry : entries) {
    if (!entry.app->parsed()) continue;
    try {
      const Format format = common.resolve_format(entry.fallback);
      common.thread_count();
      const Output result = entry.execute();
      emit(format == Format::Json ? write_json(result.json) : write_csv(result.table), common.out, out);
      return result.status;
    } catch (const ValidationFailure& e) {
      err << "error: " << e.what() << '\n';
      return kExitValidation;
    } catch (const IoFailure& e) {
      err << "error: " << e.what() << '\n';
      return kExitIo;
    } catch (const NoConvergence& e) {
      err << "error: " << e.what() << '\n';
      return kExitFailure;
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return kExitValidation;
    }
  }
  return kExitUsage;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace sspec::cli
