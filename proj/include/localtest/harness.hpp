#pragma once

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "localtest/instances.hpp"
#include "localtest/io.hpp"
#include "localtest/oracles.hpp"
#include "localtest/testers.hpp"

namespace localtest {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PropertySpec {
  std::string name = "monotone";  // monotone|lipschitz|convex_1d|separately_convex|submodular|explicit
  int64_t c = 1;                  // lipschitz constant
  std::string family_path;        // explicit family JSON
};

struct InputSpec {
  enum class Kind { kGenerator, kFile };
  Kind kind = Kind::kGenerator;
  std::string name = "constant";  // generator name, or file path
  double param = 0.0;             // e.g. planted density
};

struct ExperimentConfig {
  PropertySpec property;
  Algo algo = Algo::kCanonical;
  std::vector<int32_t> ns = {256};
  int d = 1;
  int32_t k = 2;
  double epsilon = 0.25;
  int64_t trials = 100;
  uint64_t seed = 1;
  InputSpec input;
  std::string out_prefix;  // empty = no files
  bool timing = false;     // wall-clock runtime_ms column (breaks byte-reproducibility)
  int threads = 0;         // 0 = LOCALTEST_THREADS or hardware
  uint64_t infer_budget = kDefaultInferBudget;
};

struct TrialRow {
  std::string algo;
  int32_t n;
  int d;
  int32_t k;
  double eps;
  uint64_t seed;
  int64_t trial;
  bool rejected;
  uint64_t distinct_queries;
  uint64_t raw_queries;
  int64_t runtime_ms;
};

struct GroupSummary {
  int32_t n;
  int64_t trials = 0;
  int64_t rejections = 0;
  double rejection_rate = 0;
  double mean_distinct = 0;
  double mean_raw = 0;
  double theoretical_bound = 0;
  double wall_ms = 0;  // wall clock for the group; informational only
};

struct Report {
  ExperimentConfig config;
  std::vector<TrialRow> rows;
  std::vector<GroupSummary> groups;

  std::string csv() const;
  nlohmann::json summary_json() const;
};

// Pinned query budgets from the analysis; reported next to measurements.
inline double theoretical_bound(Algo algo, int32_t n, int d, int32_t k, double eps) {
  double dd = d;
  switch (algo) {
    case Algo::kSimple:
      return 2.0 * (dd + 1) * std::pow(n, dd - dd / (dd + 1)) * std::pow(k, dd / (dd + 1)) *
             std::pow(eps, -1.0 / (dd + 1));
    case Algo::kCanonical:
    case Algo::kAmplifiedPot:
      if (d == 1) return 20.0 * (k / eps) * (std::log2(eps * n / k) + 3.0);
      return 20.0 * std::pow(6.0, dd) * k * std::pow(eps, -1.0 / dd) * std::pow(n, dd - 1);
    case Algo::kPot:
      if (d == 1) return 20.0 * k * (std::log2(static_cast<double>(n) / k) + 3.0);
      return 20.0 * std::pow(6.0, dd) * k * std::pow(n, dd - 1);
  }
  return 0;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

inline LocalProperty<int64_t> build_property(const PropertySpec& spec, int d, int32_t k) {
  if (spec.name == "monotone") return monotone<int64_t>(d);
  if (spec.name == "lipschitz") return lipschitz<int64_t>(spec.c, d);
  if (spec.name == "convex_1d") {
    if (d != 1) throw config_error("convex_1d is one-dimensional");
    return convex_1d<int64_t>();
  }
  if (spec.name == "separately_convex") return separately_convex<int64_t>(d);
  if (spec.name == "submodular") return submodular<int64_t>(d);
  if (spec.name == "explicit") {
    if (spec.family_path.empty()) throw config_error("explicit property needs a family file");
    auto fam = read_family_json_file(spec.family_path);
    if (fam.d != d) throw config_error("family dimension does not match config");
    auto p = from_explicit(fam);
    if (p.k != k) throw config_error("family locality does not match config k");
    return p;
  }
  throw config_error("unknown property: " + spec.name);
}

inline Array<int64_t> build_input(const ExperimentConfig& cfg, const LocalProperty<int64_t>& p,
                                  int32_t n, Rng rng,
                                  const std::shared_ptr<Array<int64_t>>& file_input,
                                  const std::shared_ptr<std::vector<int64_t>>& plant_pattern) {
  if (cfg.input.kind == InputSpec::Kind::kFile) return *file_input;
  const std::string& g = cfg.input.name;
  if (g == "constant") return gen_constant(n, cfg.d);
  if (g == "monotone_random") return gen_monotone(n, cfg.d, rng);
  if (g == "lipschitz_walk") return gen_lipschitz_walk(n, cfg.property.c, rng);
  if (g == "convex_random") return gen_convex(n, rng);
  if (g == "reverse_sorted") return gen_reverse_sorted(n);
  if (g == "sawtooth") return gen_sawtooth(n, cfg.property.c);
  if (g == "concave_bump") return gen_concave_bump(n);
  if (g == "explicit_satisfying") return gen_satisfying_explicit(p, n, rng);
  if (g == "planted") {
    if (!plant_pattern) throw config_error("planted inputs need an explicit family");
    if (p.d != 1) throw config_error("planted inputs are one-dimensional");
    int64_t count = static_cast<int64_t>(cfg.input.param * n / 2.0);
    return plant_explicit_copies(p, *plant_pattern, n, count, rng);
  }
  throw config_error("unknown generator: " + g);
}

inline int resolve_threads(int configured) {
  if (configured > 0) return configured;
  if (const char* env = std::getenv("LOCALTEST_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

}  // namespace detail

inline Verdict run_one(const LocalProperty<int64_t>& p, const Array<int64_t>& a, Algo algo,
                       double eps, Rng rng, const TesterOptions& opts) {
  switch (algo) {
    case Algo::kSimple: return simple_test(p, a, eps, rng, opts);
    case Algo::kCanonical: return canonical_test(p, a, eps, rng, opts);
    case Algo::kPot: return pot(p, a, rng, opts);
    case Algo::kAmplifiedPot: return amplified_pot(p, a, eps, rng, opts);
  }
  throw config_error("bad algo");
}

// Runs trials (parallel over a deterministic per-trial RNG tree), collects
// per-trial rows in trial order, and aggregates per n.
inline Report run(const ExperimentConfig& cfg) {
  if (cfg.epsilon <= 0 || cfg.epsilon > 1) throw config_error("epsilon must be in (0, 1]");
  if (cfg.d < 1 || cfg.d > kMaxDim) throw config_error("d out of range");
  if (cfg.k < 2) throw config_error("k must be >= 2");
  if (cfg.trials < 0) throw config_error("trials must be >= 0");
  for (int32_t n : cfg.ns)
    if (n < cfg.k) throw config_error("n must be >= k");

  LocalProperty<int64_t> property = detail::build_property(cfg.property, cfg.d, cfg.k);
  TesterOptions opts;
  opts.infer_budget = cfg.infer_budget;

  std::shared_ptr<Array<int64_t>> file_input;
  if (cfg.input.kind == InputSpec::Kind::kFile) {
    const std::string& path = cfg.input.name;
    bool binary = path.size() > 5 && path.substr(path.size() - 5) == ".ltar";
    if (binary) {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw config_error("cannot open " + path);
      file_input = std::make_shared<Array<int64_t>>(read_array_binary(in));
    } else {
      auto loaded = read_array_json_file(path);
      // token alphabets carry no order or arithmetic; only explicit
      // pattern families may run over them
      if (loaded.alphabet.kind == AlphabetSpec::Kind::kTokens &&
          cfg.property.name != "explicit")
        throw config_error("property '" + cfg.property.name +
                           "' needs an ordered/arithmetic alphabet, but the input uses tokens");
      file_input = std::make_shared<Array<int64_t>>(std::move(loaded.values));
    }
  }
  std::shared_ptr<std::vector<int64_t>> plant_pattern;
  if (cfg.input.kind == InputSpec::Kind::kGenerator && cfg.input.name == "planted") {
    if (cfg.property.name != "explicit" || cfg.property.family_path.empty())
      throw config_error("planted inputs need an explicit family file");
    auto fam = read_family_json_file(cfg.property.family_path);
    if (fam.patterns.empty()) throw config_error("planted inputs need a nonempty family");
    plant_pattern = std::make_shared<std::vector<int64_t>>(*fam.patterns.begin());
  }

  Report rep;
  rep.config = cfg;
  const int threads = detail::resolve_threads(cfg.threads);

  for (int32_t n : cfg.ns) {
    auto group_start = std::chrono::steady_clock::now();
    std::vector<TrialRow> rows(static_cast<size_t>(cfg.trials));
    Rng base(cfg.seed);

    auto work = [&](int64_t t) {
      Rng trial_rng = base.split("trial").split(static_cast<uint64_t>(t)).split(static_cast<uint64_t>(n));
      Array<int64_t> input =
          detail::build_input(cfg, property, n, trial_rng.split("gen"), file_input, plant_pattern);
      auto t0 = std::chrono::steady_clock::now();
      Verdict v = run_one(property, input, cfg.algo, cfg.epsilon, trial_rng.split("test"), opts);
      auto t1 = std::chrono::steady_clock::now();
      TrialRow row;
      row.algo = algo_name(cfg.algo);
      row.n = n;
      row.d = cfg.d;
      row.k = cfg.k;
      row.eps = cfg.epsilon;
      row.seed = cfg.seed;
      row.trial = t;
      row.rejected = !v.accept;
      row.distinct_queries = v.log.distinct_count();
      row.raw_queries = v.log.raw_count;
      row.runtime_ms =
          cfg.timing
              ? std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()
              : 0;
      rows[static_cast<size_t>(t)] = std::move(row);
    };

    if (threads <= 1 || cfg.trials <= 1) {
      for (int64_t t = 0; t < cfg.trials; ++t) work(t);
    } else {
      std::vector<std::thread> pool;
      std::atomic<int64_t> next{0};
      for (int i = 0; i < threads; ++i)
        pool.emplace_back([&] {
          for (;;) {
            int64_t t = next.fetch_add(1);
            if (t >= cfg.trials) return;
            work(t);
          }
        });
      for (auto& th : pool) th.join();
    }

    GroupSummary g;
    g.n = n;
    g.trials = cfg.trials;
    for (const TrialRow& r : rows) {
      g.rejections += r.rejected ? 1 : 0;
      g.mean_distinct += static_cast<double>(r.distinct_queries);
      g.mean_raw += static_cast<double>(r.raw_queries);
    }
    if (cfg.trials > 0) {
      g.rejection_rate = static_cast<double>(g.rejections) / static_cast<double>(cfg.trials);
      g.mean_distinct /= static_cast<double>(cfg.trials);
      g.mean_raw /= static_cast<double>(cfg.trials);
    }
    g.theoretical_bound = theoretical_bound(cfg.algo, n, cfg.d, cfg.k, cfg.epsilon);
    g.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                          group_start)
                    .count();
    rep.groups.push_back(g);
    for (auto& r : rows) rep.rows.push_back(std::move(r));
  }
  return rep;
}

// Geometric n-range driver; equivalent to run() with an explicit ns list.
inline Report bench_scaling(ExperimentConfig cfg, int32_t n_min, int32_t n_max, int32_t factor = 2) {
  if (n_min < 2 || n_max < n_min || factor < 2) throw config_error("bad bench range");
  cfg.ns.clear();
  for (int64_t n = n_min; n <= n_max; n *= factor) cfg.ns.push_back(static_cast<int32_t>(n));
  return run(cfg);
}

inline std::string Report::csv() const {
  std::ostringstream os;
  os << "algo,n,d,k,eps,seed,trial,verdict,distinct_queries,raw_queries,runtime_ms\n";
  for (const TrialRow& r : rows) {
    os << r.algo << ',' << r.n << ',' << r.d << ',' << r.k << ',' << detail::format_double(r.eps)
       << ',' << r.seed << ',' << r.trial << ',' << (r.rejected ? "reject" : "accept") << ','
       << r.distinct_queries << ',' << r.raw_queries << ',' << r.runtime_ms << '\n';
  }
  return os.str();
}

inline nlohmann::json Report::summary_json() const {
  nlohmann::json j;
  j["algo"] = algo_name(config.algo);
  j["property"] = config.property.name;
  j["d"] = config.d;
  j["k"] = config.k;
  j["epsilon"] = config.epsilon;
  j["seed"] = config.seed;
  j["trials"] = config.trials;
  nlohmann::json arr = nlohmann::json::array();
  for (const GroupSummary& g : groups) {
    nlohmann::json gj;
    gj["n"] = g.n;
    gj["trials"] = g.trials;
    gj["rejections"] = g.rejections;
    gj["rejection_rate"] = g.rejection_rate;
    gj["mean_distinct_queries"] = g.mean_distinct;
    gj["mean_raw_queries"] = g.mean_raw;
    gj["theoretical_bound"] = g.theoretical_bound;
    gj["wall_ms"] = g.wall_ms;
    arr.push_back(std::move(gj));
  }
  j["groups"] = std::move(arr);
  return j;
}

}  // namespace localtest
