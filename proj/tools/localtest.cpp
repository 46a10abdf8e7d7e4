// Command-line driver: seeded experiments over the testers, brute-force
// oracles, adversarial instance generation, and grid inspection.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "localtest/adversarial.hpp"
#include "localtest/harness.hpp"
#include "localtest/io.hpp"
#include "localtest/oracles.hpp"

namespace {

using namespace localtest;

constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;

struct CommonFlags {
  std::string config_path;
  std::optional<std::string> property;
  std::optional<std::string> family;
  std::optional<std::string> algo;
  std::optional<int> n, d, k;
  std::optional<double> eps;
  std::optional<int64_t> trials, c;
  std::optional<uint64_t> seed;
  std::optional<std::string> input;
  std::optional<double> input_param;
  std::optional<std::string> out;
  bool timing = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file; flags override its fields");
  cmd->add_option("--property", f.property,
                  "monotone|lipschitz|convex_1d|separately_convex|submodular|explicit");
  cmd->add_option("--family", f.family, "explicit family JSON file");
  cmd->add_option("--algo", f.algo, "simple|canonical|pot|amplified_pot");
  cmd->add_option("--n", f.n, "array width");
  cmd->add_option("--d", f.d, "dimension");
  cmd->add_option("--k", f.k, "locality");
  cmd->add_option("--eps", f.eps, "proximity parameter in (0, 1]");
  cmd->add_option("--trials", f.trials, "number of trials");
  cmd->add_option("--c", f.c, "Lipschitz constant");
  cmd->add_option("--seed", f.seed, "root RNG seed");
  cmd->add_option("--input", f.input,
                  "generator name (constant, monotone_random, lipschitz_walk, convex_random, "
                  "reverse_sorted, sawtooth, concave_bump, explicit_satisfying, planted) or "
                  "file:<path>");
  cmd->add_option("--input-param", f.input_param, "generator parameter (e.g. planted density)");
  cmd->add_option("--out", f.out, "output prefix for <prefix>.csv and <prefix>.json");
  cmd->add_flag("--timing", f.timing,
                "record wall-clock runtime_ms per trial (breaks byte-reproducibility)");
}

ExperimentConfig make_config(const CommonFlags& f) {
  ExperimentConfig cfg;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw config_error("cannot open config " + f.config_path);
    nlohmann::json j;
    in >> j;
    if (j.contains("property")) {
      const auto& pj = j["property"];
      if (pj.is_string())
        cfg.property.name = pj.get<std::string>();
      else {
        cfg.property.name = pj.value("name", cfg.property.name);
        cfg.property.c = pj.value("c", cfg.property.c);
        cfg.property.family_path = pj.value("family", cfg.property.family_path);
      }
    }
    if (j.contains("algo")) cfg.algo = algo_from_name(j["algo"].get<std::string>());
    if (j.contains("n")) {
      if (j["n"].is_array())
        cfg.ns = j["n"].get<std::vector<int32_t>>();
      else
        cfg.ns = {j["n"].get<int32_t>()};
    }
    cfg.d = j.value("d", cfg.d);
    cfg.k = j.value("k", cfg.k);
    cfg.epsilon = j.value("epsilon", cfg.epsilon);
    cfg.trials = j.value("trials", cfg.trials);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("input")) {
      const auto& ij = j["input"];
      if (ij.is_string())
        cfg.input.name = ij.get<std::string>();
      else {
        std::string kind = ij.value("kind", "generator");
        cfg.input.kind = kind == "file" ? InputSpec::Kind::kFile : InputSpec::Kind::kGenerator;
        cfg.input.name = ij.value(cfg.input.kind == InputSpec::Kind::kFile ? "path" : "name",
                                  cfg.input.name);
        cfg.input.param = ij.value("param", cfg.input.param);
      }
    }
    cfg.out_prefix = j.value("output", cfg.out_prefix);
    cfg.timing = j.value("timing", cfg.timing);
    cfg.threads = j.value("threads", cfg.threads);
  }
  if (f.property) cfg.property.name = *f.property;
  if (f.family) cfg.property.family_path = *f.family;
  if (f.c) cfg.property.c = *f.c;
  if (f.algo) cfg.algo = algo_from_name(*f.algo);
  if (f.n) cfg.ns = {static_cast<int32_t>(*f.n)};
  if (f.d) cfg.d = *f.d;
  if (f.k) cfg.k = static_cast<int32_t>(*f.k);
  if (f.eps) cfg.epsilon = *f.eps;
  if (f.trials) cfg.trials = *f.trials;
  if (f.seed) cfg.seed = *f.seed;
  if (f.input) {
    if (f.input->rfind("file:", 0) == 0) {
      cfg.input.kind = InputSpec::Kind::kFile;
      cfg.input.name = f.input->substr(5);
    } else {
      cfg.input.kind = InputSpec::Kind::kGenerator;
      cfg.input.name = *f.input;
    }
  }
  if (f.input_param) cfg.input.param = *f.input_param;
  if (f.out) cfg.out_prefix = *f.out;
  if (f.timing) cfg.timing = true;
  return cfg;
}

void emit_report(const Report& rep) {
  if (!rep.config.out_prefix.empty()) {
    std::ofstream csv(rep.config.out_prefix + ".csv");
    if (!csv) throw config_error("cannot write " + rep.config.out_prefix + ".csv");
    csv << rep.csv();
    std::ofstream js(rep.config.out_prefix + ".json");
    js << rep.summary_json().dump(2) << '\n';
  }
  for (const GroupSummary& g : rep.groups) {
    std::cout << "n=" << g.n << " trials=" << g.trials << " rejection_rate=" << g.rejection_rate
              << " mean_distinct_queries=" << g.mean_distinct
              << " theoretical_bound=" << g.theoretical_bound << '\n';
  }
}

int cmd_test(const CommonFlags& f) {
  Report rep = run(make_config(f));
  emit_report(rep);
  return 0;
}

int cmd_bench(const CommonFlags& f, int n_min, int n_max, int factor) {
  Report rep = bench_scaling(make_config(f), n_min, n_max, factor);
  emit_report(rep);
  // per-doubling growth of the mean distinct query count
  for (size_t i = 1; i < rep.groups.size(); ++i) {
    double prev = rep.groups[i - 1].mean_distinct;
    double cur = rep.groups[i].mean_distinct;
    std::cout << "growth " << rep.groups[i - 1].n << "->" << rep.groups[i].n << ": "
              << (prev > 0 ? cur / prev : 0.0) << '\n';
  }
  return 0;
}

int cmd_oracle_distance(const std::string& array_path, const CommonFlags& f,
                        const std::vector<int64_t>& alphabet) {
  auto cfg = make_config(f);
  auto loaded = read_array_json_file(array_path);
  auto p = localtest::detail::build_property(cfg.property, loaded.values.dim(), cfg.k);
  std::vector<int64_t> alpha = alphabet;
  if (alpha.empty() && p.alphabet) alpha = *p.alphabet;
  auto res = oracle::exact_distance(p, loaded.values, std::span<const int64_t>(alpha));
  nlohmann::json j;
  j["distance"] = res.distance;
  j["relative_distance"] =
      static_cast<double>(res.distance) / static_cast<double>(loaded.values.size());
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_oracle_repairable(const std::string& spec_path) {
  std::ifstream in(spec_path);
  if (!in) throw config_error("cannot open " + spec_path);
  nlohmann::json j;
  in >> j;
  ExplicitFamily<int64_t> fam;
  {
    std::istringstream fs(j.at("family").dump());
    fam = read_family_json(fs);
  }
  auto p = from_explicit(fam);
  int32_t m = j.at("m").get<int32_t>();
  auto left = j.at("left").get<std::vector<int64_t>>();
  std::vector<int64_t> right;
  if (j.contains("right")) right = j.at("right").get<std::vector<int64_t>>();
  auto res = infer_1d(p, m, std::span<const int64_t>(left), std::span<const int64_t>(right),
                      std::span<const int64_t>(fam.alphabet), true);
  nlohmann::json out;
  out["repairable"] = res.repairable;
  if (res.repairable) out["completion"] = res.completion;
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_adversarial_gen(int n, int d, int k, const std::string& kind, const std::string& variant,
                        uint64_t seed, const std::string& out_path) {
  Rng rng = Rng(seed).split("adversarial");
  auto inst = gen_instance(n, d, k, kind == "reject" ? GravityKind::kReject : GravityKind::kAccept,
                           variant == "counting" ? GravityVariant::kCounting : GravityVariant::kSet,
                           rng);
  if (out_path.empty()) {
    write_instance_json(std::cout, inst);
  } else {
    std::ofstream out(out_path);
    if (!out) throw config_error("cannot write " + out_path);
    write_instance_json(out, inst);
  }
  std::cerr << "generated " << kind << "/" << variant << " instance: check_global="
            << check_global(inst) << " check_local=" << check_local(inst) << '\n';
  return 0;
}

int cmd_adversarial_check(const std::string& in_path) {
  std::ifstream in(in_path);
  if (!in) throw config_error("cannot open " + in_path);
  auto inst = read_instance_json(in);
  nlohmann::json j;
  j["check_global"] = check_global(inst);
  j["check_local"] = check_local(inst);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_grid_dump(int n, int d, int k, int w) {
  Grid g = build_grid(n, d, k, w);
  std::cout << "grid n=" << n << " d=" << d << " k=" << k << " requested_w=" << w
            << " chosen_w=" << g.width() << " intervals=" << g.partition().count()
            << " blocks=" << g.block_count() << '\n';
  // run-length encoding of per-axis membership (identical on every axis)
  std::cout << "axis pattern: ";
  int32_t run_start = 1;
  auto axis_in_grid = [&](int32_t x) {
    const auto& part = g.partition();
    const Interval& iv = part.interval(part.interval_of(x));
    return x - iv.start < k - 1;
  };
  bool cur = axis_in_grid(1);
  for (int32_t x = 2; x <= n + 1; ++x) {
    bool now = x <= n && axis_in_grid(x);
    if (x > n || now != cur) {
      std::cout << (cur ? "G" : "B") << ':' << run_start << '-' << x - 1 << ' ';
      run_start = x;
      cur = now;
    }
  }
  std::cout << '\n';
  for (int64_t o = 0; o < std::min<int64_t>(g.block_count(), 4); ++o) {
    BoxSpec box = g.geometry(g.block_at(o));
    std::cout << "block " << o << ": interior " << box.interior_size() << " cells, closure "
              << box.closure_size() << ", boundary " << box.boundary_size() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sublinear testers for k-local properties of d-dimensional arrays"};
  app.require_subcommand(1);

  CommonFlags tf;
  auto* test_cmd = app.add_subcommand("test", "run a tester over seeded trials");
  add_common(test_cmd, tf);

  CommonFlags bf;
  int bench_min = 1024, bench_max = 65536, bench_factor = 2;
  auto* bench_cmd = app.add_subcommand("bench", "query scaling over a geometric n-range");
  add_common(bench_cmd, bf);
  bench_cmd->add_option("--n-min", bench_min, "smallest width");
  bench_cmd->add_option("--n-max", bench_max, "largest width");
  bench_cmd->add_option("--factor", bench_factor, "geometric step");

  auto* oracle_cmd = app.add_subcommand("oracle", "exact brute-force ground truth");
  CommonFlags of;
  std::string oracle_array, oracle_spec;
  std::vector<int64_t> oracle_alphabet;
  auto* dist_cmd = oracle_cmd->add_subcommand("distance", "exact Hamming distance to a property");
  add_common(dist_cmd, of);
  dist_cmd->add_option("--array", oracle_array, "array JSON file")->required();
  dist_cmd->add_option("--alphabet", oracle_alphabet, "alphabet values for the search");
  auto* rep_cmd = oracle_cmd->add_subcommand("repairable", "1D repairability from a JSON spec");
  rep_cmd->add_option("--spec", oracle_spec, "JSON with family, m, left, right")->required();

  auto* adv_cmd = app.add_subcommand("adversarial", "lower-bound instance families");
  int adv_n = 12, adv_d = 2, adv_k = 2;
  std::string adv_kind = "accept", adv_variant = "set", adv_out, adv_in;
  uint64_t adv_seed = 1;
  auto* gen_cmd = adv_cmd->add_subcommand("gen", "generate an instance");
  gen_cmd->add_option("--n", adv_n, "width");
  gen_cmd->add_option("--d", adv_d, "dimension");
  gen_cmd->add_option("--k", adv_k, "jump height (even)");
  gen_cmd->add_option("--kind", adv_kind, "accept|reject");
  gen_cmd->add_option("--variant", adv_variant, "set|counting");
  gen_cmd->add_option("--seed", adv_seed, "seed");
  gen_cmd->add_option("--out", adv_out, "output file (default stdout)");
  auto* check_cmd = adv_cmd->add_subcommand("check", "re-check a serialized instance");
  check_cmd->add_option("--in", adv_in, "instance JSON")->required();

  auto* grid_cmd = app.add_subcommand("grid-dump", "inspect a grid decomposition");
  int gd_n = 64, gd_d = 1, gd_k = 2, gd_w = 8;
  grid_cmd->add_option("--n", gd_n, "width");
  grid_cmd->add_option("--d", gd_d, "dimension");
  grid_cmd->add_option("--k", gd_k, "locality");
  grid_cmd->add_option("--w", gd_w, "requested block width");

  CLI11_PARSE(app, argc, argv);

  try {
    if (test_cmd->parsed()) return cmd_test(tf);
    if (bench_cmd->parsed()) return cmd_bench(bf, bench_min, bench_max, bench_factor);
    if (oracle_cmd->parsed()) {
      if (dist_cmd->parsed()) return cmd_oracle_distance(oracle_array, of, oracle_alphabet);
      if (rep_cmd->parsed()) return cmd_oracle_repairable(oracle_spec);
      std::cerr << "oracle: choose distance or repairable\n";
      return kExitConfig;
    }
    if (adv_cmd->parsed()) {
      if (gen_cmd->parsed())
        return cmd_adversarial_gen(adv_n, adv_d, adv_k, adv_kind, adv_variant, adv_seed, adv_out);
      if (check_cmd->parsed()) return cmd_adversarial_check(adv_in);
      std::cerr << "adversarial: choose gen or check\n";
      return kExitConfig;
    }
    if (grid_cmd->parsed()) return cmd_grid_dump(gd_n, gd_d, gd_k, gd_w);
  } catch (const resource_error& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return kExitResource;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const io_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const capability_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
