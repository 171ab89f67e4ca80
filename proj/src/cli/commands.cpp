#include "infocast/cli/commands.hpp"

#include "infocast/cli/config_file.hpp"
#include "infocast/engine/simulation.hpp"
#include "infocast/errors.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <charconv>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;

namespace infocast::cli {

namespace {

std::string fmt(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void write_run_files(const fs::path &dir, const engine::SimConfig &config, const engine::MetricsRecord &record,
                     const std::string &command) {
  fs::create_directories(dir);
  std::ofstream csv(dir / "metrics.csv", std::ios::binary);
  engine::write_metrics_csv(csv, record);
  std::ofstream manifest(dir / "manifest.txt", std::ios::binary);
  write_manifest(manifest, command, config);
  if (!csv || !manifest)
    throw std::runtime_error("failed writing outputs under " + dir.string());
}

std::vector<std::string> split_values(const std::string &v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos)
      out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

KeyValues with_override(KeyValues kv, const std::string &key, const std::string &value) {
  if (key == "velocity") {
    kv.erase("speed_min");
    kv.erase("speed_max");
  } else if (key == "speed_min" || key == "speed_max") {
    kv.erase("velocity");
  }
  kv[key] = value;
  return kv;
}

} // namespace

ExperimentSpec read_experiment_spec(const std::string &path) {
  const auto kv = read_key_values(path);
  static const std::vector<std::string> known{"base_config", "sweep_param", "values", "replications", "out_dir",
                                              "seed"};
  for (const auto &[key, value] : kv)
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError(key, "unknown sweep key '" + key + "'");
  for (const char *key : {"base_config", "sweep_param", "values"})
    if (!kv.contains(key))
      throw ConfigError(key, std::string("missing required sweep key '") + key + "'");

  const fs::path base = fs::path(path).parent_path();
  ExperimentSpec spec;
  spec.base_config = (base / kv.at("base_config")).string();
  spec.sweep_param = kv.at("sweep_param");
  if (!is_config_key(spec.sweep_param) || spec.sweep_param == "scheme")
    throw ConfigError("sweep_param", "sweep_param '" + spec.sweep_param + "' does not name a sweepable config field");
  spec.values = split_values(kv.at("values"));
  if (spec.values.empty())
    throw ConfigError("values", "sweep key 'values' is empty");
  if (kv.contains("replications")) {
    const auto &v = kv.at("replications");
    long long n = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
    if (ec != std::errc{} || p != v.data() + v.size() || n < 1)
      throw ConfigError("replications", "sweep key 'replications' must be an integer >= 1");
    spec.replications = static_cast<std::size_t>(n);
  }
  spec.out_dir = (base / (kv.contains("out_dir") ? kv.at("out_dir") : spec.out_dir)).string();
  if (kv.contains("seed")) {
    const auto &v = kv.at("seed");
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), spec.seed);
    if (ec != std::errc{} || p != v.data() + v.size())
      throw ConfigError("seed", "sweep key 'seed' must be an unsigned integer");
  }
  return spec;
}

std::vector<std::pair<std::string, double>> summarize(const engine::MetricsRecord &record,
                                                      const engine::SimConfig &config) {
  std::vector<std::pair<std::string, double>> out;
  const std::span<const engine::MetricsRecord> one(&record, 1);
  out.emplace_back("decode_events", static_cast<double>(record.dd_samples.size()));
  if (!record.dd_samples.empty())
    out.emplace_back("mdd", engine::mdd(one));
  if (!record.collected.empty())
    for (double eta : record.eta_grid) {
      out.emplace_back("collected_eta=" + fmt(eta), engine::mean_collected(one, eta));
      out.emplace_back("p_success_eta=" + fmt(eta),
                       engine::p_success(one, eta, static_cast<double>(config.message_packets)));
    }
  if (!record.occupancy.empty())
    out.emplace_back("buffer_occupancy_ratio", engine::mean_occupancy_ratio(one));
  out.emplace_back("eligible_vehicles", static_cast<double>(record.eligible_vehicles));
  out.emplace_back("vehicles_spawned", static_cast<double>(record.vehicles_spawned));
  return out;
}

void write_manifest(std::ostream &os, const std::string &command, const engine::SimConfig &config) {
  os << "# " << tool_version << '\n';
  os << "# command: " << command << '\n';
  write_config(os, config);
}

int cmd_run(const RunArgs &args, std::ostream &out, std::ostream &err) {
  engine::SimConfig config;
  try {
    config = build_config(read_key_values(args.config));
  } catch (const ConfigError &e) {
    err << "config error: " << e.what() << '\n';
    return exit_usage;
  }
  if (args.seed)
    config.rng_seed = *args.seed;
  const auto record = engine::run(config);
  write_run_files(args.out_dir, config, record, "run");
  out << "wrote " << (fs::path(args.out_dir) / "metrics.csv").string() << '\n';
  for (const auto &[metric, value] : summarize(record, config))
    out << metric << " = " << value << '\n';
  return exit_ok;
}

int cmd_sweep(const SweepArgs &args, std::ostream &out, std::ostream &err) {
  ExperimentSpec spec;
  KeyValues base;
  std::vector<engine::SimConfig> points;
  try {
    spec = read_experiment_spec(args.spec);
    base = read_key_values(spec.base_config);
    for (const auto &v : spec.values)
      points.push_back(build_config(with_override(base, spec.sweep_param, v)));
  } catch (const ConfigError &e) {
    err << "sweep error: " << e.what() << '\n';
    return exit_usage;
  }

  struct Task {
    std::size_t point;
    std::size_t rep;
    engine::SimConfig config;
    engine::MetricsRecord record;
  };
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < points.size(); ++p)
    for (std::size_t r = 0; r < spec.replications; ++r) {
      Task t{p, r, points[p], {}};
      t.config.rng_seed = engine::replication_seed(spec.seed, r);
      tasks.push_back(std::move(t));
    }

  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        tasks[i].record = engine::run(tasks[i].config);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(args.jobs, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < n; ++j)
    pool.emplace_back(worker);
  worker();
  for (auto &t : pool)
    t.join();
  if (failure)
    std::rethrow_exception(failure);

  const fs::path root(spec.out_dir);
  fs::create_directories(root);
  std::ofstream agg(root / "sweep.csv", std::ios::binary);
  agg << "sweep_param,value,replication,metric,value\n";
  for (std::size_t p = 0; p < points.size(); ++p) {
    std::vector<std::pair<std::string, std::pair<double, std::size_t>>> means;
    for (const auto &t : tasks) {
      if (t.point != p)
        continue;
      write_run_files(root / (spec.sweep_param + "_" + spec.values[p]) / ("rep_" + std::to_string(t.rep)), t.config,
                      t.record, "sweep");
      for (const auto &[metric, value] : summarize(t.record, t.config)) {
        agg << spec.sweep_param << ',' << spec.values[p] << ',' << t.rep << ',' << metric << ',' << value << '\n';
        auto it = std::find_if(means.begin(), means.end(), [&](const auto &m) { return m.first == metric; });
        if (it == means.end())
          means.push_back({metric, {value, 1}});
        else {
          it->second.first += value;
          ++it->second.second;
        }
      }
    }
    for (const auto &[metric, acc] : means)
      agg << spec.sweep_param << ',' << spec.values[p] << ",mean," << metric << ','
          << acc.first / static_cast<double>(acc.second) << '\n';
  }
  std::ofstream manifest(root / "manifest.txt", std::ios::binary);
  manifest << "# " << tool_version << "\n# command: sweep\n";
  manifest << "sweep_param = " << spec.sweep_param << "\nvalues = ";
  for (std::size_t i = 0; i < spec.values.size(); ++i)
    manifest << (i ? "," : "") << spec.values[i];
  manifest << "\nreplications = " << spec.replications << "\nseed = " << spec.seed << "\n# base config\n";
  write_config(manifest, points.front());
  out << "wrote " << (root / "sweep.csv").string() << " (" << tasks.size() << " runs)\n";
  return exit_ok;
}

int cmd_validate(const ValidateArgs &args, std::ostream &out, std::ostream &err, const engine::Formulas &formulas) {
  if (!(args.tol_scale > 0.0)) {
    err << "--tol-scale must be > 0\n";
    return exit_usage;
  }
  engine::ValidationOptions opt;
  opt.tol_scale = args.tol_scale;
  opt.formulas = formulas;
  const auto report = engine::run_validation(opt);
  engine::write_report(out, report);
  if (!report.passed()) {
    err << "validation failed\n";
    return exit_validation;
  }
  return exit_ok;
}

int dispatch(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Fountain-coded vehicular dissemination simulator", "infocast"};
  app.set_version_flag("--version", tool_version);
  app.require_subcommand(1);

  RunArgs run_args;
  std::uint64_t seed = 0;
  auto *run = app.add_subcommand("run", "run one simulation");
  run->add_option("--config", run_args.config, "config file")->required()->check(CLI::ExistingFile);
  auto *seed_opt = run->add_option("--seed", seed, "override the config seed");
  run->add_option("--out", run_args.out_dir, "output directory");

  SweepArgs sweep_args;
  auto *sweep = app.add_subcommand("sweep", "parameter sweep with replications");
  sweep->add_option("--spec", sweep_args.spec, "experiment spec file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--jobs", sweep_args.jobs, "worker threads")->check(CLI::PositiveNumber);

  ValidateArgs validate_args;
  auto *validate = app.add_subcommand("validate", "analytic vs Monte-Carlo checks");
  validate->add_option("--tol-scale", validate_args.tol_scale, "multiply every tolerance")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e, out, err) == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*run) {
      if (*seed_opt)
        run_args.seed = seed;
      return cmd_run(run_args, out, err);
    }
    if (*sweep)
      return cmd_sweep(sweep_args, out, err);
    return cmd_validate(validate_args, out, err);
  } catch (const ConfigError &e) {
    err << "config error: " << e.what() << '\n';
    return exit_usage;
  } catch (const InvalidParameter &e) {
    err << "invalid parameter: " << e.what() << '\n';
    return exit_usage;
  }
}

} // namespace infocast::cli
