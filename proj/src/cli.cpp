#include "lacunary/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "lacunary/circular.hpp"
#include "lacunary/error.hpp"

namespace lacunary::cli {
namespace {

namespace fs = std::filesystem;

const std::set<std::string> kTopLevelKeys = {"function", "gaps", "x",     "seed", "reps", "N",     "K",    "G",
                                             "gamma",    "Nmax", "n",     "weights", "a", "Tmax", "seeds", "battery"};

const std::set<std::string> kBatteryKeys = {"varianceK",  "varianceReps", "decayNmax", "scheduleN", "asymptoticsN",
                                            "blockNs",    "blockReps",    "cltN",      "cltReps",   "lilNmax",
                                            "lilGamma",   "lilSeeds",     "momentNs",  "momentReps", "kefpA",
                                            "kefpTmax"};

const std::vector<std::string> kSubcommands = {"variance", "density", "decay", "schedule", "blocks", "clt",
                                               "lil",      "chung",   "kefp",  "moment4",  "battery"};

std::uint64_t as_count(const Json& v, const std::string& key) {
  if (v.is_number_unsigned()) {
    const auto n = v.get<std::uint64_t>();
    if (n > 0) return n;
  } else if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 1.0 && d < 1.8e19 && d == std::floor(d)) return static_cast<std::uint64_t>(d);
  }
  throw InvalidInput("'" + key + "' must be a positive integer");
}

double as_real(const Json& v, const std::string& key) {
  if (!v.is_number() || !std::isfinite(v.get<double>())) {
    throw InvalidInput("'" + key + "' must be a finite number");
  }
  return v.get<double>();
}

template <class T>
std::vector<T> as_count_list(const Json& v, const std::string& key) {
  std::vector<T> out;
  if (v.is_array()) {
    for (const auto& e : v) out.push_back(static_cast<T>(as_count(e, key)));
  } else {
    out.push_back(static_cast<T>(as_count(v, key)));
  }
  if (out.empty()) throw InvalidInput("'" + key + "' must not be empty");
  return out;
}

std::vector<double> as_real_list(const Json& v, const std::string& key) {
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& e : v) out.push_back(as_real(e, key));
  } else {
    out.push_back(as_real(v, key));
  }
  if (out.empty()) throw InvalidInput("'" + key + "' must not be empty");
  return out;
}

std::size_t as_grid(const Json& v, const std::string& key) {
  const auto g = as_count(v, key);
  if (!is_power_of_two(g)) throw InvalidInput("'" + key + "' must be a power of two");
  return static_cast<std::size_t>(g);
}

void apply_battery_overrides(const Json& b, BatteryConfig& c) {
  if (!b.is_object()) throw InvalidInput("'battery' must be an object");
  for (const auto& [key, v] : b.items()) {
    if (!kBatteryKeys.count(key)) throw InvalidInput("unknown battery key '" + key + "'");
    if (key == "varianceK") c.variance_k = as_count(v, key);
    else if (key == "varianceReps") c.variance_reps = as_count(v, key);
    else if (key == "decayNmax") c.decay_n_max = as_count(v, key);
    else if (key == "scheduleN") c.schedule_n = as_count(v, key);
    else if (key == "asymptoticsN") c.asymptotics_n = as_count(v, key);
    else if (key == "blockNs") c.block_ns = as_count_list<std::uint64_t>(v, key);
    else if (key == "blockReps") c.block_reps = as_count(v, key);
    else if (key == "cltN") c.clt_n = as_count(v, key);
    else if (key == "cltReps") c.clt_reps = as_count(v, key);
    else if (key == "lilNmax") c.lil.n_max = as_count(v, key);
    else if (key == "lilGamma") c.lil.gamma = as_real(v, key);
    else if (key == "lilSeeds") c.lil.seeds = c.lil.oracle_paths = as_count(v, key);
    else if (key == "momentNs") c.moment_ns = as_count_list<std::size_t>(v, key);
    else if (key == "momentReps") c.moment_reps = as_count(v, key);
    else if (key == "kefpA") c.kefp_a = as_real_list(v, key);
    else if (key == "kefpTmax") c.kefp_t_max = as_real(v, key);
  }
}

// Subcommand-neutral keys land in every field they can mean; each
// subcommand reads only its own.
void apply_shared_keys(const Json& doc, ExperimentConfig& cfg) {
  auto& c = cfg.battery;
  if (doc.contains("reps")) {
    const auto reps = as_count(doc["reps"], "reps");
    c.variance_reps = c.block_reps = c.clt_reps = c.moment_reps = reps;
  }
  if (doc.contains("K")) c.variance_k = as_count(doc["K"], "K");
  if (doc.contains("G")) c.grid_size = as_grid(doc["G"], "G");
  if (doc.contains("N")) c.clt_n = c.asymptotics_n = as_count(doc["N"], "N");
  if (doc.contains("Nmax")) {
    c.decay_n_max = as_count(doc["Nmax"], "Nmax");
    c.lil.n_max = c.decay_n_max;
  }
  if (doc.contains("gamma")) c.lil.gamma = as_real(doc["gamma"], "gamma");
  if (doc.contains("seeds")) c.lil.seeds = c.lil.oracle_paths = as_count(doc["seeds"], "seeds");
  if (doc.contains("n")) {
    const auto ns = as_count_list<std::uint64_t>(doc["n"], "n");
    c.block_ns = ns;
    c.moment_ns.assign(ns.begin(), ns.end());
    c.schedule_n = ns.back();
    cfg.density_n = static_cast<std::size_t>(ns.back());
  }
  if (doc.contains("weights")) {
    cfg.weights = as_real_list(doc["weights"], "weights");
  }
  if (doc.contains("a")) c.kefp_a = as_real_list(doc["a"], "a");
  if (doc.contains("Tmax")) c.kefp_t_max = as_real(doc["Tmax"], "Tmax");
}

struct Outcome {
  Json document = Json::object();
  std::vector<TestReport> reports;
  std::optional<std::string> csv;
};

void add_report(Outcome& o, TestReport r) {
  o.document["reports"].push_back(to_json(r));
  o.reports.push_back(std::move(r));
}

std::string fixed(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10f", v);
  return buf;
}

void print_variance_table(std::ostream& out, const VarianceReport& r) {
  out << "method          estimate        uncertainty\n";
  if (r.closed_form) out << "closed form     " << fixed(*r.closed_form) << "    exact\n";
  out << "series K=" << r.truncation_k << std::string(r.truncation_k < 10 ? 6 : r.truncation_k < 100 ? 5 : 4, ' ')
      << fixed(r.series_truncated) << "    ";
  if (r.series_tail_bound) out << "tail <= " << *r.series_tail_bound << "\n";
  else out << "tail unavailable\n";
  out << "monte carlo     " << fixed(r.monte_carlo) << "    stdErr " << r.monte_carlo_std_err << "\n";
}

Json checkpoints_json(const TrajectoryCheckpoints& t) {
  Json j;
  j["N"] = t.checkpoints;
  j["partialSum"] = t.partial_sums;
  j["runningMaxAbs"] = t.running_max_abs;
  return j;
}

Json summary_json(const LilChungSummary& s) {
  return {{"aX", s.a_x},
          {"medianLil", s.median_lil},
          {"medianChung", s.median_chung},
          {"oracleMedianLil", s.oracle_median_lil},
          {"oracleMedianChung", s.oracle_median_chung},
          {"finalLil", s.final_lil},
          {"finalChung", s.final_chung}};
}

Outcome run_subcommand(const std::string& sub, const ExperimentConfig& cfg, bool csv, const Executor& exec,
                       std::ostream& out) {
  const auto& c = cfg.battery;
  Outcome o;
  o.document["reports"] = Json::array();

  if (sub == "variance") {
    VarianceOptions opt;
    if (cfg.raw.contains("K")) opt.truncation = c.variance_k;
    opt.grid_size = c.grid_size;
    opt.reps = c.variance_reps;
    opt.seed = derive_seed(c.seed, 1);
    const auto r = variance_report(c.f, c.dist, c.x, opt, exec);
    o.document["variance"] = to_json(r);
    add_report(o, assess_variance(r, c.variance_reps));
    print_variance_table(out, r);
  } else if (sub == "density") {
    const auto p = mod1_density(c.dist, c.x, cfg.density_n, c.grid_size);
    TestReport r;
    r.name = "density";
    r.statistic = uniformity_gap(p);
    r.sample_size = p.grid_size;
    r.verdict = Verdict::Diagnostic;
    r.details = {{"n", static_cast<double>(cfg.density_n)}, {"G", static_cast<double>(p.grid_size)}};
    add_report(o, r);
    if (csv) {
      o.csv = mod1_density_csv(p);
    } else {
      o.document["density"] = p.values;
    }
  } else if (sub == "decay") {
    add_report(o, check_decay(c));
    try {
      const auto fit = decay_fit(c.dist, c.x, c.decay_n_max, c.grid_size);
      if (csv) o.csv = decay_csv(fit);
      else o.document["fit"] = to_json(fit);
    } catch (const DegenerateFit&) {
      o.document["fit"] = nullptr;
    }
  } else if (sub == "schedule") {
    add_report(o, check_schedule(c));
    add_report(o, check_schedule_asymptotics(c));
    const auto schedule = BlockSchedule::build(p_of_n(c.schedule_n));
    if (csv) {
      o.csv = schedule_csv(schedule);
    } else {
      o.document["schedule"] = {{"mTilde", schedule.m_tilde}, {"mHat", schedule.m_hat}, {"m", schedule.m}};
    }
  } else if (sub == "blocks") {
    add_report(o, check_blocks(c, exec));
  } else if (sub == "clt") {
    add_report(o, check_clt(c, exec));
  } else if (sub == "lil" || sub == "chung") {
    const auto summary = battery_lil_summary(c, exec);
    add_report(o, sub == "lil" ? lil_report(summary) : chung_report(summary));
    o.document["summary"] = summary_json(summary);
    const auto path = simulate_trajectory(c.f, c.dist, c.x, c.lil.n_max, c.lil.gamma, lil_path_seed(c, 0));
    if (csv) o.csv = checkpoints_csv(path);
    else o.document["trajectory"] = checkpoints_json(path);
  } else if (sub == "kefp") {
    add_report(o, check_kefp(c));
  } else if (sub == "moment4") {
    if (cfg.weights.empty()) {
      add_report(o, check_moment4(c, exec));
    } else {
      const auto est = fourth_moment_ratio(c.f, c.dist, c.x, cfg.weights, c.moment_reps, derive_seed(c.seed, 5), exec);
      TestReport r;
      r.name = "moment4";
      r.statistic = est.ratio;
      r.sample_size = c.moment_reps;
      r.verdict = Verdict::Diagnostic;
      r.details = {{"stdErr", est.std_err}, {"terms", static_cast<double>(cfg.weights.size())}};
      add_report(o, r);
    }
  } else if (sub == "battery") {
    for (auto& r : run_battery(c, exec)) add_report(o, std::move(r));
  }
  return o;
}

int report_error(std::ostream& err, const std::string& kind, const std::string& message, int code) {
  Json e = {{"error", {{"kind", kind}, {"message", message}}}};
  err << e.dump() << "\n";
  return code;
}

Json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read config file " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(const Json& doc) {
  if (!doc.is_object()) throw InvalidInput("config must be a JSON object");
  for (const auto& [key, v] : doc.items()) {
    if (!kTopLevelKeys.count(key)) throw InvalidInput("unknown config key '" + key + "'");
  }
  ExperimentConfig cfg;
  cfg.raw = doc;
  auto& c = cfg.battery;
  if (doc.contains("function")) c.f = parse_function(doc["function"]);
  if (doc.contains("gaps")) c.dist = parse_gap_law(doc["gaps"]);
  if (doc.contains("x")) c.x = as_real(doc["x"], "x");
  if (c.x == 0.0) throw InvalidInput("frequency multiplier x must be nonzero");
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw InvalidInput("'seed' must be a nonnegative integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  apply_shared_keys(doc, cfg);
  if (doc.contains("battery")) apply_battery_overrides(doc["battery"], c);
  return cfg;
}

std::string config_hash(const std::string& subcommand, const Json& raw) {
  return hex64(fnv1a64(subcommand + "\n" + raw.dump()));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulation battery for lacunary sums with random gaps", "lacunary"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::size_t workers = 0;
  std::string format = "json";
  bool force = false;
  app.add_option("--config", config_path, "JSON experiment config");
  app.add_option("--seed", seed, "master seed (overrides the config)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--workers", workers, "worker threads, 0 = one per processor");
  app.add_option("--format", format, "data file format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--force", force, "replace a manifest written for a different config");
  app.fallthrough();
  for (const auto& name : kSubcommands) app.add_subcommand(name);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    return report_error(err, "usage", e.what(), kInvalidInput);
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  ExperimentConfig cfg;
  std::string hash;
  try {
    Json doc = config_path.empty() ? Json::object() : read_config(config_path);
    if (seed && doc.is_object()) doc["seed"] = *seed;
    cfg = parse_config(doc);
    hash = config_hash(sub, cfg.raw);
  } catch (const Error& e) {
    return report_error(err, e.kind(), e.what(), kInvalidInput);
  }

  const fs::path dir(out_dir);
  const fs::path manifest_path = dir / (sub + "-manifest.json");
  try {
    fs::create_directories(dir);
    if (fs::exists(manifest_path) && !force) {
      std::ifstream in(manifest_path);
      const auto previous = Json::parse(in, nullptr, false);
      if (previous.is_discarded() || !previous.contains("configHash") || previous["configHash"] != hash) {
        return report_error(err, "manifest-conflict",
                            manifest_path.string() + " belongs to a different config; rerun with --force",
                            kManifestConflict);
      }
    }
  } catch (const std::exception& e) {
    return report_error(err, "io", e.what(), kRuntimeError);
  }

  Outcome outcome;
  try {
    const Executor exec(workers);
    outcome = run_subcommand(sub, cfg, format == "csv", exec, out);
  } catch (const InvalidInput& e) {
    return report_error(err, e.kind(), e.what(), kInvalidInput);
  } catch (const Error& e) {
    return report_error(err, e.kind(), e.what(), kRuntimeError);
  } catch (const std::exception& e) {
    return report_error(err, "internal", e.what(), kRuntimeError);
  }

  Json files = Json::array();
  try {
    outcome.document["subcommand"] = sub;
    outcome.document["configHash"] = hash;
    outcome.document["masterSeed"] = cfg.battery.seed;
    const std::string stem = sub + "-" + hash;
    write_file_atomic(dir / (stem + ".json"), outcome.document.dump(2) + "\n");
    files.push_back(stem + ".json");
    if (outcome.csv) {
      write_file_atomic(dir / (stem + ".csv"), *outcome.csv);
      files.push_back(stem + ".csv");
    }
    const Json manifest = {{"configHash", hash},  {"masterSeed", cfg.battery.seed}, {"version", kVersion},
                           {"subcommand", sub},   {"config", cfg.raw},              {"files", files}};
    write_file_atomic(manifest_path, manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    return report_error(err, "io", e.what(), kRuntimeError);
  }

  bool failed = false;
  for (const auto& r : outcome.reports) {
    out << r.name << ": " << to_string(r.verdict) << " (statistic " << r.statistic;
    if (r.p_value) out << ", p " << *r.p_value;
    out << ")\n";
    failed = failed || r.verdict == Verdict::Fail;
  }
  for (const auto& f : files) out << "wrote " << (dir / f.get<std::string>()).string() << "\n";
  return failed ? kCheckFailed : kOk;
}

}  // namespace lacunary::cli
