// Copyright 2026 The Graybox Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "graybox/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include "graybox/calibrate.hpp"
#include "graybox/dataset.hpp"
#include "graybox/error.hpp"
#include "graybox/metrics.hpp"
#include "graybox/rng.hpp"

#ifndef GRAYBOX_VERSION
#define GRAYBOX_VERSION "unknown"
#endif

namespace graybox {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string hash_text(const std::string& bytes) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Collects the files a command reads and writes so the manifest can pin them.
class Run {
 public:
  Run(const fs::path& input_dir, const fs::path& output_dir) : in_(input_dir), out_(output_dir) {}

  std::string input(const std::string& name) {
    const fs::path p = in_ / name;
    if (!fs::exists(p)) throw ConfigError("missing input " + p.string() + " (run the producing command first)");
    std::string text = read_file(p);
    inputs_[name] = hash_text(text);
    return text;
  }
  bool has_input(const std::string& name) const { return fs::exists(in_ / name); }

  void output(const std::string& name, const std::string& text) {
    write_file(out_ / name, text);
    outputs_.push_back({name, hash_text(text)});
  }

  const std::map<std::string, std::string>& inputs() const { return inputs_; }
  const std::vector<Artifact>& outputs() const { return outputs_; }
  const fs::path& input_dir() const { return in_; }

 private:
  fs::path in_;
  fs::path out_;
  std::map<std::string, std::string> inputs_;
  std::vector<Artifact> outputs_;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string require_model(const CommandRequest& request) {
  if (!request.model || (*request.model != "sgm" && *request.model != "pgm")) {
    throw ConfigError(request.command + " needs --model sgm|pgm");
  }
  return *request.model;
}

json checkpoint_json(const std::string& kind, std::span<const double> values, std::uint64_t seed,
                     const json& hyper, const std::string& dataset_hash, std::size_t train_size) {
  json j;
  j["format"] = "graybox-checkpoint";
  j["kind"] = kind;
  j["version"] = GRAYBOX_VERSION;
  j["architecture"] = json::parse(architecture_descriptor());
  j["parameter_count"] = values.size();
  if (kind == "pgm") j["layout"] = "mean[205] then raw_scale[205]; scale = softplus(raw_scale)";
  j["seed"] = seed;
  j["hyperparameters"] = hyper;
  j["dataset_hash"] = dataset_hash;
  j["train_size"] = train_size;
  j["values"] = std::vector<double>(values.begin(), values.end());
  return j;
}

std::vector<double> checkpoint_values(const std::string& text, const std::string& kind,
                                      std::size_t expected) {
  const json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || j.value("format", "") != "graybox-checkpoint") {
    throw ConfigError(kind + " checkpoint is not a graybox checkpoint");
  }
  if (j.value("kind", "") != kind) throw ConfigError("checkpoint kind is not " + kind);
  if (j.at("architecture") != json::parse(architecture_descriptor())) {
    throw ConfigError(kind + " checkpoint architecture does not match this build");
  }
  auto values = j.at("values").get<std::vector<double>>();
  if (values.size() != expected) {
    throw ConfigError(kind + " checkpoint holds " + std::to_string(values.size()) + " values, expected " +
                      std::to_string(expected));
  }
  return values;
}

BlackboxParams load_sgm(Run& run) {
  return BlackboxParams(checkpoint_values(run.input("sgm.json"), "sgm", BlackboxLayout::kParameterCount));
}

VariationalParams load_pgm(Run& run) {
  return VariationalParams::from_flat(
      checkpoint_values(run.input("pgm.json"), "pgm", VariationalParams::kParameterCount));
}

double read_theta_star(const std::string& csv, const std::string& name) {
  std::istringstream in(csv);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  std::istringstream fields(row);
  std::string model, theta;
  std::getline(fields, model, ',');
  std::getline(fields, theta, ',');
  try {
    return std::stod(theta);
  } catch (const std::exception&) {
    throw ConfigError(name + " does not contain a theta_star value");
  }
}

std::string gen_data(Run& run, const RunConfig& config, json& seeds) {
  const std::uint64_t seed = config.seed_for("dataset");
  seeds["dataset"] = seed;
  DeviceSimulator device(config.device);
  const auto records = generate_dataset(device, config.dataset.m, config.dataset.n_shots,
                                        config.dataset.trajectories, seed);
  const std::string csv = dataset_to_string(records);
  run.output("dataset.csv", csv);
  const json full = to_json(config);
  json meta = {{"device", full["device"]},
               {"noise", full["noise"]},
               {"m", config.dataset.m},
               {"n_shots", config.dataset.n_shots},
               {"trajectories", config.dataset.trajectories},
               {"seed", seed},
               {"dataset_hash", hash_text(csv)}};
  run.output("dataset.json", dump(meta));
  return std::to_string(records.size()) + " records";
}

std::string train(Run& run, const RunConfig& config, const std::string& model, json& seeds) {
  const std::string csv = run.input("dataset.csv");
  const auto records = parse_dataset(csv);
  const auto parts = split(records, config.dataset.train_frac, config.split_seed());
  seeds["split"] = config.split_seed();
  WhiteboxCache cache(config.device);
  const json hyper = to_json(config)["training"][model];
  std::ostringstream summary;
  if (model == "sgm") {
    const std::uint64_t seed = config.seed_for("sgm");
    seeds["sgm"] = seed;
    const auto result = sgm_train(parts.train, cache, config.sgm, seed);
    run.output("sgm.json", dump(checkpoint_json("sgm", result.params.values(), seed, hyper,
                                                hash_text(csv), parts.train.size())));
    std::ostringstream trace;
    trace << "epoch,loss\n";
    for (std::size_t i = 0; i < result.loss_trace.size(); ++i) {
      trace << i << ',' << format_double(result.loss_trace[i]) << '\n';
    }
    run.output("sgm_loss.csv", trace.str());
    const double test = parts.test.empty() ? 0.0 : sgm_loss(result.params.values(), parts.test, cache);
    summary << "final train loss " << result.loss_trace.back() << ", test loss " << test;
  } else {
    const std::uint64_t seed = config.seed_for("pgm");
    seeds["pgm"] = seed;
    const auto result = pgm_train(parts.train, cache, config.pgm, seed);
    const auto flat = result.params.flat();
    run.output("pgm.json", dump(checkpoint_json("pgm", flat, seed, hyper, hash_text(csv),
                                                parts.train.size())));
    std::ostringstream trace;
    trace << "step,elbo\n";
    for (std::size_t i = 0; i < result.elbo_trace.size(); ++i) {
      trace << i << ',' << format_double(result.elbo_trace[i]) << '\n';
    }
    run.output("pgm_elbo.csv", trace.str());
    summary << "final ELBO " << result.elbo_trace.back();
  }
  return summary.str();
}

std::string run_sweep(Run& run, const RunConfig& config, json& seeds) {
  const BlackboxParams sgm = load_sgm(run);
  const VariationalParams pgm = load_pgm(run);
  const std::uint64_t seed = config.seed_for("sweep");
  seeds["sweep"] = seed;
  DeviceSimulator device(config.device);
  WhiteboxCache cache(config.device);
  const SweepResult result = sweep(device, cache, sgm, pgm, sqrt_x_gate(), config.sweep, seed);
  std::ostringstream table, samples;
  write_sweep_csv(table, result);
  write_sweep_samples(samples, result);
  run.output("sweep.csv", table.str());
  run.output("sweep_samples.csv", samples.str());
  std::ostringstream summary;
  summary << "mean JSD sgm " << result.mean_jsd_sgm() << ", pgm " << result.mean_jsd_pgm();
  return summary.str();
}

std::string calibrate(Run& run, const RunConfig& config, const std::string& model) {
  WhiteboxCache cache(config.device);
  CalibrationResult result;
  const CalibrationConfig& cc = model == "sgm" ? config.calibrate_sgm : config.calibrate_pgm;
  if (model == "sgm") {
    result = calibrate_sgm(load_sgm(run), cache, sqrt_x_gate(), cc);
  } else {
    result = calibrate_pgm(load_pgm(run), cache, sqrt_x_gate(), cc);
  }
  std::ostringstream row;
  row << "model,theta_star,theta0,iterations,final_objective,gradient_method\n"
      << model << ',' << format_double(result.theta_star) << ',' << format_double(cc.theta0) << ','
      << cc.iterations << ',' << format_double(result.trace.back().objective) << ','
      << result.gradient_method << '\n';
  run.output("calibration_" + model + ".csv", row.str());
  std::ostringstream trace;
  write_calibration_trace(trace, result);
  run.output("calibration_" + model + "_trace.csv", trace.str());
  return "theta* = " + format_double(result.theta_star);
}

std::string evaluate(Run& run, const RunConfig& config, json& seeds) {
  const BlackboxParams sgm = load_sgm(run);
  const VariationalParams pgm = load_pgm(run);
  DeviceSimulator device(config.device);
  WhiteboxCache cache(config.device);
  std::vector<std::pair<std::string, CalibrationEvaluation>> rows;
  const std::uint64_t seed = config.seed_for("eval");
  seeds["eval"] = seed;
  for (const std::string model : {"sgm", "pgm"}) {
    const std::string name = "calibration_" + model + ".csv";
    if (!run.has_input(name)) continue;
    const double theta = read_theta_star(run.input(name), name);
    rows.emplace_back(model, evaluate_calibration(theta, device, cache, sgm, pgm, sqrt_x_gate(),
                                                  config.evaluation, derive_seed(seed, model, 0)));
  }
  if (rows.empty()) throw ConfigError("eval needs calibration_sgm.csv or calibration_pgm.csv");
  std::ostringstream table, channels, samples;
  write_calibration_table(table, rows);
  write_channel_jsd(channels, rows);
  write_evaluation_samples(samples, rows);
  run.output("calibration_table.csv", table.str());
  run.output("channel_jsd.csv", channels.str());
  run.output("eval_samples.csv", samples.str());
  std::ostringstream summary;
  for (const auto& [model, ev] : rows) {
    summary << model << ": theta " << ev.theta << " device AGF " << ev.mean_agf_device << " ratio "
            << ev.ratio << "; ";
  }
  return summary.str();
}

std::string verify(Run& run, const RunConfig& config, json& seeds, int& exit_code) {
  const std::uint64_t seed = config.seed_for("verify");
  seeds["verify"] = seed;
  const auto checks = verify_estimator(config.verify, seed);
  std::ostringstream csv;
  csv << "sigma0,mu0,n_shots,repeats,empirical_mean,mean_se,mean_z,expected_variance,"
         "empirical_variance,variance_rel_error,pass\n";
  bool ok = true;
  for (const auto& c : checks) {
    const bool pass = c.mean_ok && c.variance_ok;
    ok = ok && pass;
    csv << format_double(c.sigma0) << ',' << format_double(c.mu0) << ',' << config.verify.n_shots
        << ',' << config.verify.repeats << ',' << format_double(c.empirical_mean) << ','
        << format_double(c.mean_se) << ',' << format_double(c.mean_z) << ','
        << format_double(c.expected_variance) << ',' << format_double(c.empirical_variance) << ','
        << format_double(c.variance_rel_error) << ',' << (pass ? "true" : "false") << '\n';
  }
  run.output("verify_estimator.csv", csv.str());
  if (!ok) exit_code = kExitVerify;
  return ok ? "all estimator checks within tolerance" : "estimator checks out of tolerance";
}

}  // namespace

std::string file_hash(const fs::path& path) { return hash_text(read_file(path)); }

std::string manifest_name(const CommandRequest& request) {
  std::string name = "manifest-" + request.command;
  if (request.model) name += "-" + *request.model;
  return name + ".json";
}

fs::path resolve_output_dir(const RunConfig& config, const std::optional<fs::path>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("GRAYBOX_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return config.output_dir;
}

CommandResult run_command(const CommandRequest& request, const RunConfig& config,
                          const fs::path& output_dir) {
  config.validate();
  static const std::vector<std::string> kCommands = {"gen-data", "train",  "sweep",
                                                     "calibrate", "eval", "verify-estimator"};
  if (std::find(kCommands.begin(), kCommands.end(), request.command) == kCommands.end()) {
    throw ConfigError("unknown command '" + request.command + "'");
  }
  fs::create_directories(output_dir);
  const fs::path input_dir = fs::absolute(request.input_dir.value_or(output_dir));
  Run run(input_dir, output_dir);
  json seeds = {{"master", config.master_seed}};
  CommandResult result;
  const auto start = std::chrono::steady_clock::now();
  const std::string started_at = utc_timestamp();

  CommandRequest recorded = request;
  if (request.command == "gen-data") {
    result.summary = gen_data(run, config, seeds);
  } else if (request.command == "train") {
    result.summary = train(run, config, require_model(request), seeds);
  } else if (request.command == "sweep") {
    result.summary = run_sweep(run, config, seeds);
  } else if (request.command == "calibrate") {
    result.summary = calibrate(run, config, require_model(request));
  } else if (request.command == "eval") {
    result.summary = evaluate(run, config, seeds);
  } else {
    result.summary = verify(run, config, seeds, result.exit_code);
  }
  if (request.command != "train" && request.command != "calibrate") recorded.model.reset();

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json outputs = json::object();
  for (const auto& a : run.outputs()) outputs[a.name] = a.hash;
  json manifest = {{"command", recorded.command},
                   {"model", recorded.model ? json(*recorded.model) : json(nullptr)},
                   {"version", GRAYBOX_VERSION},
                   {"config", to_json(config)},
                   {"seeds", seeds},
                   {"input_dir", input_dir.string()},
                   {"inputs", run.inputs()},
                   {"outputs", outputs},
                   {"exit_code", result.exit_code},
                   {"started_at", started_at},
                   {"wall_clock_seconds", wall}};
  result.manifest = output_dir / manifest_name(recorded);
  write_file(result.manifest, dump(manifest));
  result.outputs = run.outputs();
  return result;
}

RerunReport rerun_from_manifest(const fs::path& manifest_path, const fs::path& output_dir) {
  const json manifest = json::parse(read_file(manifest_path), nullptr, false);
  if (manifest.is_discarded() || !manifest.is_object() || !manifest.contains("config")) {
    throw ConfigError(manifest_path.string() + " is not a graybox manifest");
  }
  RunConfig config = config_from_json(manifest.at("config"));
  CommandRequest request;
  request.command = manifest.at("command").get<std::string>();
  if (!manifest.at("model").is_null()) request.model = manifest.at("model").get<std::string>();
  request.input_dir = manifest.at("input_dir").get<std::string>();
  for (const auto& [name, hash] : manifest.at("inputs").items()) {
    const fs::path p = *request.input_dir / name;
    if (!fs::exists(p) || file_hash(p) != hash.get<std::string>()) {
      throw ConfigError("input " + p.string() + " no longer matches the manifest");
    }
  }
  RerunReport report;
  report.result = run_command(request, config, output_dir);
  std::map<std::string, std::string> fresh;
  for (const auto& a : report.result.outputs) fresh[a.name] = a.hash;
  for (const auto& [name, hash] : manifest.at("outputs").items()) {
    const bool same = fresh.contains(name) && fresh[name] == hash.get<std::string>();
    report.identical.emplace_back(name, same);
    report.all_identical = report.all_identical && same;
  }
  return report;
}

std::vector<EstimatorCheck> verify_estimator(const VerifyConfig& config, std::uint64_t seed) {
  std::vector<EstimatorCheck> out;
  const double n = static_cast<double>(config.n_shots);
  const double repeats = static_cast<double>(config.repeats);
  for (std::size_t i = 0; i < config.sigmas.size(); ++i) {
    EstimatorCheck c;
    c.sigma0 = config.sigmas[i];
    c.mu0 = config.mu0;
    // Standardised normal draws, so the hidden ensemble has exactly mean mu0
    // and population standard deviation sigma0.
    Rng rng = make_rng(seed, "verify-hidden", i);
    std::vector<double> z = standard_normal(rng, config.ensemble_size);
    double zm = 0.0;
    for (double v : z) zm += v;
    zm /= static_cast<double>(z.size());
    double zs = 0.0;
    for (double v : z) zs += (v - zm) * (v - zm);
    zs = std::sqrt(zs / static_cast<double>(z.size()));
    std::vector<double> hidden(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
      hidden[k] = c.mu0 + c.sigma0 * (z[k] - zm) / zs;
      if (!(hidden[k] >= -1.0 && hidden[k] <= 1.0)) {
        throw ConfigError("verify: hidden ensemble leaves [-1, 1]; reduce sigma0 or move mu0");
      }
    }
    for (double h : hidden) c.hidden_mean += h;
    c.hidden_mean /= static_cast<double>(hidden.size());
    for (double h : hidden) c.hidden_sd += (h - c.hidden_mean) * (h - c.hidden_mean);
    c.hidden_sd = std::sqrt(c.hidden_sd / static_cast<double>(hidden.size()));

    const auto est = resample_finite_shot(hidden, config.n_shots, config.repeats,
                                          derive_seed(seed, "verify-shots", i));
    for (double e : est) c.empirical_mean += e;
    c.empirical_mean /= repeats;
    for (double e : est) c.empirical_variance += (e - c.empirical_mean) * (e - c.empirical_mean);
    c.empirical_variance /= repeats - 1.0;
    c.expected_variance = (1.0 - c.mu0 * c.mu0) / n;
    c.mean_se = std::sqrt(c.expected_variance / repeats);
    c.mean_z = (c.empirical_mean - c.mu0) / c.mean_se;
    c.variance_rel_error = c.empirical_variance / c.expected_variance - 1.0;
    c.mean_ok = std::fabs(c.mean_z) <= config.mean_tolerance_se;
    c.variance_ok = std::fabs(c.variance_rel_error) <= config.variance_tolerance;
    out.push_back(c);
  }
  return out;
}

}  // namespace graybox
