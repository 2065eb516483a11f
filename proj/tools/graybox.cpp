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

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "graybox/error.hpp"
#include "graybox/parallel.hpp"
#include "graybox/pipeline.hpp"

namespace {

namespace fs = std::filesystem;
using namespace graybox;

struct Options {
  std::optional<fs::path> config;
  std::vector<std::string> overrides;
  std::optional<fs::path> output_dir;
  std::size_t threads = 0;
  std::string model;
  fs::path manifest;
};

int report(const CommandResult& result) {
  std::cout << result.summary << "\n";
  for (const auto& a : result.outputs) std::cout << "  wrote " << a.name << "  " << a.hash << "\n";
  std::cout << "  manifest " << result.manifest.string() << "\n";
  return result.exit_code;
}

int run(const std::string& command, const Options& opt) {
  if (command == "rerun") {
    // The manifest carries the whole config; only the destination may change.
    if (!opt.output_dir) throw ConfigError("rerun needs --output-dir");
    const RerunReport rep = rerun_from_manifest(opt.manifest, *opt.output_dir);
    report(rep.result);
    for (const auto& [name, same] : rep.identical) {
      std::cout << "  " << (same ? "identical " : "DIFFERENT ") << name << "\n";
    }
    if (!rep.all_identical) return kExitVerify;
    return rep.result.exit_code;
  }
  const RunConfig config = load_config(opt.config, opt.overrides);
  if (command == "show-config") {
    std::cout << to_json(config).dump(2) << "\n";
    return kExitOk;
  }
  CommandRequest request;
  request.command = command;
  if (!opt.model.empty()) request.model = opt.model;
  return report(run_command(request, config, resolve_output_dir(config, opt.output_dir)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graybox characterisation and calibration of a simulated noisy qubit"};
  app.set_version_flag("--version", std::string(GRAYBOX_VERSION));
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  std::string config_path;
  app.add_option("-c,--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--set", opt.overrides, "Dotted override, e.g. device.noise_strength=0.05")
      ->take_all();
  app.add_option_function<std::string>(
      "-o,--output-dir", [&](const std::string& d) { opt.output_dir = d; },
      "Artifact directory (overrides GRAYBOX_OUTPUT_DIR and the config)");
  app.add_option("--threads", opt.threads, "Worker thread cap (0 = all cores)");

  app.add_subcommand("gen-data", "Generate the characterisation dataset");
  auto* train = app.add_subcommand("train", "Train a graybox model");
  train->add_option("--model", opt.model, "sgm or pgm")->required()->check(CLI::IsMember({"sgm", "pgm"}));
  app.add_subcommand("sweep", "AGF distributions and JSD over the control grid");
  auto* calibrate = app.add_subcommand("calibrate", "Calibrate the sqrt(X) control with a model");
  calibrate->add_option("--model", opt.model, "sgm or pgm")
      ->required()
      ->check(CLI::IsMember({"sgm", "pgm"}));
  app.add_subcommand("eval", "Evaluate calibrated controls against the device");
  app.add_subcommand("verify-estimator", "Monte Carlo check of the finite-shot estimator laws");
  auto* rerun = app.add_subcommand("rerun", "Replay a manifest and compare artifacts byte for byte");
  rerun->add_option("--manifest", opt.manifest, "Manifest to replay")->required()->check(CLI::ExistingFile);
  app.add_subcommand("show-config", "Print the effective configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  if (!config_path.empty()) opt.config = config_path;
  set_max_threads(opt.threads);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, opt);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << " (" << e.snapshot().size()
              << " values in snapshot)\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
