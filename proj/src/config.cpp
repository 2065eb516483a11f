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

#include "graybox/config.hpp"

#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "graybox/error.hpp"
#include "graybox/rng.hpp"

namespace graybox {
namespace {

using nlohmann::json;

// Walks one JSON object, remembering which keys were consumed so that
// anything left over can be reported as unknown.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  void read(const char* key, double& out) {
    if (const json* v = take(key)) {
      if (!v->is_number()) throw ConfigError(where(key) + ": expected a number");
      out = v->get<double>();
    }
  }
  void read(const char* key, std::size_t& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_unsigned()) throw ConfigError(where(key) + ": expected a non-negative integer");
      out = v->get<std::size_t>();
    }
  }
  void read(const char* key, std::string& out) {
    if (const json* v = take(key)) {
      if (!v->is_string()) throw ConfigError(where(key) + ": expected a string");
      out = v->get<std::string>();
    }
  }
  void read(const char* key, std::vector<double>& out) {
    if (const json* v = take(key)) {
      if (!v->is_array()) throw ConfigError(where(key) + ": expected an array of numbers");
      out.clear();
      for (const auto& x : *v) {
        if (!x.is_number()) throw ConfigError(where(key) + ": expected an array of numbers");
        out.push_back(x.get<double>());
      }
    }
  }
  void read(const char* key, std::optional<std::uint64_t>& out) {
    if (const json* v = take(key)) {
      if (v->is_null()) {
        out.reset();
        return;
      }
      std::uint64_t value = 0;
      read_value(key, *v, value);
      out = value;
    }
  }
  void read_u64(const char* key, std::uint64_t& out) {
    if (const json* v = take(key)) read_value(key, *v, out);
  }

  template <typename F>
  void child(const char* key, F&& f) {
    if (const json* v = take(key)) {
      Reader r(*v, where(key));
      f(r);
      r.finish();
    }
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.contains(key)) throw ConfigError("unknown configuration key '" + where(key.c_str()) + "'");
    }
  }

 private:
  const json* take(const char* key) {
    seen_.insert(key);
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }
  void read_value(const char* key, const json& v, std::uint64_t& out) const {
    if (!v.is_number_unsigned()) throw ConfigError(where(key) + ": expected a non-negative integer");
    out = v.get<std::uint64_t>();
  }
  std::string where(const char* key = nullptr) const {
    std::string p = path_;
    if (key != nullptr) p += (p.empty() ? "" : ".") + std::string(key);
    return p.empty() ? "<root>" : p;
  }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

json optimizer_json(const AdamWConfig& c) {
  return {{"init_lr", c.schedule.init_lr},       {"peak_lr", c.schedule.peak_lr},
          {"end_lr", c.schedule.end_lr},         {"warmup_steps", c.schedule.warmup_steps},
          {"decay_steps", c.schedule.decay_steps}, {"beta1", c.beta1},
          {"beta2", c.beta2},                    {"eps", c.eps},
          {"weight_decay", c.weight_decay}};
}

void read_optimizer(Reader& r, AdamWConfig& c) {
  r.read("init_lr", c.schedule.init_lr);
  r.read("peak_lr", c.schedule.peak_lr);
  r.read("end_lr", c.schedule.end_lr);
  r.read("warmup_steps", c.schedule.warmup_steps);
  r.read("decay_steps", c.schedule.decay_steps);
  r.read("beta1", c.beta1);
  r.read("beta2", c.beta2);
  r.read("eps", c.eps);
  r.read("weight_decay", c.weight_decay);
}

json calibration_json(const CalibrationConfig& c) {
  return {{"iterations", c.iterations},
          {"theta0", c.theta0},
          {"n_shots", c.n_shots},
          {"gradient", to_string(c.gradient)},
          {"fd_step", c.fd_step},
          {"optimizer", optimizer_json(c.optimizer)}};
}

void read_calibration(Reader& r, CalibrationConfig& c) {
  r.read("iterations", c.iterations);
  r.read("theta0", c.theta0);
  r.read("n_shots", c.n_shots);
  std::string method = to_string(c.gradient);
  r.read("gradient", method);
  if (method == "central-difference") {
    c.gradient = WhiteboxGradient::CentralDifference;
  } else if (method == "tangent") {
    c.gradient = WhiteboxGradient::Tangent;
  } else {
    throw ConfigError("gradient must be 'central-difference' or 'tangent', got '" + method + "'");
  }
  r.read("fd_step", c.fd_step);
  r.child("optimizer", [&](Reader& o) { read_optimizer(o, c.optimizer); });
}

}  // namespace

json to_json(const RunConfig& c) {
  const DeviceConfig& d = c.device;
  const PsdSpec& p = d.psd;
  return {
      {"master_seed", c.master_seed},
      {"output_dir", c.output_dir},
      {"device",
       {{"qubit_frequency", d.qubit_frequency},
        {"drive_frequency", d.drive_frequency},
        {"drive_strength", d.drive_strength},
        {"detuning", d.detuning},
        {"noise_strength", d.noise_strength},
        {"duration", d.duration},
        {"sample_time", d.sample_time},
        {"trotter_steps", d.trotter_steps},
        {"max_amplitude", d.max_amplitude}}},
      {"noise",
       {{"pink_amplitude", p.pink_amplitude},
        {"pink_offset", p.pink_offset},
        {"peak_amplitude", p.peak_amplitude},
        {"peak_center", p.peak_center},
        {"peak_width", p.peak_width},
        {"f_max", p.f_max},
        {"n_freq", p.n_freq}}},
      {"dataset",
       {{"m", c.dataset.m},
        {"n_shots", c.dataset.n_shots},
        {"trajectories", c.dataset.trajectories},
        {"train_frac", c.dataset.train_frac},
        {"split_seed", c.dataset.split_seed ? json(*c.dataset.split_seed) : json(nullptr)}}},
      {"training",
       {{"sgm",
         {{"epochs", c.sgm.epochs},
          {"batch_size", c.sgm.batch_size},
          {"optimizer", optimizer_json(c.sgm.optimizer)}}},
        {"pgm",
         {{"epochs", c.pgm.epochs},
          {"batch_size", c.pgm.batch_size},
          {"prior_variance", c.pgm.prior_variance},
          {"init_scale", c.pgm.init_scale},
          {"optimizer", optimizer_json(c.pgm.optimizer)}}}}},
      {"calibration",
       {{"sgm", calibration_json(c.calibrate_sgm)}, {"pgm", calibration_json(c.calibrate_pgm)}}},
      {"sweep",
       {{"lo", c.sweep.lo},
        {"hi", c.sweep.hi},
        {"count", c.sweep.count},
        {"n_shots", c.sweep.n_shots},
        {"n_repeats", c.sweep.n_repeats},
        {"trajectories", c.sweep.trajectories}}},
      {"evaluation",
       {{"n_shots", c.evaluation.n_shots},
        {"n_repeats", c.evaluation.n_repeats},
        {"trajectories", c.evaluation.trajectories}}},
      {"verify",
       {{"mu0", c.verify.mu0},
        {"n_shots", c.verify.n_shots},
        {"repeats", c.verify.repeats},
        {"ensemble_size", c.verify.ensemble_size},
        {"sigmas", c.verify.sigmas},
        {"mean_tolerance_se", c.verify.mean_tolerance_se},
        {"variance_tolerance", c.verify.variance_tolerance}}},
  };
}

RunConfig config_from_json(const json& doc) {
  RunConfig c;
  Reader root(doc, "");
  root.read_u64("master_seed", c.master_seed);
  root.read("output_dir", c.output_dir);
  root.child("device", [&](Reader& r) {
    DeviceConfig& d = c.device;
    r.read("qubit_frequency", d.qubit_frequency);
    r.read("drive_frequency", d.drive_frequency);
    r.read("drive_strength", d.drive_strength);
    r.read("detuning", d.detuning);
    r.read("noise_strength", d.noise_strength);
    r.read("duration", d.duration);
    r.read("sample_time", d.sample_time);
    r.read("trotter_steps", d.trotter_steps);
    r.read("max_amplitude", d.max_amplitude);
  });
  root.child("noise", [&](Reader& r) {
    PsdSpec& p = c.device.psd;
    r.read("pink_amplitude", p.pink_amplitude);
    r.read("pink_offset", p.pink_offset);
    r.read("peak_amplitude", p.peak_amplitude);
    r.read("peak_center", p.peak_center);
    r.read("peak_width", p.peak_width);
    r.read("f_max", p.f_max);
    r.read("n_freq", p.n_freq);
  });
  root.child("dataset", [&](Reader& r) {
    r.read("m", c.dataset.m);
    r.read("n_shots", c.dataset.n_shots);
    r.read("trajectories", c.dataset.trajectories);
    r.read("train_frac", c.dataset.train_frac);
    r.read("split_seed", c.dataset.split_seed);
  });
  root.child("training", [&](Reader& t) {
    t.child("sgm", [&](Reader& r) {
      r.read("epochs", c.sgm.epochs);
      r.read("batch_size", c.sgm.batch_size);
      r.child("optimizer", [&](Reader& o) { read_optimizer(o, c.sgm.optimizer); });
    });
    t.child("pgm", [&](Reader& r) {
      r.read("epochs", c.pgm.epochs);
      r.read("batch_size", c.pgm.batch_size);
      r.read("prior_variance", c.pgm.prior_variance);
      r.read("init_scale", c.pgm.init_scale);
      r.child("optimizer", [&](Reader& o) { read_optimizer(o, c.pgm.optimizer); });
    });
  });
  root.child("calibration", [&](Reader& t) {
    t.child("sgm", [&](Reader& r) { read_calibration(r, c.calibrate_sgm); });
    t.child("pgm", [&](Reader& r) { read_calibration(r, c.calibrate_pgm); });
  });
  root.child("sweep", [&](Reader& r) {
    r.read("lo", c.sweep.lo);
    r.read("hi", c.sweep.hi);
    r.read("count", c.sweep.count);
    r.read("n_shots", c.sweep.n_shots);
    r.read("n_repeats", c.sweep.n_repeats);
    r.read("trajectories", c.sweep.trajectories);
  });
  root.child("evaluation", [&](Reader& r) {
    r.read("n_shots", c.evaluation.n_shots);
    r.read("n_repeats", c.evaluation.n_repeats);
    r.read("trajectories", c.evaluation.trajectories);
  });
  root.child("verify", [&](Reader& r) {
    r.read("mu0", c.verify.mu0);
    r.read("n_shots", c.verify.n_shots);
    r.read("repeats", c.verify.repeats);
    r.read("ensemble_size", c.verify.ensemble_size);
    r.read("sigmas", c.verify.sigmas);
    r.read("mean_tolerance_se", c.verify.mean_tolerance_se);
    r.read("variance_tolerance", c.verify.variance_tolerance);
  });
  root.finish();
  return c;
}

void RunConfig::validate() const {
  try {
    device.validate();
    sgm.validate();
    pgm.validate();
    calibrate_sgm.validate();
    calibrate_pgm.validate();
    sweep.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  if (dataset.m < 1) throw ConfigError("dataset.m must be >= 1");
  if (dataset.n_shots < 1) throw ConfigError("dataset.n_shots must be positive");
  if (dataset.trajectories < 1) throw ConfigError("dataset.trajectories must be >= 1");
  if (!(dataset.train_frac > 0.0 && dataset.train_frac < 1.0)) {
    throw ConfigError("dataset.train_frac must lie in (0, 1)");
  }
  if (evaluation.n_shots < 1 || evaluation.n_repeats < 1 || evaluation.trajectories < 1) {
    throw ConfigError("evaluation: n_shots, n_repeats and trajectories must be positive");
  }
  if (!(verify.mu0 >= -1.0 && verify.mu0 <= 1.0)) throw ConfigError("verify.mu0 must lie in [-1, 1]");
  if (verify.n_shots < 1 || verify.repeats < 2 || verify.ensemble_size < 2) {
    throw ConfigError("verify: n_shots >= 1, repeats >= 2 and ensemble_size >= 2 required");
  }
  for (double s : verify.sigmas) {
    if (!(s >= 0.0)) throw ConfigError("verify.sigmas must be non-negative");
  }
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

std::uint64_t RunConfig::seed_for(const std::string& purpose) const {
  return derive_seed(master_seed, purpose, 0);
}

std::uint64_t RunConfig::split_seed() const {
  return dataset.split_seed ? *dataset.split_seed : seed_for("split");
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' must look like key.path=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json* node = &doc;
  std::stringstream parts(path);
  std::string key;
  while (std::getline(parts, key, '.')) {
    if (!node->is_object() || !node->contains(key)) {
      throw ConfigError("unknown configuration key '" + path + "'");
    }
    node = &(*node)[key];
  }
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  *node = value;
}

RunConfig load_config(const std::optional<std::filesystem::path>& path,
                      const std::vector<std::string>& overrides) {
  json doc = to_json(RunConfig{});
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("cannot open config file " + path->string());
    json file = json::parse(in, nullptr, false);
    if (file.is_discarded()) throw ConfigError("config file " + path->string() + " is not valid JSON");
    // Validate the file on its own first so unknown keys are reported by their own path.
    doc = to_json(config_from_json(file));
  }
  for (const auto& o : overrides) apply_override(doc, o);
  RunConfig config = config_from_json(doc);
  config.validate();
  return config;
}

}  // namespace graybox
