// tools/eftw_rbm.cc

// Copyright 2026  The eftw-rbm Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// eftw-rbm: corpus synthesis, training, detection, evaluation and the
// gradient self-check.
//
//   eftw-rbm synth --out corpus --snr -5,0,5 --noise white
//   eftw-rbm train --corpus corpus --out run
//   eftw-rbm detect --corpus corpus --model run/model.bin --out spp
//   eftw-rbm eval --out report
//   eftw-rbm gradcheck --tolerance 1e-6

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eftw/app.h"
#include "eftw/errors.h"

namespace {

using eftw::app::RunConfig;

// Flag values are collected as strings and applied through set_key after
// the config file, so that flags win and every value is parsed one way.
struct Overrides {
  std::string config_path;
  std::map<std::string, std::string> values;
  std::vector<std::string> pairs;
};

void add_common(CLI::App *cmd, Overrides *o) {
  cmd->add_option("--config", o->config_path, "key=value configuration file");
  for (const auto &[flag, key, help] :
       std::vector<std::tuple<std::string, std::string, std::string>>{
           {"--seed", "seed", "random seed"},
           {"--snr", "snr", "comma-separated SNR list in dB"},
           {"--noise", "noise", "comma-separated list of white, pink, babble"},
           {"--epochs", "epochs", "training epochs"},
           {"--beta", "beta", "non-negativity barrier coefficient"},
           {"--hidden", "hidden", "hidden units K"},
           {"--factors", "factors", "factors F"},
           {"--context", "context", "retained context frames n_t"},
           {"--out", "out", "output directory"},
           {"--corpus", "corpus", "corpus directory written by synth"},
           {"--model", "model", "model file"},
           {"--context-mode", "context_mode", "enhanced or sliding"},
           {"--tolerance", "tolerance", "gradcheck relative tolerance"},
           {"--inject-fault", "inject_fault",
            "gradcheck fixture: negate this block's analytic gradient"},
       }) {
    cmd->add_option_function<std::string>(
        flag, [o, key = key](const std::string &v) { o->values[key] = v; },
        help);
  }
  cmd->add_option("--set", o->pairs, "any configuration key as key=value");
}

int run(const std::string &name, const Overrides &o) {
  RunConfig config;
  try {
    if (!o.config_path.empty()) eftw::app::load_config(o.config_path, &config);
    for (const std::string &p : o.pairs) {
      const auto eq = p.find('=');
      if (eq == std::string::npos)
        throw eftw::ConfigError("--set expects key=value, got '" + p + "'");
      eftw::app::set_key(&config, p.substr(0, eq), p.substr(eq + 1));
    }
    for (const auto &[key, value] : o.values)
      eftw::app::set_key(&config, key, value);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return eftw::app::kExitConfig;
  }
  eftw::app::write_config(std::cout, config);
  if (name == "synth") return eftw::app::cmd_synth(config, std::cout);
  if (name == "train") return eftw::app::cmd_train(config, std::cout);
  if (name == "detect") return eftw::app::cmd_detect(config, std::cout);
  if (name == "eval") return eftw::app::cmd_eval(config, std::cout);
  return eftw::app::cmd_gradcheck(config, std::cout);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Speech presence estimation with factored three-way RBMs"};
  app.require_subcommand(1);
  std::map<std::string, Overrides> overrides;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"synth", "write a synthetic corpus (WAVs, labels, manifests)"},
      {"train", "train a model on a corpus's training split"},
      {"detect", "SPP matrices and detection curves for the test split"},
      {"eval", "benchmark tables over noise kinds and SNRs"},
      {"gradcheck", "finite-difference check of the energy gradients"},
  };
  for (const auto &[name, help] : commands)
    add_common(app.add_subcommand(name, help), &overrides[name]);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : eftw::app::kExitConfig;
  }
  for (const auto &[name, help] : commands)
    if (app.got_subcommand(name)) return run(name, overrides[name]);
  return eftw::app::kExitConfig;
}
