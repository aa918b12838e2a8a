// Copyright 2026 The dyndec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <chrono>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dyndec/scenarios.h"

namespace {

void warn_if_large(const dyndec::ScenarioConfig& c) {
  if (c.chain.L > dyndec::kWarnChainLength) {
    const double mib = 16.0 * static_cast<double>(dyndec::hilbert_dim(c.chain.L)) *
                       static_cast<double>(dyndec::hilbert_dim(c.chain.L)) / (1024.0 * 1024.0);
    std::cerr << "warning: L = " << c.chain.L << " needs about " << mib
              << " MiB per dense operator and O(8^L) work per propagator\n";
  }
}

int run_one(const dyndec::ScenarioConfig& c) {
  warn_if_large(c);
  const auto start = std::chrono::steady_clock::now();
  const auto result = dyndec::run(c);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << c.name << " (" << secs << " s)\n";
  for (const auto& f : result.files) std::cout << "  " << f << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact simulation of spin-1/2 chains under bang-bang dynamical decoupling"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> run_out;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario described by a config file");
  run_cmd->add_option("config", config_path, "Path to a key = value config file")->required();
  run_cmd->add_option("--out", run_out, "Output directory (overrides `output`)");

  std::string preset_name;
  std::optional<double> tau;
  std::optional<int> length;
  std::optional<double> total_time;
  std::string preset_out = ".";
  auto* preset_cmd = app.add_subcommand("preset", "Run a built-in scenario");
  preset_cmd->add_option("name", preset_name, "Preset name (see `dyndec list`)")->required();
  preset_cmd->add_option("--tau", tau, "Leading pulse interval in 1/J; other intervals keep their ratios");
  preset_cmd->add_option("--L", length, "Chain length")->check(CLI::Range(2, dyndec::kMaxChainLength));
  preset_cmd->add_option("--total-time", total_time, "Total evolution time in 1/J");
  preset_cmd->add_option("--out", preset_out, "Output directory");

  auto* list_cmd = app.add_subcommand("list", "List built-in presets");
  auto* verify_cmd = app.add_subcommand("verify", "Check the sign tables and average-Hamiltonian identities");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      auto c = dyndec::load_config(config_path);
      if (run_out) c.output_dir = *run_out;
      return run_one(c);
    }
    if (*preset_cmd) {
      const auto preset = dyndec::find_preset(preset_name);
      auto runs = preset.runs;
      if (tau) {
        runs.resize(1);
        runs[0].sequence = dyndec::rescale_sequence(*runs[0].sequence, *tau);
        std::ostringstream name;
        name << preset.name << "_tau" << *tau;
        runs[0].name = name.str();
      }
      for (auto& c : runs) {
        if (length) {
          c.chain.L = *length;
          c.chain.epsilon.assign(*length, 0.0);
          if (c.target) {
            c.target->chain.L = *length;
            c.target->chain.epsilon.assign(*length, 0.0);
          }
        }
        if (total_time) c.total_time = *total_time;
        c.output_dir = preset_out;
        run_one(c);
      }
      return 0;
    }
    if (*list_cmd) {
      for (const auto& p : dyndec::list_presets()) {
        std::cout << p.name << "\n  " << p.description << "\n";
        for (const auto& c : p.runs) {
          std::cout << "    " << c.name << ": L=" << c.chain.L << " J=" << c.chain.J << " delta=" << c.chain.delta
                    << " alpha=" << c.chain.alpha;
          if (c.sequence) {
            const auto s = dyndec::make_sequence(*c.sequence, c.chain.L);
            std::cout << " " << dyndec::describe_sequence(*c.sequence) << " T_c=" << s.cycle_time()
                      << " pulses=" << s.size();
          }
          if (c.target) {
            if (c.target->kind == dyndec::TargetSpec::Kind::kAverage) {
              std::cout << " target=average";
            } else {
              std::cout << " target=" << c.target->scale << "*H(delta=" << c.target->chain.delta
                        << ", alpha=" << c.target->chain.alpha << ")";
            }
          }
          if (c.disorder_width > 0) std::cout << " disorder=+-" << c.disorder_width << " seed=" << c.seed;
          std::cout << " total_time=" << c.total_time << " sampling=" << dyndec::sampling_name(c.sampling) << "\n";
        }
      }
      return 0;
    }
    if (*verify_cmd) {
      int failures = 0;
      for (const auto& r : dyndec::run_verification()) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << "\n";
        failures += r.passed ? 0 : 1;
      }
      std::cout << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed") << "\n";
      return failures == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "dyndec: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
