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

#ifndef DYNDEC_SCENARIOS_H
#define DYNDEC_SCENARIOS_H

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dyndec/control.h"
#include "dyndec/model.h"
#include "dyndec/observables.h"

namespace dyndec {

// Largest chain the runner accepts; above kWarnChainLength it prints a
// memory/time warning (one D x D matrix is 16 * 4^L bytes).
inline constexpr int kMaxChainLength = 14;
inline constexpr int kWarnChainLength = 12;

/// The wanted evolution: either scale * H(chain) or the zeroth-order
/// average Hamiltonian of the scenario's own schedule.
struct TargetSpec {
  enum class Kind { kChain, kAverage };
  Kind kind = Kind::kChain;
  ChainParams chain;
  double scale = 1.0;
};

struct ScenarioConfig {
  std::string name = "custom";
  std::string description;
  ChainParams chain = ChainParams::clean(10, 0.5);
  // Random splittings drawn into chain.epsilon when width > 0.
  double disorder_center = 0.0;
  double disorder_width = 0.0;
  std::uint64_t seed = 0;
  double input_J = 1.0;  // J as given before rescaling to 1

  std::optional<SequenceSpec> sequence;
  std::optional<TargetSpec> target;
  double total_time = 15.0;
  double dt = 0.05;  // sample spacing of unpulsed runs
  Sampling sampling = Sampling::kPerCycle;
  bool magnetization = true;
  bool fidelity = false;
  std::string output_dir = ".";

  /// Throws DomainError on an inconsistent configuration.
  void validate() const;
};

/// Divides every energy by J and sets J = 1, so times are in units of 1/J.
void normalize_units(ScenarioConfig& config);

/// Draws the disorder, if any, into chain.epsilon.
void apply_disorder(ScenarioConfig& config);

/// Parses `key = value` lines; see README for the grammar.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::string& path);

struct Preset {
  std::string name;
  std::string description;
  std::vector<ScenarioConfig> runs;
};

std::vector<Preset> list_presets();
/// Throws DomainError for an unknown name.
Preset find_preset(const std::string& name);

/// Sets the leading interval of `spec` to `tau` and scales the others by
/// the same factor, keeping every interval ratio.
SequenceSpec rescale_sequence(const SequenceSpec& spec, double tau);
double leading_interval(const SequenceSpec& spec);

ComplexMatrix target_hamiltonian(const ScenarioConfig& config, const ComplexMatrix& H0);

struct ComparisonSeries {
  TimeSeries pulsed;
  TimeSeries ideal;
  TimeSeries free;
};

/// M(t) under the schedule, the target and the free Hamiltonian, starting
/// from the domain wall.
ComparisonSeries magnetization_series(const ScenarioConfig& config);
/// F_u(t) of the pulsed and the free propagators against the target.
ComparisonSeries fidelity_series(const ScenarioConfig& config);

/// F_u at whole cycles for one schedule, stepping and squaring the cycle
/// propagator as needed.
class CycleFidelity {
 public:
  CycleFidelity(std::shared_ptr<const PropagatorCache> free, std::shared_ptr<const EigenDecomposition> target,
                const PulseSchedule& schedule);

  double cycle_time() const { return cycle_time_; }
  /// F_u(n T_c); cheapest for non-decreasing n.
  double at_cycle(long n);
  /// Linear interpolation between the cycle boundaries around t.
  double at_time(double t);

 private:
  std::shared_ptr<const PropagatorCache> free_;
  std::shared_ptr<const EigenDecomposition> target_;
  double cycle_time_;
  Unitary cycle_;
  long n_ = 0;
  ComplexMatrix rotated_;  // U(T_c)^n V_w
};

struct RunResult {
  std::vector<std::string> files;
  std::optional<ComparisonSeries> magnetization;
  std::optional<ComparisonSeries> fidelity;
};

/// Runs one scenario and writes CSV files plus a manifest into output_dir.
RunResult run(const ScenarioConfig& config);

/// CSV with header `t,value` or `t,pulsed,ideal,free`, 15 significant digits.
void write_csv(std::ostream& out, const ComparisonSeries& series, bool comparison);

void write_manifest(std::ostream& out, const ScenarioConfig& config);

/// Manifest lines as key -> value.
std::map<std::string, std::string> read_manifest(std::istream& in);

std::string describe_sequence(const SequenceSpec& spec);

/// Result of one built-in self check.
struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Sign tables and average-Hamiltonian identities at small L.
std::vector<CheckResult> run_verification();

}  // namespace dyndec

#endif  // DYNDEC_SCENARIOS_H
