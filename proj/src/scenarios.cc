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

#include "dyndec/scenarios.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace dyndec {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) throw DomainError("config: '" + key + "' needs a number, got '" + value + "'");
  return v;
}

long parse_long(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  if (v != std::floor(v)) throw DomainError("config: '" + key + "' needs an integer, got '" + value + "'");
  return static_cast<long>(v);
}

void set_length(ScenarioConfig& c, int L) {
  c.chain.L = L;
  c.chain.epsilon.assign(L, 0.0);
  if (c.target) {
    c.target->chain.L = L;
    c.target->chain.epsilon.assign(L, 0.0);
  }
}

ScenarioConfig base_config(const std::string& name, const std::string& description, ChainParams chain,
                           SequenceSpec sequence, double total_time) {
  ScenarioConfig c;
  c.name = name;
  c.description = description;
  c.chain = std::move(chain);
  c.sequence = sequence;
  c.total_time = total_time;
  return c;
}

TargetSpec chain_target(int L, double delta, double alpha, double scale) {
  return TargetSpec{TargetSpec::Kind::kChain, ChainParams::clean(L, delta, alpha), scale};
}

std::string tag(double tau) { return "_tau" + fmt(tau); }

// Disorder draw, unit rescaling and validation, in that order.
ScenarioConfig prepared(const ScenarioConfig& config) {
  ScenarioConfig c = config;
  apply_disorder(c);
  normalize_units(c);
  c.validate();
  return c;
}

}  // namespace

void ScenarioConfig::validate() const {
  chain.validate();
  if (chain.L > kMaxChainLength) {
    throw DomainError("L = " + std::to_string(chain.L) + " exceeds the supported maximum of " +
                      std::to_string(kMaxChainLength));
  }
  if (!(total_time > 0.0) || !std::isfinite(total_time)) throw DomainError("total_time must be positive");
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (!magnetization && !fidelity) throw DomainError("no observable requested");
  if (magnetization && chain.L % 2 != 0) throw DomainError("magnetization needs an even chain length");
  if (fidelity && !target) throw DomainError("fidelity needs a target Hamiltonian");
  if (disorder_width < 0.0) throw DomainError("disorder_width must be non-negative");
  if (target) {
    if (target->kind == TargetSpec::Kind::kAverage && !sequence) {
      throw DomainError("target = average needs a pulse sequence");
    }
    if (target->kind == TargetSpec::Kind::kChain) {
      target->chain.validate();
      if (target->chain.L != chain.L) throw DomainError("target chain length differs from the system");
    }
  }
  if (sequence) make_sequence(*sequence, chain.L);
}

void normalize_units(ScenarioConfig& c) {
  const double J = c.chain.J;
  if (!(J > 0.0)) throw DomainError("coupling J must be positive");
  if (J == 1.0) return;
  c.input_J = J;
  for (auto& e : c.chain.epsilon) e /= J;
  c.disorder_center /= J;
  c.disorder_width /= J;
  c.chain.J = 1.0;
  // Target couplings are already expressed in units of the system's J.
}

void apply_disorder(ScenarioConfig& c) {
  if (c.disorder_width > 0.0 || c.disorder_center != 0.0) {
    c.chain.epsilon = random_splittings(c.chain.L, c.disorder_center, c.disorder_width, c.seed);
  }
}

double leading_interval(const SequenceSpec& spec) {
  return std::visit(
      [](const auto& s) -> double {
        if constexpr (requires { s.tau; }) {
          return s.tau;
        } else {
          return s.tau1;
        }
      },
      spec);
}

SequenceSpec rescale_sequence(const SequenceSpec& spec, double tau) {
  if (!(tau > 0.0)) throw DomainError("tau must be positive");
  const double f = tau / leading_interval(spec);
  return std::visit(
      [&](auto s) -> SequenceSpec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ZTwoPulse>) {
          s.tau1 = tau;
          s.tau2 *= f;
        } else if constexpr (std::is_same_v<T, FourPulseGapless>) {
          s.tau1 = tau;
          s.tau2 *= f;
          s.tau3 *= f;
        } else if constexpr (std::is_same_v<T, FluidToDimer>) {
          s.tau1 = tau;
          s.tau_a *= f;
        } else {
          s.tau = tau;
        }
        return s;
      },
      spec);
}

std::string describe_sequence(const SequenceSpec& spec) {
  std::ostringstream out;
  out << sequence_name(spec) << "(";
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ZTwoPulse>) {
          out << "tau1=" << fmt(s.tau1) << ", tau2=" << fmt(s.tau2);
        } else if constexpr (std::is_same_v<T, FourPulseGapless>) {
          out << "tau1=" << fmt(s.tau1) << ", tau2=" << fmt(s.tau2) << ", tau3=" << fmt(s.tau3);
        } else if constexpr (std::is_same_v<T, FluidToDimer>) {
          out << "tau1=" << fmt(s.tau1) << ", tau_a=" << fmt(s.tau_a);
        } else {
          out << "tau=" << fmt(s.tau);
        }
      },
      spec);
  out << ")";
  return out.str();
}

std::vector<Preset> list_presets() {
  std::vector<Preset> presets;
  const int L = 10;

  {
    Preset p{"fig1", "NNN removal: eight-pulse sequence on H_NN + H_NNN (delta = 1/2) against H_NN / 2", {}};
    for (double tau : {0.025, 0.05, 0.1}) {
      auto c = base_config("fig1" + tag(tau), p.description, ChainParams::clean(L, 0.5, 1.0), EightPulse{tau}, 15.0);
      c.target = chain_target(L, 0.5, 0.0, 0.5);
      c.magnetization = true;
      c.fidelity = false;
      p.runs.push_back(c);
    }
    presets.push_back(p);
  }
  {
    Preset p{"fig2-left",
             "gapless to gapped: two z pulses on H_NN (delta = 1/2) against H_NN / 4 with delta_w = 2", {}};
    for (auto [t1, t2] : {std::pair{0.1, 0.06}, std::pair{0.2, 0.12}, std::pair{0.4, 0.24}}) {
      auto c = base_config("fig2-left" + tag(t1), p.description, ChainParams::clean(L, 0.5, 0.0), ZTwoPulse{t1, t2},
                           15.0);
      c.target = chain_target(L, 2.0, 0.0, 0.25);
      p.runs.push_back(c);
    }
    presets.push_back(p);
  }
  {
    Preset p{"fig2-right",
             "spin fluid to dimer: four pulses on H_NN + 0.1 H_NNN (delta = 1) against (H_NN + 0.64 H_NNN) / 6.4", {}};
    for (double t1 : {0.05, 0.1, 0.2}) {
      auto c = base_config("fig2-right" + tag(t1), p.description, ChainParams::clean(L, 1.0, 0.1),
                           FluidToDimer::for_target(t1, 0.1, 0.64), 15.0);
      c.target = chain_target(L, 1.0, 0.64, 1.0 / 6.4);
      p.runs.push_back(c);
    }
    presets.push_back(p);
  }
  {
    Preset p{"fig3-left", "propagator fidelity of the eight-pulse sequence against H_NN / 2 (delta = 1/2)", {}};
    for (double tau : {0.025, 0.05, 0.075, 0.1}) {
      auto c = base_config("fig3-left" + tag(tau), p.description, ChainParams::clean(L, 0.5, 1.0), EightPulse{tau}, 10.0);
      c.target = chain_target(L, 0.5, 0.0, 0.5);
      c.magnetization = false;
      c.fidelity = true;
      c.sampling = Sampling::kPerPulse;
      p.runs.push_back(c);
    }
    presets.push_back(p);
  }
  {
    Preset p{"fig3-middle", "propagator fidelity of the two z pulses against H_NN / 4 with delta_w = 2", {}};
    for (auto [t1, t2] : {std::pair{0.1, 0.06}, std::pair{0.2, 0.12}, std::pair{0.3, 0.18}, std::pair{0.4, 0.24}}) {
      auto c = base_config("fig3-middle" + tag(t1), p.description, ChainParams::clean(L, 0.5, 0.0), ZTwoPulse{t1, t2},
                           10.0);
      c.target = chain_target(L, 2.0, 0.0, 0.25);
      c.magnetization = false;
      c.fidelity = true;
      c.sampling = Sampling::kPerPulse;
      p.runs.push_back(c);
    }
    presets.push_back(p);
  }
  {
    Preset p{"fig3-right", "propagator fidelity of the fluid-to-dimer sequence against (H_NN + 0.64 H_NNN) / 6.4", {}};
    for (double t1 : {0.025, 0.05, 0.075, 0.1}) {
      auto c = base_config("fig3-right" + tag(t1), p.description, ChainParams::clean(L, 1.0, 0.1),
                           FluidToDimer::for_target(t1, 0.1, 0.64), 10.0);
      c.target = chain_target(L, 1.0, 0.64, 1.0 / 6.4);
      c.magnetization = false;
      c.fidelity = true;
      c.sampling = Sampling::kPerCycle;
      p.runs.push_back(c);
    }
    presets.push_back(p);
  }
  {
    // delta (t1 + t3 - 2 t2) = 0.0075 < t1 - t3 = 0.015
    Preset p{"gapped-to-gapless",
             "four pulses with intervals t1, t2, t3, t2 on a gapped H_NN (delta = 3/2), effective delta_w = 1/2", {}};
    const FourPulseGapless s{0.03, 0.02, 0.015};
    const double Tc = s.tau1 + 2 * s.tau2 + s.tau3;
    const double flipflop = (s.tau1 - s.tau3) / Tc;
    const double ising = 1.5 * (s.tau1 + s.tau3 - 2 * s.tau2) / Tc;
    auto c = base_config("gapped-to-gapless", p.description, ChainParams::clean(L, 1.5, 0.0), s, 10.0);
    c.target = chain_target(L, ising / flipflop, 0.0, flipflop);
    c.fidelity = true;
    p.runs.push_back(c);
    presets.push_back(p);
  }
  {
    Preset p{"xy-recovery", "four pulses with t1 + t3 = 2 t2 on H_NN (delta = 2): the Ising term averages out", {}};
    const FourPulseGapless s{0.025, 0.02, 0.015};
    const double Tc = s.tau1 + 2 * s.tau2 + s.tau3;
    auto c = base_config("xy-recovery", p.description, ChainParams::clean(L, 2.0, 0.0), s, 10.0);
    c.target = chain_target(L, 0.0, 0.0, (s.tau1 - s.tau3) / Tc);
    c.fidelity = true;
    p.runs.push_back(c);
    presets.push_back(p);
  }
  {
    Preset p{"disorder-removal", "global pi-x pulses on a disordered H_z + H_NN (delta = 1/2) against the clean H_NN", {}};
    auto c = base_config("disorder-removal", p.description, ChainParams::clean(L, 0.5, 0.0), GlobalPiX{0.025}, 15.0);
    c.disorder_center = 0.0;
    c.disorder_width = 0.5;
    c.seed = 7;
    c.target = chain_target(L, 0.5, 0.0, 1.0);
    c.fidelity = true;
    p.runs.push_back(c);
    presets.push_back(p);
  }
  {
    Preset p{"nnn-flipflop-removal",
             "pi-z pulses on sites 1, 2 (mod 4) on H_NN + 0.5 H_NNN (delta = 1) against its own average Hamiltonian", {}};
    auto c = base_config("nnn-flipflop-removal", p.description, ChainParams::clean(L, 1.0, 0.5), ZNNNFlipFlop{0.025},
                         10.0);
    c.target = TargetSpec{TargetSpec::Kind::kAverage, {}, 1.0};
    c.fidelity = true;
    p.runs.push_back(c);
    presets.push_back(p);
  }
  {
    Preset p{"fig3", "all three propagator-fidelity panels", {}};
    for (const auto& panel : presets) {
      if (panel.name.rfind("fig3-", 0) == 0) p.runs.insert(p.runs.end(), panel.runs.begin(), panel.runs.end());
    }
    presets.push_back(p);
  }
  return presets;
}

Preset find_preset(const std::string& name) {
  for (auto& p : list_presets()) {
    if (p.name == name) return p;
  }
  throw DomainError("unknown preset '" + name + "' (see `dyndec list`)");
}

ScenarioConfig parse_config(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DomainError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  std::map<std::string, std::string> kv;
  for (const auto& [k, v] : entries) {
    if (kv.count(k)) throw DomainError("config: duplicate key '" + k + "'");
    kv[k] = v;
  }
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto take_double = [&](const std::string& key) -> std::optional<double> {
    if (auto v = take(key)) return parse_double(key, *v);
    return std::nullopt;
  };

  ScenarioConfig c;
  c.target.reset();
  c.sequence.reset();
  if (auto preset = take("preset")) c = find_preset(*preset).runs.front();
  if (auto v = take("name")) c.name = *v;
  if (auto v = take("description")) c.description = *v;

  if (auto v = take("L")) set_length(c, static_cast<int>(parse_long("L", *v)));
  if (auto v = take_double("J")) c.chain.J = *v;
  if (auto v = take_double("delta")) c.chain.delta = *v;
  if (auto v = take_double("alpha")) c.chain.alpha = *v;
  if (auto v = take("epsilon")) {
    std::vector<double> eps;
    for (const auto& item : split_list(*v)) eps.push_back(parse_double("epsilon", item));
    if (eps.size() == 1) eps.assign(c.chain.L, eps.front());
    c.chain.epsilon = eps;
  }
  if (auto v = take_double("disorder_center")) c.disorder_center = *v;
  if (auto v = take_double("disorder_width")) c.disorder_width = *v;
  if (auto v = take("seed")) c.seed = static_cast<std::uint64_t>(parse_long("seed", *v));

  const auto tau = take_double("tau");
  const auto tau1 = take_double("tau1");
  const auto tau2 = take_double("tau2");
  const auto tau3 = take_double("tau3");
  const auto tau_a = take_double("tau_a");
  const auto alpha_w = take_double("alpha_w");
  if (auto v = take("sequence")) {
    const std::string s = *v;
    const double t = tau.value_or(0.025);
    if (s == "none") {
      c.sequence.reset();
    } else if (s == "global_pi_x") {
      c.sequence = GlobalPiX{t};
    } else if (s == "eight_pulse") {
      c.sequence = EightPulse{t};
    } else if (s == "four_pulse") {
      c.sequence = FourPulse{t};
    } else if (s == "z_nnn_flipflop") {
      c.sequence = ZNNNFlipFlop{t};
    } else if (s == "z_two_pulse") {
      c.sequence = ZTwoPulse{};
    } else if (s == "four_pulse_gapless") {
      c.sequence = FourPulseGapless{};
    } else if (s == "fluid_to_dimer") {
      c.sequence = FluidToDimer{};  // tau_a filled in below
    } else {
      throw DomainError("config: unknown sequence '" + s + "'");
    }
  }
  if (c.sequence) {
    if (tau) c.sequence = rescale_sequence(*c.sequence, *tau);
    std::visit(
        [&](auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, ZTwoPulse>) {
            if (tau1) s.tau1 = *tau1;
            if (tau2) s.tau2 = *tau2;
          } else if constexpr (std::is_same_v<T, FourPulseGapless>) {
            if (tau1) s.tau1 = *tau1;
            if (tau2) s.tau2 = *tau2;
            if (tau3) s.tau3 = *tau3;
          } else if constexpr (std::is_same_v<T, FluidToDimer>) {
            if (tau1) s.tau1 = *tau1;
            if (tau_a) s.tau_a = *tau_a;
            if (alpha_w || s.tau_a == 0.0) s = FluidToDimer::for_target(s.tau1, c.chain.alpha, alpha_w.value_or(0.64));
          }
        },
        *c.sequence);
  }

  if (auto v = take("target")) {
    if (*v == "none") {
      c.target.reset();
    } else if (*v == "average") {
      c.target = TargetSpec{TargetSpec::Kind::kAverage, {}, 1.0};
    } else if (*v == "chain") {
      if (!c.target || c.target->kind != TargetSpec::Kind::kChain) {
        c.target = TargetSpec{TargetSpec::Kind::kChain, ChainParams::clean(c.chain.L, c.chain.delta, 0.0), 1.0};
      }
    } else {
      throw DomainError("config: unknown target '" + *v + "'");
    }
  }
  const auto target_delta = take_double("target_delta");
  const auto target_alpha = take_double("target_alpha");
  const auto target_scale = take_double("target_scale");
  if (target_delta || target_alpha || target_scale) {
    if (!c.target) c.target = TargetSpec{TargetSpec::Kind::kChain, ChainParams::clean(c.chain.L, c.chain.delta), 1.0};
    if (c.target->kind != TargetSpec::Kind::kChain) throw DomainError("config: target_* keys need target = chain");
    if (target_delta) c.target->chain.delta = *target_delta;
    if (target_alpha) c.target->chain.alpha = *target_alpha;
    if (target_scale) c.target->scale = *target_scale;
  }

  if (auto v = take_double("total_time")) c.total_time = *v;
  if (auto v = take_double("dt")) c.dt = *v;
  if (auto v = take("sampling")) c.sampling = parse_sampling(*v);
  if (auto v = take("observables")) {
    c.magnetization = false;
    c.fidelity = false;
    for (const auto& o : split_list(*v)) {
      if (o == "magnetization") {
        c.magnetization = true;
      } else if (o == "fidelity") {
        c.fidelity = true;
      } else {
        throw DomainError("config: unknown observable '" + o + "'");
      }
    }
  }
  if (auto v = take("output")) c.output_dir = *v;

  if (!kv.empty()) throw DomainError("config: unknown key '" + kv.begin()->first + "'");
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  return parse_config(in);
}

ComplexMatrix target_hamiltonian(const ScenarioConfig& config, const ComplexMatrix& H0) {
  if (!config.target) throw DomainError("scenario has no target");
  if (config.target->kind == TargetSpec::Kind::kAverage) {
    return average_hamiltonian_0(H0, make_sequence(*config.sequence, config.chain.L));
  }
  return config.target->scale * build_hamiltonian(config.target->chain);
}

ComparisonSeries magnetization_series(const ScenarioConfig& config) {
  const ScenarioConfig c = prepared(config);
  const int L = c.chain.L;
  const ComplexMatrix H0 = build_hamiltonian(c.chain);
  const PropagatorCache free(H0);
  const StateVector psi0 = domain_wall_state(L);
  std::optional<EigenDecomposition> target;
  if (c.target) target = eigh(target_hamiltonian(c, H0));

  ComparisonSeries out{TimeSeries("pulsed", c.sampling), TimeSeries("ideal", c.sampling),
                       TimeSeries("free", c.sampling)};
  auto record_reference = [&](double t) {
    if (target) out.ideal.push(t, local_magnetization(evolve_state(*target, psi0, t), L));
    out.free.push(t, local_magnetization(evolve_state(free.decomposition(), psi0, t), L));
  };

  if (c.sequence) {
    const PulseSchedule schedule = make_sequence(*c.sequence, L);
    const long n_cycles = static_cast<long>(std::floor(c.total_time / schedule.cycle_time() + 1e-9));
    evolve_pulsed(free, schedule, psi0, n_cycles, c.sampling, [&](const StateSnapshot& s) {
      out.pulsed.push(s.t, local_magnetization(s.psi, L));
      record_reference(s.t);
    });
  } else {
    const long steps = static_cast<long>(std::floor(c.total_time / c.dt + 1e-9));
    for (long k = 0; k <= steps; ++k) record_reference(static_cast<double>(k) * c.dt);
  }
  return out;
}

ComparisonSeries fidelity_series(const ScenarioConfig& config) {
  const ScenarioConfig c = prepared(config);
  if (!c.target) throw DomainError("fidelity needs a target Hamiltonian");
  const int L = c.chain.L;
  const ComplexMatrix H0 = build_hamiltonian(c.chain);
  const PropagatorCache free(H0);
  const EigenDecomposition target = eigh(target_hamiltonian(c, H0));
  const FreeFidelity unpulsed(target, free.decomposition());

  ComparisonSeries out{TimeSeries("pulsed", c.sampling), TimeSeries("ideal", c.sampling),
                       TimeSeries("free", c.sampling)};
  auto record = [&](double t, std::optional<double> pulsed) {
    if (pulsed) out.pulsed.push(t, *pulsed);
    out.ideal.push(t, 1.0);
    out.free.push(t, unpulsed.at(t));
  };

  if (!c.sequence) {
    const long steps = static_cast<long>(std::floor(c.total_time / c.dt + 1e-9));
    for (long k = 0; k <= steps; ++k) record(static_cast<double>(k) * c.dt, std::nullopt);
    return out;
  }

  const PulseSchedule schedule = make_sequence(*c.sequence, L);
  require_cyclic(schedule, L);
  const double Tc = schedule.cycle_time();
  const long n_cycles = static_cast<long>(std::floor(c.total_time / Tc + 1e-9));
  ComplexMatrix rotated = target.eigenvectors;  // U(t) V_w
  ComplexMatrix tmp(rotated.rows(), rotated.cols());
  record(0.0, propagator_fidelity_rotated(target, rotated, 0.0));

  if (c.sampling == Sampling::kPerCycle) {
    const Unitary U = cycle_propagator(free, schedule);
    for (long n = 1; n <= n_cycles; ++n) {
      tmp.noalias() = U * rotated;
      rotated.swap(tmp);
      const double t = static_cast<double>(n) * Tc;
      record(t, propagator_fidelity_rotated(target, rotated, t));
    }
    return out;
  }
  for (long n = 0; n < n_cycles; ++n) {
    for (std::size_t k = 0; k < schedule.size(); ++k) {
      const auto& seg = schedule.segments[k];
      tmp.noalias() = *free.get(seg.tau) * rotated;
      rotated.swap(tmp);
      apply_pulse(seg.pulse, rotated);
      const double t = k + 1 == schedule.size() ? static_cast<double>(n + 1) * Tc
                                                : static_cast<double>(n) * Tc + schedule.offset(k + 1);
      record(t, propagator_fidelity_rotated(target, rotated, t));
    }
  }
  return out;
}

CycleFidelity::CycleFidelity(std::shared_ptr<const PropagatorCache> free,
                             std::shared_ptr<const EigenDecomposition> target, const PulseSchedule& schedule)
    : free_(std::move(free)),
      target_(std::move(target)),
      cycle_time_(schedule.cycle_time()),
      cycle_(cycle_propagator(*free_, schedule)),
      rotated_(target_->eigenvectors) {
  if (target_->dim() != free_->decomposition().dim()) throw DomainError("CycleFidelity: dimension mismatch");
}

double CycleFidelity::at_cycle(long n) {
  if (n < 0) throw DomainError("CycleFidelity: negative cycle count");
  if (n < n_) {
    n_ = 0;
    rotated_ = target_->eigenvectors;
  }
  const long steps = n - n_;
  if (steps <= 3) {
    for (long k = 0; k < steps; ++k) rotated_ = (cycle_ * rotated_).eval();
  } else {
    rotated_ = (matrix_power(cycle_, steps) * rotated_).eval();
  }
  n_ = n;
  return propagator_fidelity_rotated(*target_, rotated_, static_cast<double>(n) * cycle_time_);
}

double CycleFidelity::at_time(double t) {
  if (t < 0.0) throw DomainError("CycleFidelity: negative time");
  const double x = t / cycle_time_;
  const long n0 = static_cast<long>(std::floor(x + 1e-9));
  const double frac = x - static_cast<double>(n0);
  if (std::abs(frac) <= 1e-9) return at_cycle(n0);
  const double f0 = at_cycle(n0);
  const double f1 = at_cycle(n0 + 1);
  return (1.0 - frac) * f0 + frac * f1;
}

void write_csv(std::ostream& out, const ComparisonSeries& s, bool comparison) {
  if (comparison) {
    out << "t,pulsed,ideal,free\n";
    for (std::size_t i = 0; i < s.pulsed.size(); ++i) {
      out << fmt(s.pulsed.time(i)) << ',' << fmt(s.pulsed.value(i)) << ',' << fmt(s.ideal.value(i)) << ','
          << fmt(s.free.value(i)) << '\n';
    }
    return;
  }
  const TimeSeries& curve = !s.pulsed.empty() ? s.pulsed : s.free;
  out << "t,value\n";
  for (std::size_t i = 0; i < curve.size(); ++i) out << fmt(curve.time(i)) << ',' << fmt(curve.value(i)) << '\n';
}

void write_manifest(std::ostream& out, const ScenarioConfig& config) {
  const ScenarioConfig c = prepared(config);
  const int L = c.chain.L;
  out << "name = " << c.name << '\n';
  if (!c.description.empty()) out << "description = " << c.description << '\n';
  out << "L = " << L << '\n';
  out << "J_input = " << fmt(c.input_J) << '\n';
  out << "J = " << fmt(c.chain.J) << '\n';
  out << "delta = " << fmt(c.chain.delta) << '\n';
  out << "alpha = " << fmt(c.chain.alpha) << '\n';
  std::string eps;
  for (std::size_t i = 0; i < c.chain.epsilon.size(); ++i) eps += (i ? "," : "") + fmt(c.chain.epsilon[i]);
  out << "epsilon = " << eps << '\n';
  out << "disorder_center = " << fmt(c.disorder_center) << '\n';
  out << "disorder_width = " << fmt(c.disorder_width) << '\n';
  out << "seed = " << c.seed << '\n';
  out << "total_time = " << fmt(c.total_time) << '\n';
  out << "sampling = " << sampling_name(c.sampling) << '\n';
  out << "observables = " << (c.magnetization ? "magnetization" : "") << (c.magnetization && c.fidelity ? "," : "")
      << (c.fidelity ? "fidelity" : "") << '\n';
  out << "initial_state = domain_wall\n";
  if (!c.target) {
    out << "target = none\n";
  } else if (c.target->kind == TargetSpec::Kind::kAverage) {
    out << "target = average\n";
  } else {
    out << "target = chain\n";
    out << "target_delta = " << fmt(c.target->chain.delta) << '\n';
    out << "target_alpha = " << fmt(c.target->chain.alpha) << '\n';
    out << "target_scale = " << fmt(c.target->scale) << '\n';
  }
  if (!c.sequence) {
    out << "sequence = none\n";
    return;
  }
  const PulseSchedule schedule = make_sequence(*c.sequence, L);
  out << "sequence = " << describe_sequence(*c.sequence) << '\n';
  out << "cycle_time = " << fmt(schedule.cycle_time()) << '\n';
  out << "pulses_per_cycle = " << schedule.size() << '\n';
  out << "cycles = " << static_cast<long>(std::floor(c.total_time / schedule.cycle_time() + 1e-9)) << '\n';
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const auto& seg = schedule.segments[k];
    std::string sites;
    for (std::size_t i = 0; i < seg.pulse.sites.size(); ++i) sites += (i ? "," : "") + std::to_string(seg.pulse.sites[i]);
    out << "pulse." << k + 1 << " = tau=" << fmt(seg.tau) << " axis=" << axis_char(seg.pulse.axis)
        << " angle=" << fmt(seg.pulse.angle) << " sites=" << sites << '\n';
  }

  const ComplexMatrix hbar = average_hamiltonian_0(build_hamiltonian(c.chain), schedule);
  const CouplingWeights w = coupling_weights(hbar, L);
  for (int n = 1; n <= L; ++n) out << "hbar.field." << n << " = " << fmt(w.field[n - 1]) << '\n';
  auto bonds = [&](const char* prefix, const std::vector<BondWeights>& list) {
    double ff = 0.0;
    double zz = 0.0;
    for (const auto& b : list) {
      const std::string key = std::string("hbar.") + prefix + "." + std::to_string(b.i) + "-" + std::to_string(b.j);
      out << key << ".xx = " << fmt(b.xx) << '\n';
      out << key << ".yy = " << fmt(b.yy) << '\n';
      out << key << ".zz = " << fmt(b.zz) << '\n';
      ff += 0.5 * (b.xx + b.yy);
      zz += b.zz;
    }
    if (!list.empty()) {
      out << "hbar." << prefix << ".flipflop_mean = " << fmt(ff / list.size()) << '\n';
      out << "hbar." << prefix << ".ising_mean = " << fmt(zz / list.size()) << '\n';
    }
  };
  bonds("nn", w.nn);
  bonds("nnn", w.nnn);
}

std::map<std::string, std::string> read_manifest(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    out[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return out;
}

RunResult run(const ScenarioConfig& config) {
  const ScenarioConfig c = prepared(config);
  namespace fs = std::filesystem;
  const fs::path dir(c.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + c.output_dir + "': " + ec.message());

  RunResult result;
  auto open = [&](const std::string& suffix) {
    const fs::path path = dir / (c.name + suffix);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    result.files.push_back(path.string());
    return out;
  };
  const bool comparison = c.sequence.has_value() && c.target.has_value();
  if (c.magnetization) {
    result.magnetization = magnetization_series(config);
    auto out = open("_magnetization.csv");
    write_csv(out, *result.magnetization, comparison);
  }
  if (c.fidelity) {
    result.fidelity = fidelity_series(config);
    auto out = open("_fidelity.csv");
    write_csv(out, *result.fidelity, comparison);
  }
  auto out = open("_manifest.txt");
  write_manifest(out, config);
  return result;
}

std::vector<CheckResult> run_verification() {
  std::vector<CheckResult> results;
  auto check = [&](const std::string& name, double defect, double tol) {
    std::ostringstream detail;
    detail << "defect " << defect << " (tol " << tol << ")";
    results.push_back({name, defect <= tol, detail.str()});
  };
  auto diff = [](const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); };

  // Reference sign tables, one row per coupling class.
  struct Row {
    int range;
    Axis axis;
    BondClass cls;
    std::vector<int> signs;
  };
  const std::vector<Row> eight = {
      {1, Axis::kX, BondClass::kOddStart, {1, 1, 1, 1, 1, 1, -1, -1}},
      {1, Axis::kX, BondClass::kEvenStart, {1, 1, -1, -1, 1, 1, 1, 1}},
      {1, Axis::kY, BondClass::kOddStart, {1, 1, 1, 1, 1, -1, -1, 1}},
      {1, Axis::kY, BondClass::kEvenStart, {1, -1, -1, 1, 1, 1, 1, 1}},
      {1, Axis::kZ, BondClass::kOddStart, {1, 1, 1, 1, 1, -1, 1, -1}},
      {1, Axis::kZ, BondClass::kEvenStart, {1, -1, 1, -1, 1, 1, 1, 1}},
      {2, Axis::kX, BondClass::kAll, {1, 1, -1, -1, 1, 1, -1, -1}},
      {2, Axis::kY, BondClass::kAll, {1, -1, -1, 1, 1, -1, -1, 1}},
      {2, Axis::kZ, BondClass::kAll, {1, -1, 1, -1, 1, -1, 1, -1}},
  };
  const std::vector<Row> four = {
      {1, Axis::kX, BondClass::kAll, {1, -1, -1, 1}}, {1, Axis::kY, BondClass::kAll, {1, 1, -1, -1}},
      {1, Axis::kZ, BondClass::kAll, {1, -1, 1, -1}}, {2, Axis::kX, BondClass::kAll, {1, 1, 1, 1}},
      {2, Axis::kY, BondClass::kAll, {1, 1, 1, 1}},   {2, Axis::kZ, BondClass::kAll, {1, 1, 1, 1}},
  };
  auto table = [&](const std::string& name, const SequenceSpec& spec, const std::vector<Row>& rows) {
    for (int L : {8, 10, 12}) {
      const SignProfile profile = coupling_sign_profile(make_sequence(spec, L), L);
      int mismatches = 0;
      for (const auto& r : rows) {
        if (profile.signs(r.range, r.axis, r.cls) != r.signs) ++mismatches;
      }
      check(name + " L=" + std::to_string(L), mismatches, 0);
    }
  };
  table("sign table, eight-pulse", EightPulse{0.1}, eight);
  table("sign table, four-pulse", FourPulse{0.1}, four);

  for (int L : {4, 6, 8}) {
    const std::string at = " L=" + std::to_string(L);
    ChainParams p = ChainParams::clean(L, 0.5, 1.0);
    const ComplexMatrix nn = nn_term(p);
    const ComplexMatrix nnn = nnn_term(p);
    const auto eps = random_splittings(L, 0.0, 1.0, 11);

    check("H_z + H_NN -> H_NN, global pi-x" + at,
          diff(average_hamiltonian_0(zeeman_term(eps) + nn, make_sequence(GlobalPiX{0.05}, L)), nn), 1e-12);
    check("H_NN + H_NNN -> H_NN / 2, eight-pulse" + at,
          diff(average_hamiltonian_0(nn + nnn, make_sequence(EightPulse{0.05}, L)), 0.5 * nn), 1e-12);
    check("H_NN + H_NNN -> H_NNN, four-pulse" + at,
          diff(average_hamiltonian_0(nn + nnn, make_sequence(FourPulse{0.05}, L)), nnn), 1e-12);
    {
      const ZTwoPulse s{0.1, 0.06};
      const double Tc = s.tau1 + s.tau2;
      check("z two-pulse flip-flop scaling" + at,
            diff(average_hamiltonian_0(nn, make_sequence(s, L)), exchange_term(L, 1, (s.tau1 - s.tau2) / Tc, 0.5)),
            1e-12);
    }
    {
      const double alpha = 0.1;
      const FluidToDimer s = FluidToDimer::for_target(0.05, alpha, 0.64);
      const double Tc = s.tau1 + 3 * s.tau_a;
      const ComplexMatrix expected = ((s.tau1 - s.tau_a) / Tc) * nn + alpha * nnn;
      check("fluid-to-dimer NN scaling" + at,
            diff(average_hamiltonian_0(nn + alpha * nnn, make_sequence(s, L)), expected), 1e-12);
    }
    {
      const double delta = 2.0;
      const FourPulseGapless s{0.03, 0.02, 0.015};
      const double Tc = s.tau1 + 2 * s.tau2 + s.tau3;
      const ComplexMatrix H = exchange_term(L, 1, 1.0, delta);
      const ComplexMatrix expected =
          exchange_term(L, 1, (s.tau1 - s.tau3) / Tc, delta * (s.tau1 + s.tau3 - 2 * s.tau2) / Tc);
      check("gapped-to-gapless interval weights" + at, diff(average_hamiltonian_0(H, make_sequence(s, L)), expected),
            1e-12);
    }
  }

  for (const auto& preset : list_presets()) {
    for (const auto& run : preset.runs) {
      const PulseSchedule s = make_sequence(*run.sequence, run.chain.L);
      check("cyclicity " + run.name, cyclicity(s, run.chain.L).defect, 1e-12);
    }
  }
  return results;
}

}  // namespace dyndec
