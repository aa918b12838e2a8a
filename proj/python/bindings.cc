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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "dyndec/control.h"
#include "dyndec/evolve.h"
#include "dyndec/model.h"
#include "dyndec/observables.h"
#include "dyndec/scenarios.h"

namespace py = pybind11;
using namespace dyndec;

namespace {

py::dict series_dict(const ComparisonSeries& s) {
  py::dict d;
  d["t"] = !s.pulsed.empty() ? s.pulsed.times() : s.free.times();
  d["pulsed"] = s.pulsed.values();
  d["ideal"] = s.ideal.values();
  d["free"] = s.free.values();
  return d;
}

py::dict weights_dict(const CouplingWeights& w) {
  auto bonds = [](const std::vector<BondWeights>& list) {
    py::list out;
    for (const auto& b : list) {
      py::dict d;
      d["i"] = b.i;
      d["j"] = b.j;
      d["xx"] = b.xx;
      d["yy"] = b.yy;
      d["zz"] = b.zz;
      out.append(d);
    }
    return out;
  };
  py::dict d;
  d["field"] = w.field;
  d["nn"] = bonds(w.nn);
  d["nnn"] = bonds(w.nnn);
  return d;
}

}  // namespace

PYBIND11_MODULE(_dyndec, m) {
  m.doc() = "Exact simulation of spin-1/2 chains under bang-bang dynamical decoupling";
  m.attr("__version__") = "0.1.0";

  py::register_exception<UnsupportedError>(m, "UnsupportedError", PyExc_NotImplementedError);
  py::register_exception<CyclicityError>(m, "CyclicityError", PyExc_ValueError);

  py::enum_<Axis>(m, "Axis").value("X", Axis::kX).value("Y", Axis::kY).value("Z", Axis::kZ);
  py::enum_<Sampling>(m, "Sampling").value("PER_CYCLE", Sampling::kPerCycle).value("PER_PULSE", Sampling::kPerPulse);
  py::enum_<BondClass>(m, "BondClass")
      .value("ODD_START", BondClass::kOddStart)
      .value("EVEN_START", BondClass::kEvenStart)
      .value("ALL", BondClass::kAll);

  // model
  py::class_<ChainParams>(m, "ChainParams")
      .def(py::init([](int L, double J, double delta, double alpha, std::vector<double> epsilon) {
             ChainParams p{L, J, delta, alpha, std::move(epsilon)};
             if (p.epsilon.empty()) p.epsilon.assign(std::max(L, 0), 0.0);
             p.validate();
             return p;
           }),
           py::arg("L") = 10, py::arg("J") = 1.0, py::arg("delta") = 0.0, py::arg("alpha") = 0.0,
           py::arg("epsilon") = std::vector<double>{})
      .def_readwrite("L", &ChainParams::L)
      .def_readwrite("J", &ChainParams::J)
      .def_readwrite("delta", &ChainParams::delta)
      .def_readwrite("alpha", &ChainParams::alpha)
      .def_readwrite("epsilon", &ChainParams::epsilon)
      .def("validate", &ChainParams::validate)
      .def("__repr__", [](const ChainParams& p) {
        std::ostringstream s;
        s << "ChainParams(L=" << p.L << ", J=" << p.J << ", delta=" << p.delta << ", alpha=" << p.alpha << ")";
        return s.str();
      });

  m.def("random_splittings", &random_splittings, py::arg("L"), py::arg("center"), py::arg("width"), py::arg("seed"));
  m.def("spin_operator", &spin_operator, py::arg("axis"), py::arg("site"), py::arg("L"));
  m.def("total_sz", &total_sz, py::arg("L"));
  m.def("zeeman_term", [](const std::vector<double>& eps) { return zeeman_term(eps); }, py::arg("epsilon"));
  m.def("exchange_term", &exchange_term, py::arg("L"), py::arg("range"), py::arg("flipflop"), py::arg("ising"));
  m.def("nn_term", &nn_term, py::arg("params"));
  m.def("nnn_term", &nnn_term, py::arg("params"));
  m.def("build_hamiltonian", &build_hamiltonian, py::arg("params"));
  m.def("coupling_weights", [](const ComplexMatrix& H, int L) { return weights_dict(coupling_weights(H, L)); },
        py::arg("H"), py::arg("L"));

  // evolve
  m.def(
      "eigh",
      [](const ComplexMatrix& H) {
        auto e = eigh(H);
        return py::make_tuple(e.eigenvalues, e.eigenvectors);
      },
      py::arg("H"), "Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.");
  m.def("expm_i", py::overload_cast<const ComplexMatrix&, double>(&expm_i), py::arg("H"), py::arg("t"),
        "exp(-i H t) for Hermitian H.");
  m.def("unitarity_defect", &unitarity_defect, py::arg("U"));

  // control
  py::class_<Pulse>(m, "Pulse")
      .def(py::init([](Axis axis, std::vector<int> sites, double angle) { return Pulse{axis, angle, std::move(sites)}; }),
           py::arg("axis"), py::arg("sites"), py::arg("angle") = kPi)
      .def_readwrite("axis", &Pulse::axis)
      .def_readwrite("angle", &Pulse::angle)
      .def_readwrite("sites", &Pulse::sites);
  py::class_<Segment>(m, "Segment")
      .def(py::init([](double tau, Pulse pulse) { return Segment{tau, std::move(pulse)}; }), py::arg("tau"),
           py::arg("pulse"))
      .def_readwrite("tau", &Segment::tau)
      .def_readwrite("pulse", &Segment::pulse);
  py::class_<PulseSchedule>(m, "PulseSchedule")
      .def(py::init([](std::vector<Segment> segs) { return PulseSchedule{std::move(segs)}; }), py::arg("segments"))
      .def_readwrite("segments", &PulseSchedule::segments)
      .def_property_readonly("cycle_time", &PulseSchedule::cycle_time)
      .def("__len__", &PulseSchedule::size)
      .def("offset", &PulseSchedule::offset, py::arg("k"));

  py::class_<GlobalPiX>(m, "GlobalPiX").def(py::init<double>(), py::arg("tau") = 0.025).def_readwrite("tau", &GlobalPiX::tau);
  py::class_<EightPulse>(m, "EightPulse").def(py::init<double>(), py::arg("tau") = 0.025).def_readwrite("tau", &EightPulse::tau);
  py::class_<FourPulse>(m, "FourPulse").def(py::init<double>(), py::arg("tau") = 0.025).def_readwrite("tau", &FourPulse::tau);
  py::class_<ZTwoPulse>(m, "ZTwoPulse")
      .def(py::init<double, double>(), py::arg("tau1") = 0.1, py::arg("tau2") = 0.06)
      .def_readwrite("tau1", &ZTwoPulse::tau1)
      .def_readwrite("tau2", &ZTwoPulse::tau2);
  py::class_<FourPulseGapless>(m, "FourPulseGapless")
      .def(py::init<double, double, double>(), py::arg("tau1") = 0.03, py::arg("tau2") = 0.02, py::arg("tau3") = 0.015)
      .def_readwrite("tau1", &FourPulseGapless::tau1)
      .def_readwrite("tau2", &FourPulseGapless::tau2)
      .def_readwrite("tau3", &FourPulseGapless::tau3);
  py::class_<FluidToDimer>(m, "FluidToDimer")
      .def(py::init<double, double>(), py::arg("tau1") = 0.05, py::arg("tau_a") = 0.0)
      .def_static("for_target", &FluidToDimer::for_target, py::arg("tau1"), py::arg("alpha"), py::arg("alpha_w"))
      .def_readwrite("tau1", &FluidToDimer::tau1)
      .def_readwrite("tau_a", &FluidToDimer::tau_a);
  py::class_<ZNNNFlipFlop>(m, "ZNNNFlipFlop").def(py::init<double>(), py::arg("tau") = 0.025).def_readwrite("tau", &ZNNNFlipFlop::tau);

  m.def("make_sequence", &make_sequence, py::arg("spec"), py::arg("L"));
  m.def("sequence_name", &sequence_name, py::arg("spec"));
  m.def("pulse_unitary", &pulse_unitary, py::arg("pulse"), py::arg("L"));
  m.def(
      "cyclicity",
      [](const PulseSchedule& s, int L) {
        auto r = cyclicity(s, L);
        return py::make_tuple(r.phase, r.defect);
      },
      py::arg("schedule"), py::arg("L"), "(phase, defect) of the control propagator over one cycle.");
  m.def("toggled_hamiltonian", &toggled_hamiltonian, py::arg("H0"), py::arg("schedule"), py::arg("k"));
  m.def("average_hamiltonian_0", &average_hamiltonian_0, py::arg("H0"), py::arg("schedule"));
  m.def(
      "coupling_sign_profile",
      [](const PulseSchedule& s, int L) {
        py::dict out;
        for (const auto& row : coupling_sign_profile(s, L).rows) {
          out[py::make_tuple(row.range, std::string(1, axis_char(row.axis)), bond_class_name(row.bonds))] = row.signs;
        }
        return out;
      },
      py::arg("schedule"), py::arg("L"), "{(range, axis, bond class): signs per segment}.");
  m.def("cycle_propagator", py::overload_cast<const ComplexMatrix&, const PulseSchedule&>(&cycle_propagator),
        py::arg("H0"), py::arg("schedule"));
  m.def("toggled_frame_propagator", &toggled_frame_propagator, py::arg("H0"), py::arg("schedule"));
  m.def(
      "evolve_pulsed",
      [](const ComplexMatrix& H0, const PulseSchedule& s, const StateVector& psi0, long n_cycles, Sampling sampling) {
        py::list out;
        for (const auto& snap : evolve_pulsed(H0, s, psi0, n_cycles, sampling)) {
          out.append(py::make_tuple(snap.t, snap.psi));
        }
        return out;
      },
      py::arg("H0"), py::arg("schedule"), py::arg("psi0"), py::arg("n_cycles"),
      py::arg("sampling") = Sampling::kPerCycle, "List of (t, state) samples.");
  m.def("matrix_power", &matrix_power, py::arg("U"), py::arg("n"));

  // observables
  m.def("domain_wall_state", &domain_wall_state, py::arg("L"));
  m.def("basis_state", &basis_state, py::arg("L"), py::arg("bits"));
  m.def("local_magnetization", &local_magnetization, py::arg("psi"), py::arg("L"));
  m.def("total_magnetization", &total_magnetization, py::arg("psi"), py::arg("L"));
  m.def("propagator_fidelity", &propagator_fidelity, py::arg("target"), py::arg("actual"));

  // scenarios
  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def_readwrite("name", &ScenarioConfig::name)
      .def_readwrite("description", &ScenarioConfig::description)
      .def_readwrite("chain", &ScenarioConfig::chain)
      .def_readwrite("total_time", &ScenarioConfig::total_time)
      .def_readwrite("sampling", &ScenarioConfig::sampling)
      .def_readwrite("output_dir", &ScenarioConfig::output_dir)
      .def_readwrite("sequence", &ScenarioConfig::sequence)
      .def("validate", &ScenarioConfig::validate);
  m.def(
      "parse_config",
      [](const std::string& text) {
        std::istringstream in(text);
        return parse_config(in);
      },
      py::arg("text"), "Parses `key = value` config text.");
  m.def("load_config", &load_config, py::arg("path"));
  m.def(
      "list_presets",
      [] {
        py::list out;
        for (const auto& p : list_presets()) {
          std::vector<std::string> runs;
          for (const auto& r : p.runs) runs.push_back(r.name);
          out.append(py::make_tuple(p.name, p.description, runs));
        }
        return out;
      },
      "List of (name, description, run names).");
  m.def("preset_runs", [](const std::string& name) { return find_preset(name).runs; }, py::arg("name"));
  m.def("magnetization_series", [](const ScenarioConfig& c) { return series_dict(magnetization_series(c)); },
        py::arg("config"));
  m.def("fidelity_series", [](const ScenarioConfig& c) { return series_dict(fidelity_series(c)); }, py::arg("config"));
  m.def(
      "run",
      [](const ScenarioConfig& c) {
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run(c);
        }
        py::dict out;
        out["files"] = r.files;
        if (r.magnetization) out["magnetization"] = series_dict(*r.magnetization);
        if (r.fidelity) out["fidelity"] = series_dict(*r.fidelity);
        return out;
      },
      py::arg("config"), "Runs a scenario, writes its CSV files and manifest, and returns the series.");
  m.def(
      "verify",
      [] {
        py::list out;
        for (const auto& r : run_verification()) out.append(py::make_tuple(r.name, r.passed, r.detail));
        return out;
      },
      "Built-in checks as (name, passed, detail).");
}
