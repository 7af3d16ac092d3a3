// Copyright 2026 The Leakgame Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "leakgame/algebra.h"
#include "leakgame/audits.h"
#include "leakgame/cli.h"
#include "leakgame/dp_solver.h"
#include "leakgame/io.h"
#include "leakgame/measures.h"
#include "leakgame/qif_solver.h"
#include "leakgame/scenarios.h"

namespace py = pybind11;
using namespace leakgame;

namespace {

py::dict ReportDict(const GameSpec& game, const SolveReport& r) {
  py::dict d;
  d["defender_labels"] = r.defender_strategy.labels();
  d["defender_strategy"] = r.defender_strategy.weights();
  d["value"] = r.value;
  d["iterations"] = r.iterations;
  d["certificate_gap"] = r.certificate_gap;
  d["certified"] = r.certified;
  d["attacker_strategy"] = r.attacker_strategy ? py::cast(r.attacker_strategy->weights())
                                               : py::none();
  const auto support = r.defender_strategy.Support();
  d["defender_action"] = support.size() == 1 ? py::cast(game.defender_actions()[support[0]])
                                             : py::none();
  return d;
}

MixedStrategy Strategy(const Labels& labels, const std::vector<double>& weights) {
  return Distribution::Create(labels, weights);
}

}  // namespace

PYBIND11_MODULE(_leakgame, m) {
  m.doc() = "Solvers for zero-sum information-leakage games.";

  static py::exception<Error> error_type(m, "LeakgameError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string msg = std::string("[") + ErrorCodeName(e.code()) + "] " + e.what();
      PyErr_SetString(error_type.ptr(), msg.c_str());
    } catch (const ParseError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<Channel>(m, "Channel")
      .def(py::init(&Channel::FromRows), py::arg("inputs"), py::arg("outputs"), py::arg("rows"))
      .def_property_readonly("inputs", &Channel::inputs)
      .def_property_readonly("outputs", &Channel::outputs)
      .def_property_readonly("matrix", &Channel::matrix)
      .def("rows", &Channel::Rows)
      .def("__repr__", [](const Channel& c) {
        std::ostringstream s;
        s << "Channel(" << c.num_inputs() << "x" << c.num_outputs() << ")";
        return s.str();
      });

  py::class_<GameSpec>(m, "GameSpec")
      .def_property_readonly("defender_actions", &GameSpec::defender_actions)
      .def_property_readonly("attacker_actions", &GameSpec::attacker_actions)
      .def_property_readonly("inputs", &GameSpec::inputs)
      .def_property_readonly("outputs", &GameSpec::outputs)
      .def_property_readonly("is_qif", &GameSpec::is_qif)
      .def("channel", &GameSpec::channel, py::arg("d"), py::arg("a"),
           py::return_value_policy::copy)
      .def("to_json", [](const GameSpec& g) { return CanonicalDump(GameToJson(g)); })
      .def_static("from_json",
                  [](const std::string& text) { return GameFromJson(Json::parse(text)); });

  m.def("hidden_choice",
        [](const std::vector<double>& w, const std::vector<Channel>& cs) {
          Labels labels;
          for (std::size_t i = 0; i < w.size(); ++i) labels.push_back(std::to_string(i));
          return HiddenChoice(Strategy(labels, w), cs);
        },
        py::arg("weights"), py::arg("channels"));
  m.def("visible_choice",
        [](const std::vector<double>& w, const std::vector<Channel>& cs) {
          Labels labels;
          for (std::size_t i = 0; i < w.size(); ++i) labels.push_back(std::to_string(i));
          return VisibleChoice(Strategy(labels, w), cs);
        },
        py::arg("weights"), py::arg("channels"));
  m.def("cascade", &Cascade, py::arg("first"), py::arg("second"));

  m.def("bayes_posterior",
        [](const std::vector<double>& prior, const Channel& c) {
          return BayesPosterior(Distribution::Create(c.inputs(), prior), c);
        },
        py::arg("prior"), py::arg("channel"));
  m.def("posterior_vulnerability",
        [](const std::vector<double>& prior, const Channel& c,
           const std::optional<Eigen::MatrixXd>& gain) {
          const GainFunction g = !gain ? GainFunction::Bayes(c.inputs()) : [&] {
            Labels guesses;
            for (Eigen::Index w = 0; w < gain->rows(); ++w) guesses.push_back(std::to_string(w));
            return GainFunction::Create(guesses, c.inputs(), *gain);
          }();
          return PosteriorVulnerability(g, Distribution::Create(c.inputs(), prior), c);
        },
        py::arg("prior"), py::arg("channel"), py::arg("gain") = py::none());
  m.def("dp_level",
        [](const Channel& c,
           const std::optional<std::vector<std::pair<std::string, std::string>>>& pairs) {
          const AdjacencyRelation adj =
              !pairs ? AdjacencyRelation::AllPairs() : AdjacencyRelation::Explicit(*pairs);
          return DpLevelOf(c, adj).value();
        },
        py::arg("channel"), py::arg("pairs") = py::none(),
        "Level in nats (inf if not conforming); all-pairs adjacency unless pairs are given.");
  m.def("randomized_response", &RandomizedResponse, py::arg("eps"), py::arg("domain"));

  m.def("build_two_millionaires", &BuildTwoMillionaires);
  m.def("build_binary_sum", &BuildBinarySum);
  m.def("build_dp_example", &BuildDpExample);
  m.def("build_compas_game",
        [](double eps_strong, double eps_weak) {
          return BuildLdpGame(CompasTables(), eps_strong, eps_weak);
        },
        py::arg("eps_strong") = 0.1, py::arg("eps_weak") = 2.0);
  m.def("build_crowds",
        [](const std::string& config_json) {
          return BuildCrowds(CrowdsConfigFromJson(Json::parse(config_json)));
        },
        py::arg("config_json"));

  m.def("solve_qif",
        [](const GameSpec& g, double tolerance, std::int64_t max_iter) {
          QifSolverOptions o;
          o.tolerance = tolerance;
          o.max_iter = max_iter;
          std::optional<SolveReport> r;
          {
            py::gil_scoped_release release;
            r = SolveQif(g, o);
          }
          return ReportDict(g, *r);
        },
        py::arg("game"), py::arg("tolerance") = QifSolverOptions{}.tolerance,
        py::arg("max_iter") = QifSolverOptions{}.max_iter);
  m.def("solve_dp_hidden",
        [](const GameSpec& g, double tolerance, std::int64_t max_iter) {
          DpSolverOptions o;
          o.tolerance = tolerance;
          o.max_iter = max_iter;
          return ReportDict(g, SolveDpHidden(g, o));
        },
        py::arg("game"), py::arg("tolerance") = DpSolverOptions{}.tolerance,
        py::arg("max_iter") = DpSolverOptions{}.max_iter);
  m.def("solve_dp_visible", [](const GameSpec& g) { return ReportDict(g, SolveDpVisible(g)); },
        py::arg("game"));

  m.def("brute_force_qif",
        [](const GameSpec& g, double step) {
          const GridOptimum o = BruteForceQif(g, step);
          return py::make_tuple(o.delta, o.value, o.slack);
        },
        py::arg("game"), py::arg("grid_step"));
  m.def("brute_force_dp_hidden",
        [](const GameSpec& g, double step) {
          const GridOptimum o = BruteForceDpHidden(g, step);
          return py::make_tuple(o.delta, o.value, o.slack);
        },
        py::arg("game"), py::arg("grid_step"));
  m.def("vnm_independence_witness",
        [](double d) {
          const VnmWitness w = VnmIndependenceWitness(d);
          py::dict r;
          r["qif"] = py::make_tuple(w.qif_c1, w.qif_c2, w.qif_mix1, w.qif_mix2);
          r["dp"] = py::make_tuple(w.dp_c1, w.dp_c2, w.dp_mix1, w.dp_mix2);
          r["qif_reversal"] = w.qif_reversal;
          r["dp_reversal"] = w.dp_reversal;
          return r;
        },
        py::arg("d"));

  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::ostringstream out, err;
          const int code = RunCli(args, out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command line in-process; returns (exit_code, stdout, stderr).");
}
