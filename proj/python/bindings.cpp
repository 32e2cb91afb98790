// Copyright 2026 The qmetro Authors
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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qmetro/bounds.hpp"
#include "qmetro/commands.hpp"
#include "qmetro/error.hpp"
#include "qmetro/fisher.hpp"
#include "qmetro/scenario.hpp"

namespace py = pybind11;
using namespace qmetro;

PYBIND11_MODULE(_qmetro, m) {
    m.doc() = "Multiparameter quantum Fisher information and entanglement bounds.";

    static PyObject *error = py::exception<Error>(m, "Error", PyExc_RuntimeError).release().ptr();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const Error &e) {
            std::string message = std::string(error_code_name(e.code())) + ": " + e.what();
            PyErr_SetString(error, message.c_str());
        }
    });

    m.def(
        "verify",
        [](const std::string &scenario) {
            auto result = run_verify(parse_scenario_text(scenario));
            return py::make_tuple(result.report.dump(), result.passed);
        },
        py::arg("scenario"), "Verify report (JSON text) and pass flag for a scenario given as JSON text.");

    m.def(
        "qfi",
        [](const std::string &scenario) {
            auto state = build_state(parse_scenario_text(scenario));
            return RMatrix(qfi_matrix(state, build_generators(state.basis())));
        },
        py::arg("scenario"));

    m.def(
        "montecarlo",
        [](const std::string &scenario, std::uint64_t mu, std::uint64_t records, std::uint64_t seed) {
            auto result = run_montecarlo(parse_scenario_text(scenario), mu, records, seed);
            return py::make_tuple(montecarlo_json(result).dump(), result.passed, RMatrix(result.run.estimates));
        },
        py::arg("scenario"), py::arg("mu") = 10000, py::arg("records") = 200, py::arg("seed") = 0);

    m.def(
        "gain_factor",
        [](int particles, int modes, int me, int pe) {
            auto g = gain_factor(particles, modes, me, pe);
            return py::make_tuple(g.s_max, g.gain);
        },
        py::arg("particles"), py::arg("modes"), py::arg("me"), py::arg("pe"));

    m.def(
        "gain_table", [](int particles, int modes) { return gain_table(particles, modes).dump(); },
        py::arg("particles"), py::arg("modes"));

    m.def(
        "shot_noise_rank", [](const RMatrix &fq, const RMatrix &fsn) { return shot_noise_rank(fq, fsn); },
        py::arg("fq"), py::arg("fsn"));

    m.def(
        "weak_qcrb", [](const RVector &n, const RMatrix &f) { return weak_qcrb(n, f); }, py::arg("n"),
        py::arg("F"));
}
