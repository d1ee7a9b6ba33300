/*
 * Copyright 2026 The pmetric Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Python module exposing models, metrics, formulas and traces.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pmetric/convex_metric.hpp"
#include "pmetric/dist_metric.hpp"
#include "pmetric/errors.hpp"
#include "pmetric/mhml.hpp"
#include "pmetric/state_metric.hpp"
#include "pmetric/trace_metric.hpp"
#include "pmetric/transport.hpp"

namespace py = pybind11;
using namespace pmetric;

namespace {

using Dist = std::map<std::string, double>;

SubDistribution to_dist(const Plts& m, const Dist& d) {
    std::vector<SubDistribution::Entry> entries;
    for (const auto& [name, p] : d) entries.emplace_back(m.state(name), p);
    return SubDistribution(std::move(entries));
}

Dist from_dist(const Plts& m, const SubDistribution& d) {
    Dist out;
    for (const auto& [s, p] : d.entries()) out[m.state_name(s)] = p;
    return out;
}

std::vector<std::vector<double>> matrix(const StateMetric& d) {
    std::vector<std::vector<double>> out(d.size(), std::vector<double>(d.size()));
    for (StateId s = 0; s < d.size(); ++s)
        for (StateId t = 0; t < d.size(); ++t) out[s][t] = d(s, t);
    return out;
}

py::dict fixpoint_dict(const FixpointResult& r) {
    py::dict out;
    out["d"] = matrix(r.metric);
    out["iterations"] = r.iterations;
    out["residual"] = r.residual;
    out["converged"] = r.converged;
    return out;
}

std::vector<std::string> names(const Plts& m, bool states) {
    std::vector<std::string> out;
    const std::size_t n = states ? m.num_states() : m.num_actions();
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(states ? m.state_name(static_cast<StateId>(i)) : m.action_name(static_cast<ActionId>(i)));
    return out;
}

}  // namespace

PYBIND11_MODULE(_pmetric, mod) {
    mod.doc() = "Bisimulation pseudometrics and quantitative modal logics on probabilistic LTSs";

    auto error = py::register_exception<Error>(mod, "Error", PyExc_RuntimeError);
    py::register_exception<ModelError>(mod, "ModelError", error.ptr());
    py::register_exception<FormulaError>(mod, "FormulaError", error.ptr());
    py::register_exception<BudgetExceeded>(mod, "BudgetExceeded", error.ptr());

    py::class_<Plts>(mod, "Model")
        .def_property_readonly("states", [](const Plts& m) { return names(m, true); })
        .def_property_readonly("actions", [](const Plts& m) { return names(m, false); })
        .def("successors",
             [](const Plts& m, const std::string& s, const std::string& a) {
                 std::vector<Dist> out;
                 for (const auto& d : m.successors(m.state(s), m.action(a))) out.push_back(from_dist(m, d));
                 return out;
             })
        .def("to_json", &serialize_model)
        .def("__repr__", [](const Plts& m) {
            return "<Model " + std::to_string(m.num_states()) + " states, " + std::to_string(m.num_actions()) +
                   " actions, " + std::to_string(m.num_transitions()) + " transitions>";
        });

    mod.def("load_model", &load_model, py::arg("path"));
    mod.def("parse_model", [](const std::string& text) { return parse_model(text); }, py::arg("text"));

    mod.def(
        "state_metric", [](const Plts& m, double tol) {
            FixpointOptions opts;
            opts.tol = tol;
            return fixpoint_dict(fixpoint(m, opts));
        },
        py::arg("model"), py::arg("tol") = 1e-9);
    mod.def(
        "convex_metric", [](const Plts& m, double tol) {
            FixpointOptions opts;
            opts.tol = tol;
            return fixpoint_dict(convex_fixpoint(m, opts));
        },
        py::arg("model"), py::arg("tol") = 1e-9);
    mod.def(
        "kleene_iterate", [](const Plts& m, std::size_t k) { return matrix(kleene_iterate(m, k)); },
        py::arg("model"), py::arg("k"));
    mod.def(
        "bisimilarity_classes", [](const Plts& m) {
            std::vector<std::vector<std::string>> out;
            for (const auto& block : bisimilarity_oracle(m).blocks) {
                out.emplace_back();
                for (StateId s : block) out.back().push_back(m.state_name(s));
            }
            return out;
        },
        py::arg("model"));

    mod.def(
        "kantorovich", [](const Plts& m, const Dist& left, const Dist& right) {
            const TransportPlan plan = kantorovich(fixpoint(m).metric, to_dist(m, left), to_dist(m, right));
            py::dict out;
            out["value"] = plan.value;
            out["dual_value"] = plan.dual_value;
            std::vector<std::tuple<std::string, std::string, double>> matching;
            for (const auto& c : plan.matching) matching.emplace_back(m.state_name(c.from), m.state_name(c.to), c.mass);
            out["matching"] = matching;
            return out;
        },
        py::arg("model"), py::arg("left"), py::arg("right"));

    mod.def(
        "dist_metric",
        [](const Plts& m, const Dist& left, const Dist& right, std::size_t depth, bool allow_null_lift) {
            DistMetricOptions opts;
            opts.allow_null_lift = allow_null_lift;
            return dist_fixpoint(m, {{to_dist(m, left), to_dist(m, right)}}, depth, opts).front();
        },
        py::arg("model"), py::arg("left"), py::arg("right"), py::arg("depth"), py::arg("allow_null_lift") = false);

    mod.def(
        "eval_state", [](const Plts& m, const std::string& f, const std::string& s) {
            return eval_state(m, parse_state_formula(f), m.state(s));
        },
        py::arg("model"), py::arg("formula"), py::arg("state"));
    mod.def(
        "eval_dist", [](const Plts& m, const std::string& f, const Dist& d) {
            return eval_dist(m, parse_dist_formula(f), to_dist(m, d));
        },
        py::arg("model"), py::arg("formula"), py::arg("dist"));
    mod.def(
        "eval_dstar", [](const Plts& m, const std::string& f, const Dist& d, bool allow_null_lift) {
            return eval_dstar(m, parse_dstar_formula(f), to_dist(m, d), allow_null_lift);
        },
        py::arg("model"), py::arg("formula"), py::arg("dist"), py::arg("allow_null_lift") = false);
    mod.def(
        "normalize_formula", [](const std::string& f) { return to_string(parse_state_formula(f)); },
        py::arg("formula"));

    mod.def(
        "lower_bound",
        [](const Plts& m, const std::string& s, const std::string& t, std::size_t depth, std::size_t grid) {
            const LowerBound lb = logical_metric_lower_bound(m, m.state(s), m.state(t), {depth, grid});
            return py::make_tuple(lb.value, to_string(lb.witness));
        },
        py::arg("model"), py::arg("s"), py::arg("t"), py::arg("depth") = 3, py::arg("grid") = 20);
    mod.def(
        "distinguish",
        [](const Plts& m, const std::string& s, const std::string& t, std::size_t k, double eps) {
            return to_string(synthesize_distinguishing(m, m.state(s), m.state(t), k, eps));
        },
        py::arg("model"), py::arg("s"), py::arg("t"), py::arg("k"), py::arg("eps") = 0.01);

    mod.def(
        "trace_prob", [](const Plts& m, const std::string& s, const std::string& trace) {
            return trace_prob(m, m.state(s), parse_trace(m, trace));
        },
        py::arg("model"), py::arg("state"), py::arg("trace"));
    mod.def(
        "trace_distance",
        [](const Plts& m, const std::string& s, const std::string& t, std::size_t max_len) {
            const TraceDistance r = trace_distance(m, m.state(s), m.state(t), max_len);
            return py::make_tuple(r.value, format_trace(m, r.witness));
        },
        py::arg("model"), py::arg("s"), py::arg("t"), py::arg("max_len"));
}
