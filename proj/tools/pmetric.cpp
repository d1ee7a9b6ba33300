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

// pmetric: command-line front end. Every subcommand prints one JSON document
// (keys sorted, numbers at 12 significant digits) or, with --format plain,
// one "key = value" line per leaf.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pmetric/convex_metric.hpp"
#include "pmetric/dist_metric.hpp"
#include "pmetric/errors.hpp"
#include "pmetric/formula.hpp"
#include "pmetric/mhml.hpp"
#include "pmetric/plts.hpp"
#include "pmetric/state_metric.hpp"
#include "pmetric/trace_metric.hpp"
#include "pmetric/transport.hpp"

namespace {

using nlohmann::json;
using namespace pmetric;

enum Exit { kOk = 0, kUsage = 1, kModel = 2, kBudget = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double rounded(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

void plain(const json& j, const std::string& path, std::ostream& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) plain(v, path.empty() ? k : path + "." + k, out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) plain(j[i], path + "[" + std::to_string(i) + "]", out);
    } else {
        out << path << " = " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
    }
}

struct Common {
    std::string model_path;
    std::string format = "json";
};

void emit(const Common& c, const json& j) {
    if (c.format == "plain") {
        plain(j, "", std::cout);
    } else {
        std::cout << j.dump(2) << '\n';
    }
}

/// Splits "left,right" at the comma outside any braces.
std::pair<std::string, std::string> split_pair(const std::string& text) {
    int depth = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '{') ++depth;
        if (text[i] == '}') --depth;
        if (text[i] == ',' && depth == 0) return {text.substr(0, i), text.substr(i + 1)};
    }
    throw UsageError("expected a pair 'left,right', got '" + text + "'");
}

StateId state_of(const Plts& m, const std::string& name) {
    if (!m.has_state(name)) throw ModelError("unknown state '" + name + "'");
    return m.state(name);
}

std::vector<std::pair<StateId, StateId>> state_pairs(const Plts& m, const std::vector<std::string>& items) {
    std::vector<std::pair<StateId, StateId>> out;
    if (items.empty()) {
        for (StateId s = 0; s < m.num_states(); ++s) {
            for (StateId t = s + 1; t < m.num_states(); ++t) out.emplace_back(s, t);
        }
        return out;
    }
    for (const auto& item : items) {
        auto [l, r] = split_pair(item);
        out.emplace_back(state_of(m, l), state_of(m, r));
    }
    return out;
}

json metric_report(const Plts& m, const FixpointResult& r, const FixpointOptions& opts,
                   const std::vector<std::pair<StateId, StateId>>& pairs) {
    json j;
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    j["residual"] = rounded(r.residual);
    j["tolerance"] = opts.tol;
    json list = json::array();
    for (auto [s, t] : pairs)
        list.push_back({{"s", m.state_name(s)}, {"t", m.state_name(t)}, {"d", rounded(r.metric(s, t))}});
    j["pairs"] = std::move(list);
    return j;
}

StateMetric load_metric(const Plts& m, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open metric file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ModelError(std::string("metric file syntax error: ") + e.what(), e.byte);
    }
    if (!doc.contains("states") || !doc.contains("d")) throw ModelError("metric file needs \"states\" and \"d\"");
    const auto names = doc["states"].get<std::vector<std::string>>();
    const auto rows = doc["d"].get<std::vector<std::vector<double>>>();
    if (rows.size() != names.size()) throw ModelError("metric table size does not match its state list");
    StateMetric d(m.num_states());
    std::vector<StateId> ids;
    for (const auto& n : names) ids.push_back(state_of(m, n));
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (rows[i].size() != names.size()) throw ModelError("metric table must be square");
        for (std::size_t k = 0; k < names.size(); ++k) {
            if (i != k) d.set(ids[i], ids[k], rows[i][k]);
        }
    }
    if (!d.is_pseudometric(1e-9)) throw ModelError("metric table is not a 1-bounded pseudometric");
    return d;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Behavioural pseudometrics on probabilistic labelled transition systems"};
    app.require_subcommand(1);
    Common common;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("model", common.model_path, "Model file (JSON)")->required();
        sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "plain"}));
    };

    FixpointOptions fix;
    std::vector<std::string> pairs;
    std::size_t depth = 0;
    std::size_t max_len = 0;
    bool allow_null_lift = false;
    std::string logic = "state";
    std::string formula_text;
    std::string at;
    std::string pair;
    double eps = 0.01;
    std::size_t grid = 0;
    std::string metric_path;
    std::string left;
    std::string right;
    std::string trace_text;

    auto* validate = app.add_subcommand("validate", "Check a model file");
    add_common(validate);

    auto* state_metric = app.add_subcommand("state-metric", "State-based bisimilarity metric");
    add_common(state_metric);
    state_metric->add_option("--pairs", pairs, "State pairs s,t (default: all)");
    state_metric->add_option("--tol", fix.tol, "Convergence tolerance")->check(CLI::PositiveNumber);
    state_metric->add_option("--max-iter", fix.max_iter, "Iteration budget (0: 10|S|^2+100)");

    auto* convex_metric = app.add_subcommand("convex-metric", "Convex bisimilarity metric");
    add_common(convex_metric);
    convex_metric->add_option("--pairs", pairs, "State pairs s,t (default: all)");
    convex_metric->add_option("--tol", fix.tol, "Convergence tolerance")->check(CLI::PositiveNumber);
    convex_metric->add_option("--max-iter", fix.max_iter, "Iteration budget (0: 10|S|^2+100)");

    auto* dist_metric = app.add_subcommand("dist-metric", "Distribution-based bisimilarity metric");
    add_common(dist_metric);
    dist_metric->add_option("--pairs", pairs, "Distribution pairs, e.g. {s2:0.5,s3:0.5},t3")->required();
    dist_metric->add_option("--depth", depth, "Approximation depth k")->required();
    dist_metric->add_flag("--allow-null-lift", allow_null_lift, "Let a distribution with no mover step to the empty subdistribution");

    auto* trace_metric = app.add_subcommand("trace-metric", "Trace distance");
    add_common(trace_metric);
    trace_metric->add_option("--pairs", pairs, "State pairs s,t (default: all)");
    trace_metric->add_option("--max-len", max_len, "Longest trace considered")->required();
    trace_metric->add_option("--trace", trace_text, "Also report Pr(s, trace) for every state");

    auto* eval = app.add_subcommand("eval", "Evaluate a formula");
    add_common(eval);
    eval->add_option("--logic", logic, "state, dist or dstar")->check(CLI::IsMember({"state", "dist", "dstar"}));
    eval->add_option("--formula", formula_text, "Formula text")->required();
    eval->add_option("--at", at, "State name or distribution literal")->required();
    eval->add_flag("--allow-null-lift", allow_null_lift, "Null lifted transitions (dstar only)");

    auto* distinguish = app.add_subcommand("distinguish", "Synthesise a distinguishing formula");
    add_common(distinguish);
    distinguish->add_option("--pair", pair, "States s,t")->required();
    distinguish->add_option("--depth", depth, "Iteration depth k")->required();
    distinguish->add_option("--eps", eps, "Slack")->check(CLI::PositiveNumber);
    distinguish->add_option("--grid", grid, "Also enumerate formulas with literals on this grid");

    auto* lift = app.add_subcommand("lift", "Kantorovich lifting of a state metric");
    add_common(lift);
    lift->add_option("--d", metric_path, "Metric file {\"states\":[...],\"d\":[[...]]} (default: the bisimilarity metric)");
    lift->add_option("--left", left, "Distribution literal")->required();
    lift->add_option("--right", right, "Distribution literal")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        const Plts m = load_model(common.model_path);
        json out;
        int code = kOk;

        if (validate->parsed()) {
            out = {{"valid", true},
                   {"states", m.num_states()},
                   {"actions", m.num_actions()},
                   {"transitions", m.num_transitions()},
                   {"deterministic", m.is_deterministic()}};
        } else if (state_metric->parsed() || convex_metric->parsed()) {
            const auto selected = state_pairs(m, pairs);
            const FixpointResult r = state_metric->parsed() ? fixpoint(m, fix) : convex_fixpoint(m, fix);
            out = metric_report(m, r, fix, selected);
            if (!r.converged) code = kBudget;
        } else if (dist_metric->parsed()) {
            DistMetric metric(m, {allow_null_lift, 0});
            json list = json::array();
            for (const auto& item : pairs) {
                auto [l, r] = split_pair(item);
                const SubDistribution a = parse_distribution(m, l);
                const SubDistribution b = parse_distribution(m, r);
                list.push_back({{"left", format_distribution(m, a)},
                                {"right", format_distribution(m, b)},
                                {"d", rounded(metric(a, b, depth))}});
            }
            out = {{"depth", depth}, {"pairs", std::move(list)}, {"nodes", metric.graph().size()},
                   {"allow_null_lift", allow_null_lift}};
        } else if (trace_metric->parsed()) {
            json list = json::array();
            for (auto [s, t] : state_pairs(m, pairs)) {
                const TraceDistance r = trace_distance(m, s, t, max_len);
                list.push_back({{"s", m.state_name(s)}, {"t", m.state_name(t)}, {"d", rounded(r.value)},
                                {"witness", format_trace(m, r.witness)}});
            }
            out = {{"max_len", max_len}, {"pairs", std::move(list)}};
            if (!trace_text.empty()) {
                Trace tr;
                try {
                    tr = parse_trace(m, trace_text);
                } catch (const std::out_of_range& e) {
                    throw ModelError(e.what());
                }
                json probs = json::object();
                for (StateId s = 0; s < m.num_states(); ++s) probs[m.state_name(s)] = rounded(trace_prob(m, s, tr));
                out["trace"] = {{"trace", format_trace(m, tr)},
                                {"formula", to_string(trace_formula(m, tr))},
                                {"prob", std::move(probs)}};
            }
        } else if (eval->parsed()) {
            double value = 0.0;
            std::string printed;
            if (logic == "state") {
                const StateFormula f = parse_state_formula(formula_text);
                printed = to_string(f);
                value = eval_state(m, f, state_of(m, at));
            } else if (logic == "dist") {
                const DistFormula f = parse_dist_formula(formula_text);
                printed = to_string(f);
                value = eval_dist(m, f, parse_distribution(m, at));
            } else {
                const DstarFormula f = parse_dstar_formula(formula_text);
                printed = to_string(f);
                value = eval_dstar(m, f, parse_distribution(m, at), allow_null_lift);
            }
            out = {{"logic", logic}, {"formula", printed}, {"at", at}, {"value", rounded(value)}};
        } else if (distinguish->parsed()) {
            auto [l, r] = split_pair(pair);
            const StateId s = state_of(m, l);
            const StateId t = state_of(m, r);
            const StateFormula f = synthesize_distinguishing(m, s, t, depth, eps);
            Evaluator ev(m);
            const double vs = ev.state(f, s);
            const double vt = ev.state(f, t);
            out = {{"s", l},
                   {"t", r},
                   {"depth", depth},
                   {"eps", eps},
                   {"d_k", rounded(kleene_iterate(m, depth)(s, t))},
                   {"formula", to_string(f)},
                   {"values", {{"s", rounded(vs)}, {"t", rounded(vt)}}},
                   {"gap", rounded(std::abs(vs - vt))}};
            if (grid > 0) {
                const LowerBound lb = logical_metric_lower_bound(m, s, t, {depth ? depth : 1, grid});
                out["lower_bound"] = {{"value", rounded(lb.value)},
                                      {"witness", to_string(lb.witness)},
                                      {"grid", grid},
                                      {"examined", lb.examined}};
            }
        } else if (lift->parsed()) {
            const StateMetric d = metric_path.empty() ? fixpoint(m).metric : load_metric(m, metric_path);
            const SubDistribution a = parse_distribution(m, left);
            const SubDistribution b = parse_distribution(m, right);
            if (std::abs(a.mass() - 1.0) > kMassTolerance || std::abs(b.mass() - 1.0) > kMassTolerance)
                throw ModelError("lift needs full distributions");
            const TransportPlan plan = kantorovich(d, a, b);
            json matching = json::array();
            for (const auto& c : plan.matching)
                matching.push_back(
                    {{"from", m.state_name(c.from)}, {"to", m.state_name(c.to)}, {"mass", rounded(c.mass)}});
            json duals = json::object();
            for (StateId s = 0; s < m.num_states(); ++s) duals[m.state_name(s)] = rounded(plan.duals[s]);
            out = {{"value", rounded(plan.value)},
                   {"dual_value", rounded(plan.dual_value)},
                   {"matching", std::move(matching)},
                   {"duals", std::move(duals)}};
        }
        emit(common, out);
        return code;
    } catch (const UsageError& e) {
        std::cerr << "pmetric: " << e.what() << '\n';
        return kUsage;
    } catch (const FormulaError& e) {
        std::cerr << "pmetric: formula: " << e.what() << '\n';
        return kUsage;
    } catch (const ModelError& e) {
        std::cerr << "pmetric: " << e.what() << '\n';
        return kModel;
    } catch (const BudgetExceeded& e) {
        std::cerr << "pmetric: " << e.what() << '\n';
        return kBudget;
    } catch (const std::invalid_argument& e) {
        std::cerr << "pmetric: " << e.what() << '\n';
        return kModel;
    } catch (const std::out_of_range& e) {
        std::cerr << "pmetric: " << e.what() << '\n';
        return kModel;
    }
}
