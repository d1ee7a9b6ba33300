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

#include "pmetric/trace_metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pmetric {

Trace parse_trace(const Plts& m, std::string_view text) {
    std::istringstream in{std::string(text)};
    Trace tr;
    for (std::string label; in >> label;) tr.push_back(m.action(label));
    return tr;
}

std::string format_trace(const Plts& m, const Trace& tr) {
    std::string out;
    for (ActionId a : tr) {
        if (!out.empty()) out += ' ';
        out += m.action_name(a);
    }
    return out;
}

namespace {

/// Pr(., suffix of tr from position `from`) for every state.
std::vector<double> suffix_probabilities(const Plts& m, const Trace& tr, std::size_t from) {
    std::vector<double> pr(m.num_states(), 1.0);
    for (std::size_t k = tr.size(); k-- > from;) {
        std::vector<double> next(m.num_states(), 0.0);
        for (StateId s = 0; s < m.num_states(); ++s) {
            double best = 0.0;
            for (std::size_t id : m.transition_ids(s, tr[k])) {
                double sum = 0.0;
                for (const auto& [t, p] : m.transitions()[id].target.entries()) sum += p * pr[t];
                best = std::max(best, sum);
            }
            next[s] = best;
        }
        pr = std::move(next);
    }
    return pr;
}

}  // namespace

double trace_prob(const Plts& m, StateId s, const Trace& tr) {
    if (s >= m.num_states()) throw std::out_of_range("trace_prob: unknown state");
    for (ActionId a : tr) {
        if (a >= m.num_actions()) throw std::out_of_range("trace_prob: unknown action");
    }
    return suffix_probabilities(m, tr, 0)[s];
}

TraceDistance trace_distance(const Plts& m, StateId s, StateId t, std::size_t max_len) {
    TraceDistance result;
    std::vector<Trace> frontier{Trace{}};
    for (std::size_t len = 1; len <= max_len && !frontier.empty(); ++len) {
        std::vector<Trace> next;
        for (const Trace& prefix : frontier) {
            for (ActionId a = 0; a < m.num_actions(); ++a) {
                Trace tr = prefix;
                tr.push_back(a);
                const auto pr = suffix_probabilities(m, tr, 0);
                const double gap = std::abs(pr[s] - pr[t]);
                if (gap > result.value) {
                    result.value = gap;
                    result.witness = tr;
                }
                // Extensions of a trace neither state can perform stay at 0.
                if (pr[s] > 0.0 || pr[t] > 0.0) next.push_back(std::move(tr));
            }
        }
        frontier = std::move(next);
    }
    return result;
}

StateFormula trace_formula(const std::vector<std::string>& labels) {
    StateFormula f = mhml::tt();
    for (auto it = labels.rbegin(); it != labels.rend(); ++it) f = mhml::diamond(*it, mhml::box(f));
    return f;
}

StateFormula trace_formula(const Plts& m, const Trace& tr) {
    std::vector<std::string> labels;
    for (ActionId a : tr) labels.push_back(m.action_name(a));
    return trace_formula(labels);
}

}  // namespace pmetric
