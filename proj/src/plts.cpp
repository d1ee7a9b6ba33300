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

#include "pmetric/plts.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "pmetric/errors.hpp"

namespace pmetric {

SubDistribution::SubDistribution(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    for (const auto& [s, p] : entries) {
        if (!(p >= 0.0)) throw std::invalid_argument("negative probability in subdistribution");
        if (!entries_.empty() && entries_.back().first == s) {
            entries_.back().second += p;
        } else {
            entries_.emplace_back(s, p);
        }
    }
    std::erase_if(entries_, [](const Entry& e) { return e.second == 0.0; });
    mass_ = 0.0;
    for (const auto& e : entries_) mass_ += e.second;
    if (mass_ > 1.0 + 1e-12) throw std::invalid_argument("subdistribution mass exceeds 1");
}

SubDistribution SubDistribution::dirac(StateId s) {
    SubDistribution d;
    d.entries_.emplace_back(s, 1.0);
    d.mass_ = 1.0;
    return d;
}

double SubDistribution::operator[](StateId s) const noexcept {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), s,
                               [](const Entry& e, StateId v) { return e.first < v; });
    return it != entries_.end() && it->first == s ? it->second : 0.0;
}

SubDistribution SubDistribution::scaled(double p) const {
    std::vector<Entry> out;
    out.reserve(entries_.size());
    for (const auto& [s, q] : entries_) out.emplace_back(s, p * q);
    return SubDistribution(std::move(out));
}

bool operator==(const SubDistribution& a, const SubDistribution& b) {
    if (a.entries_.size() != b.entries_.size()) return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i) {
        if (a.entries_[i].first != b.entries_[i].first) return false;
        if (std::abs(a.entries_[i].second - b.entries_[i].second) > kEntryTolerance) return false;
    }
    return true;
}

SubDistribution mix(std::span<const double> weights, std::span<const SubDistribution> parts) {
    if (weights.size() != parts.size()) throw std::invalid_argument("mix: size mismatch");
    std::vector<SubDistribution::Entry> all;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (weights[i] == 0.0) continue;
        for (const auto& [s, p] : parts[i].entries()) all.emplace_back(s, weights[i] * p);
    }
    return SubDistribution(std::move(all));
}

bool lexicographic_less(const SubDistribution& a, const SubDistribution& b) {
    auto ea = a.entries();
    auto eb = b.entries();
    return std::lexicographical_compare(ea.begin(), ea.end(), eb.begin(), eb.end());
}

Plts::Plts(std::vector<std::string> states, std::vector<std::string> actions,
           std::vector<Transition> transitions)
    : states_(std::move(states)), actions_(std::move(actions)), transitions_(std::move(transitions)) {
    by_state_action_.assign(states_.size() * actions_.size(), {});
    for (std::size_t i = 0; i < transitions_.size(); ++i) {
        const auto& tr = transitions_[i];
        if (tr.source >= states_.size() || tr.action >= actions_.size())
            throw std::out_of_range("transition refers to an unknown state or action");
        for (const auto& [s, p] : tr.target.entries()) {
            (void)p;
            if (s >= states_.size()) throw std::out_of_range("transition target outside the model");
        }
        by_state_action_[tr.source * actions_.size() + tr.action].push_back(i);
    }
}

StateId Plts::state(std::string_view name) const {
    auto it = std::find(states_.begin(), states_.end(), name);
    if (it == states_.end()) throw std::out_of_range("unknown state '" + std::string(name) + "'");
    return static_cast<StateId>(it - states_.begin());
}

ActionId Plts::action(std::string_view name) const {
    auto it = std::find(actions_.begin(), actions_.end(), name);
    if (it == actions_.end()) throw std::out_of_range("unknown action '" + std::string(name) + "'");
    return static_cast<ActionId>(it - actions_.begin());
}

bool Plts::has_state(std::string_view name) const noexcept {
    return std::find(states_.begin(), states_.end(), name) != states_.end();
}

bool Plts::has_action(std::string_view name) const noexcept {
    return std::find(actions_.begin(), actions_.end(), name) != actions_.end();
}

std::span<const std::size_t> Plts::transition_ids(StateId s, ActionId a) const {
    if (s >= states_.size() || a >= actions_.size())
        throw std::out_of_range("state or action id outside the model");
    return by_state_action_[s * actions_.size() + a];
}

std::vector<SubDistribution> Plts::successors(StateId s, ActionId a) const {
    std::vector<SubDistribution> out;
    for (std::size_t i : transition_ids(s, a)) out.push_back(transitions_[i].target);
    return out;
}

bool Plts::is_deterministic() const noexcept {
    return std::all_of(by_state_action_.begin(), by_state_action_.end(),
                       [](const auto& ids) { return ids.size() <= 1; });
}

bool operator==(const Plts& a, const Plts& b) {
    if (a.states_ != b.states_ || a.actions_ != b.actions_) return false;
    if (a.transitions_.size() != b.transitions_.size()) return false;
    for (std::size_t i = 0; i < a.transitions_.size(); ++i) {
        const auto& x = a.transitions_[i];
        const auto& y = b.transitions_[i];
        if (x.source != y.source || x.action != y.action || !(x.target == y.target)) return false;
    }
    return true;
}

namespace {

using nlohmann::json;

std::vector<std::string> read_names(const json& doc, const char* key, bool required) {
    std::vector<std::string> names;
    if (!doc.contains(key)) {
        if (required) throw ModelError(std::string("missing \"") + key + "\" array");
        return names;
    }
    const json& arr = doc.at(key);
    if (!arr.is_array()) throw ModelError(std::string("\"") + key + "\" must be an array");
    std::unordered_set<std::string> seen;
    for (const json& v : arr) {
        if (!v.is_string()) throw ModelError(std::string("\"") + key + "\" entries must be strings");
        auto name = v.get<std::string>();
        if (!seen.insert(name).second) {
            throw ModelError(std::string("duplicate ") + (key == std::string("states") ? "state" : "action") +
                             " identifier '" + name + "'");
        }
        names.push_back(std::move(name));
    }
    return names;
}

}  // namespace

Plts parse_model(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ModelError(std::string("syntax error: ") + e.what(), e.byte);
    }
    if (!doc.is_object()) throw ModelError("model must be a JSON object");

    auto states = read_names(doc, "states", true);
    bool actions_declared = doc.contains("actions");
    auto actions = read_names(doc, "actions", false);

    auto state_index = [&](const std::string& name, const char* role) -> StateId {
        auto it = std::find(states.begin(), states.end(), name);
        if (it == states.end()) throw ModelError(std::string("undeclared state '") + name + "' in " + role);
        return static_cast<StateId>(it - states.begin());
    };

    if (!doc.contains("transitions")) throw ModelError("missing \"transitions\" array");
    const json& trs = doc.at("transitions");
    if (!trs.is_array()) throw ModelError("\"transitions\" must be an array");

    std::vector<Transition> transitions;
    for (std::size_t k = 0; k < trs.size(); ++k) {
        const json& t = trs[k];
        const std::string where = "transition #" + std::to_string(k);
        if (!t.is_object() || !t.contains("from") || !t.contains("action") || !t.contains("to"))
            throw ModelError(where + ": needs \"from\", \"action\" and \"to\"");
        if (!t["from"].is_string() || !t["action"].is_string() || !t["to"].is_object())
            throw ModelError(where + ": malformed fields");

        StateId src = state_index(t["from"].get<std::string>(), ("source of " + where).c_str());
        auto action_name = t["action"].get<std::string>();
        auto ait = std::find(actions.begin(), actions.end(), action_name);
        if (ait == actions.end()) {
            if (actions_declared) throw ModelError(where + ": undeclared action '" + action_name + "'");
            actions.push_back(action_name);
            ait = actions.end() - 1;
        }

        std::vector<SubDistribution::Entry> entries;
        for (auto it = t["to"].begin(); it != t["to"].end(); ++it) {
            if (!it.value().is_number()) throw ModelError(where + ": probabilities must be numbers");
            double p = it.value().get<double>();
            if (!(p >= 0.0) || p > 1.0 + kMassTolerance)
                throw ModelError(where + ": probability out of [0,1] for '" + it.key() + "'");
            entries.emplace_back(state_index(it.key(), ("target of " + where).c_str()), p);
        }
        double mass = 0.0;
        for (const auto& e : entries) mass += e.second;
        if (std::abs(mass - 1.0) > kMassTolerance) {
            std::ostringstream msg;
            msg.precision(12);
            msg << where << ": target distribution has mass " << mass << ", expected 1";
            throw ModelError(msg.str());
        }
        // Absorb rounding so the stored target satisfies mass <= 1 exactly.
        if (mass > 1.0) {
            for (auto& e : entries) e.second /= mass;
        }
        transitions.push_back(Transition{src, static_cast<ActionId>(ait - actions.begin()),
                                         SubDistribution(std::move(entries))});
    }
    return Plts(std::move(states), std::move(actions), std::move(transitions));
}

Plts load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelError("cannot open model file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

std::string serialize_model(const Plts& m) {
    nlohmann::ordered_json doc;
    doc["states"] = m.state_names();
    doc["actions"] = m.action_names();
    auto trs = nlohmann::ordered_json::array();
    for (const auto& t : m.transitions()) {
        nlohmann::ordered_json to = nlohmann::ordered_json::object();
        for (const auto& [s, p] : t.target.entries()) to[m.state_name(s)] = p;
        trs.push_back({{"from", m.state_name(t.source)}, {"action", m.action_name(t.action)}, {"to", to}});
    }
    doc["transitions"] = std::move(trs);
    return doc.dump(2) + "\n";
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

SubDistribution parse_distribution(const Plts& m, std::string_view text) {
    text = trim(text);
    auto lookup = [&](std::string_view name) {
        name = trim(name);
        if (!m.has_state(name)) throw ModelError("unknown state '" + std::string(name) + "' in distribution");
        return m.state(name);
    };
    if (text.empty()) throw ModelError("empty distribution literal");
    if (text.front() != '{') return SubDistribution::dirac(lookup(text));
    if (text.back() != '}') throw ModelError("distribution literal must end with '}'");
    text = trim(text.substr(1, text.size() - 2));

    std::vector<SubDistribution::Entry> entries;
    while (!text.empty()) {
        auto comma = text.find(',');
        auto item = text.substr(0, comma);
        auto colon = item.find(':');
        if (colon == std::string_view::npos)
            throw ModelError("expected state:probability in '" + std::string(item) + "'");
        auto prob_text = std::string(trim(item.substr(colon + 1)));
        std::size_t used = 0;
        double p = 0.0;
        try {
            p = std::stod(prob_text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != prob_text.size() || !(p >= 0.0) || p > 1.0)
            throw ModelError("bad probability '" + prob_text + "'");
        entries.emplace_back(lookup(item.substr(0, colon)), p);
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    }
    try {
        return SubDistribution(std::move(entries));
    } catch (const std::invalid_argument& e) {
        throw ModelError(std::string("invalid distribution literal: ") + e.what());
    }
}

std::string format_distribution(const Plts& m, const SubDistribution& d) {
    std::ostringstream out;
    out.precision(12);
    out << '{';
    bool first = true;
    for (const auto& [s, p] : d.entries()) {
        if (!first) out << ',';
        first = false;
        out << m.state_name(s) << ':' << p;
    }
    out << '}';
    return out.str();
}

}  // namespace pmetric
