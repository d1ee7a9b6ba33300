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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pmetric {

using StateId = std::uint32_t;
using ActionId = std::uint32_t;

/// Tolerance on the mass of transition targets.
inline constexpr double kMassTolerance = 1e-9;
/// Per-entry tolerance of canonical equality between subdistributions.
inline constexpr double kEntryTolerance = 1e-12;

/**
 * Finitely supported map from states to probabilities with total mass at
 * most one. Entries are kept sorted by state id and never hold zeros, so two
 * values describing the same subdistribution have the same layout.
 */
class SubDistribution {
public:
    using Entry = std::pair<StateId, double>;

    SubDistribution() = default;

    /// Builds from arbitrary entries: duplicates are summed, zeros dropped.
    /// Throws std::invalid_argument on negative probabilities or mass > 1.
    explicit SubDistribution(std::vector<Entry> entries);

    static SubDistribution dirac(StateId s);
    /// The zero-mass subdistribution.
    static SubDistribution empty() { return {}; }

    std::span<const Entry> entries() const noexcept { return entries_; }
    std::size_t support_size() const noexcept { return entries_.size(); }
    bool is_empty() const noexcept { return entries_.empty(); }
    double mass() const noexcept { return mass_; }
    double operator[](StateId s) const noexcept;

    /// Scalar multiple p * this.
    SubDistribution scaled(double p) const;

    friend bool operator==(const SubDistribution& a, const SubDistribution& b);

private:
    std::vector<Entry> entries_;
    double mass_ = 0.0;
};

/// Weighted sum sum_i weights[i] * parts[i]; the result must have mass <= 1.
SubDistribution mix(std::span<const double> weights, std::span<const SubDistribution> parts);

/// Strict weak order consistent with canonical equality up to exact bits;
/// used as a key order for deduplication after quantisation.
bool lexicographic_less(const SubDistribution& a, const SubDistribution& b);

struct Transition {
    StateId source;
    ActionId action;
    SubDistribution target;
};

/**
 * A finite probabilistic labelled transition system. Immutable once built;
 * the per-(state, action) successor lists preserve transition-list order.
 */
class Plts {
public:
    Plts(std::vector<std::string> states, std::vector<std::string> actions,
         std::vector<Transition> transitions);

    std::size_t num_states() const noexcept { return states_.size(); }
    std::size_t num_actions() const noexcept { return actions_.size(); }
    std::size_t num_transitions() const noexcept { return transitions_.size(); }

    const std::vector<std::string>& state_names() const noexcept { return states_; }
    const std::vector<std::string>& action_names() const noexcept { return actions_; }
    const std::string& state_name(StateId s) const { return states_.at(s); }
    const std::string& action_name(ActionId a) const { return actions_.at(a); }

    /// Throws std::out_of_range for unknown names.
    StateId state(std::string_view name) const;
    ActionId action(std::string_view name) const;
    bool has_state(std::string_view name) const noexcept;
    bool has_action(std::string_view name) const noexcept;

    const std::vector<Transition>& transitions() const noexcept { return transitions_; }

    /// Indices into transitions() of every s --a--> Delta, in file order.
    std::span<const std::size_t> transition_ids(StateId s, ActionId a) const;

    /// der(s, a). Throws std::out_of_range for ids outside the model.
    std::vector<SubDistribution> successors(StateId s, ActionId a) const;

    /// True when s has at least one outgoing transition labelled a.
    bool enables(StateId s, ActionId a) const { return !transition_ids(s, a).empty(); }

    /// At most one successor distribution for every (s, a).
    bool is_deterministic() const noexcept;

    friend bool operator==(const Plts& a, const Plts& b);

private:
    std::vector<std::string> states_;
    std::vector<std::string> actions_;
    std::vector<Transition> transitions_;
    std::vector<std::vector<std::size_t>> by_state_action_;
};

/// Reads the JSON model format. Throws ModelError.
Plts parse_model(std::string_view text);
Plts load_model(const std::string& path);
/// Writes the JSON model format; parse_model(serialize_model(m)) == m.
std::string serialize_model(const Plts& m);

/// Parses a distribution literal such as `{s2:0.5,s3:0.5}` or a bare state
/// name (a point mass). Throws ModelError.
SubDistribution parse_distribution(const Plts& m, std::string_view text);
std::string format_distribution(const Plts& m, const SubDistribution& d);

}  // namespace pmetric
