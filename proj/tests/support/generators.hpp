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

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "pmetric/formula.hpp"
#include "pmetric/plts.hpp"
#include "pmetric/transport.hpp"

namespace pmetric::testing {

struct ModelShape {
    std::size_t min_states = 2;
    std::size_t max_states = 6;
    std::size_t actions = 2;
    /// Upper bound on |der(s,a)|.
    std::size_t max_branching = 2;
    std::size_t max_support = 3;
    bool acyclic = false;
    bool deterministic = false;
};

/// Probabilities on the 1/8 grid summing to exactly one.
inline std::vector<double> grid_weights(std::mt19937& rng, std::size_t parts) {
    std::vector<int> units(parts, 1);
    int left = 8 - static_cast<int>(parts);
    std::uniform_int_distribution<std::size_t> pick(0, parts - 1);
    while (left-- > 0) ++units[pick(rng)];
    std::vector<double> w;
    for (int u : units) w.push_back(u / 8.0);
    return w;
}

inline SubDistribution random_distribution(std::mt19937& rng, const std::vector<StateId>& pool, std::size_t max_support) {
    std::vector<StateId> chosen = pool;
    std::shuffle(chosen.begin(), chosen.end(), rng);
    std::uniform_int_distribution<std::size_t> size(1, std::min({max_support, chosen.size(), std::size_t{8}}));
    chosen.resize(size(rng));
    auto w = grid_weights(rng, chosen.size());
    std::vector<SubDistribution::Entry> entries;
    for (std::size_t i = 0; i < chosen.size(); ++i) entries.emplace_back(chosen[i], w[i]);
    return SubDistribution(std::move(entries));
}

inline Plts random_model(std::mt19937& rng, const ModelShape& shape = {}) {
    std::uniform_int_distribution<std::size_t> count(shape.min_states, shape.max_states);
    const std::size_t n = count(rng);
    std::vector<std::string> states, actions;
    for (std::size_t i = 0; i < n; ++i) states.push_back("q" + std::to_string(i));
    for (std::size_t a = 0; a < shape.actions; ++a) actions.push_back(std::string(1, static_cast<char>('a' + a)));

    std::vector<Transition> transitions;
    std::uniform_int_distribution<std::size_t> branching(0, shape.deterministic ? 1 : shape.max_branching);
    for (StateId s = 0; s < n; ++s) {
        std::vector<StateId> pool;
        for (StateId t = shape.acyclic ? s + 1 : 0; t < n; ++t) pool.push_back(t);
        if (pool.empty()) continue;
        for (ActionId a = 0; a < shape.actions; ++a) {
            const std::size_t k = branching(rng);
            for (std::size_t i = 0; i < k; ++i)
                transitions.push_back({s, a, random_distribution(rng, pool, shape.max_support)});
        }
    }
    return Plts(std::move(states), std::move(actions), std::move(transitions));
}

/// Shortest-path closure of random symmetric weights: a 1-bounded
/// pseudometric, often with some zero distances.
inline StateMetric random_pseudometric(std::mt19937& rng, std::size_t n) {
    std::uniform_int_distribution<int> unit(0, 8);
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) w[i][j] = w[j][i] = unit(rng) / 8.0;
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) w[i][j] = std::min(w[i][j], w[i][k] + w[k][j]);
        }
    }
    StateMetric d(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) d.set(static_cast<StateId>(i), static_cast<StateId>(j), w[i][j]);
    }
    return d;
}

inline double random_literal(std::mt19937& rng) { return std::uniform_int_distribution<int>(0, 8)(rng) / 8.0; }

inline DistFormula random_dist_formula(std::mt19937& rng, const Plts& m, std::size_t depth);

inline StateFormula random_state_formula(std::mt19937& rng, const Plts& m, std::size_t depth) {
    std::uniform_int_distribution<int> op(0, depth > 0 ? 4 : 2);
    switch (op(rng)) {
        case 0:
            return mhml::tt();
        case 1:
            return mhml::neg(random_state_formula(rng, m, depth));
        case 2:
            return depth > 0 ? mhml::minus(random_state_formula(rng, m, depth - 1), random_literal(rng))
                             : mhml::constant(random_literal(rng));
        case 3:
            return mhml::conj(random_state_formula(rng, m, depth - 1), random_state_formula(rng, m, depth - 1));
        default: {
            std::uniform_int_distribution<std::size_t> a(0, m.num_actions() - 1);
            return mhml::diamond(m.action_name(static_cast<ActionId>(a(rng))), random_dist_formula(rng, m, depth - 1));
        }
    }
}

inline DistFormula random_dist_formula(std::mt19937& rng, const Plts& m, std::size_t depth) {
    std::uniform_int_distribution<int> op(0, 3);
    switch (op(rng)) {
        case 0:
            return mhml::minus(mhml::box(random_state_formula(rng, m, depth)), random_literal(rng));
        case 1:
            return mhml::conj(mhml::box(random_state_formula(rng, m, depth)),
                              mhml::box(random_state_formula(rng, m, depth)));
        default:
            return mhml::box(random_state_formula(rng, m, depth));
    }
}

inline DstarFormula random_dstar_formula(std::mt19937& rng, const Plts& m, std::size_t depth) {
    std::uniform_int_distribution<int> op(0, depth > 0 ? 4 : 3);
    switch (op(rng)) {
        case 0:
            return dstar::tt();
        case 1:
            return dstar::neg(depth > 0 ? random_dstar_formula(rng, m, depth - 1) : dstar::tt());
        case 2:
            return dstar::minus(depth > 0 ? random_dstar_formula(rng, m, depth - 1) : dstar::tt(), random_literal(rng));
        case 3:
            return depth > 0 ? dstar::conj(random_dstar_formula(rng, m, depth - 1), random_dstar_formula(rng, m, depth - 1))
                             : dstar::neg(dstar::minus(dstar::tt(), random_literal(rng)));
        default: {
            std::uniform_int_distribution<std::size_t> a(0, m.num_actions() - 1);
            return dstar::diamond(m.action_name(static_cast<ActionId>(a(rng))), random_dstar_formula(rng, m, depth - 1));
        }
    }
}

}  // namespace pmetric::testing
