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

#include "pmetric/convex_metric.hpp"

#include <algorithm>
#include <stdexcept>

#include "pmetric/lifting.hpp"

namespace pmetric {

StateMetric convex_functor_step(const Plts& m, const StateMetric& d) {
    const std::size_t n = m.num_states();
    const std::size_t k = m.num_actions();
    std::vector<DistributionSet> hulls(n * k);
    for (StateId s = 0; s < n; ++s) {
        for (ActionId a = 0; a < k; ++a) hulls[s * k + a] = DistributionSet(m.successors(s, a), true);
    }
    StateMetric next(n);
    for (StateId s = 0; s < n; ++s) {
        for (StateId t = s + 1; t < n; ++t) {
            double value = 0.0;
            for (ActionId a = 0; a < k && value < 1.0; ++a)
                value = std::max(value, hausdorff_convex(d, hulls[s * k + a], hulls[t * k + a]));
            next.set(s, t, value);
        }
    }
    return next;
}

FixpointResult convex_fixpoint(const Plts& m, const FixpointOptions& opts) {
    return iterate_from_bottom(m.num_states(), [&](const StateMetric& d) { return convex_functor_step(m, d); }, opts);
}

namespace {

/// All ways of writing `total` as an ordered sum of `parts` naturals.
void compositions(std::size_t total, std::size_t parts, std::vector<std::size_t>& current,
                  std::vector<std::vector<std::size_t>>& out) {
    if (parts == 1) {
        current.push_back(total);
        out.push_back(current);
        current.pop_back();
        return;
    }
    for (std::size_t first = 0; first <= total; ++first) {
        current.push_back(first);
        compositions(total - first, parts - 1, current, out);
        current.pop_back();
    }
}

}  // namespace

Plts saturate(const Plts& m, std::size_t grid) {
    if (grid < 1) throw std::invalid_argument("saturate: grid must be at least 1");
    std::vector<Transition> transitions = m.transitions();
    for (StateId s = 0; s < m.num_states(); ++s) {
        for (ActionId a = 0; a < m.num_actions(); ++a) {
            const auto der = m.successors(s, a);
            if (der.size() < 2) continue;
            std::vector<SubDistribution> known = der;
            std::vector<std::vector<std::size_t>> weights;
            std::vector<std::size_t> scratch;
            compositions(grid, der.size(), scratch, weights);
            for (const auto& w : weights) {
                std::vector<double> lambda(w.size());
                for (std::size_t i = 0; i < w.size(); ++i)
                    lambda[i] = static_cast<double>(w[i]) / static_cast<double>(grid);
                SubDistribution mixed = mix(lambda, der);
                if (std::any_of(known.begin(), known.end(), [&](const SubDistribution& x) { return x == mixed; }))
                    continue;
                known.push_back(mixed);
                transitions.push_back({s, a, std::move(mixed)});
            }
        }
    }
    return Plts(m.state_names(), m.action_names(), std::move(transitions));
}

}  // namespace pmetric
