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

#include "pmetric/state_metric.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "pmetric/lifting.hpp"

namespace pmetric {

std::size_t default_max_iterations(std::size_t num_states) { return 10 * num_states * num_states + 100; }

StateMetric functor_step(const Plts& m, const StateMetric& d) {
    const std::size_t n = m.num_states();
    const std::size_t k = m.num_actions();
    std::vector<std::vector<SubDistribution>> der(n * k);
    for (StateId s = 0; s < n; ++s) {
        for (ActionId a = 0; a < k; ++a) der[s * k + a] = m.successors(s, a);
    }
    auto lifted = [&](const SubDistribution& x, const SubDistribution& y) { return kantorovich_distance(d, x, y); };

    StateMetric next(n);
    for (StateId s = 0; s < n; ++s) {
        for (StateId t = s + 1; t < n; ++t) {
            double value = 0.0;
            for (ActionId a = 0; a < k && value < 1.0; ++a) {
                const auto& ds = der[s * k + a];
                const auto& dt = der[t * k + a];
                value = std::max(value, directed_hausdorff(lifted, ds, dt));
                value = std::max(value, directed_hausdorff(lifted, dt, ds));
            }
            next.set(s, t, value);
        }
    }
    return next;
}

FixpointResult iterate_from_bottom(std::size_t num_states, const std::function<StateMetric(const StateMetric&)>& step,
                                   const FixpointOptions& opts) {
    FixpointResult result;
    const std::size_t budget = opts.max_iter ? opts.max_iter : default_max_iterations(num_states);
    StateMetric current(num_states);
    if (opts.keep_iterates) result.iterates.push_back(current);
    for (std::size_t i = 0; i < budget; ++i) {
        StateMetric next = step(current);
        result.residual = sup_distance(next, current);
        result.iterations = i + 1;
        current = std::move(next);
        if (opts.keep_iterates) result.iterates.push_back(current);
        if (result.residual < opts.tol) {
            result.converged = true;
            break;
        }
    }
    result.metric = std::move(current);
    return result;
}

FixpointResult fixpoint(const Plts& m, const FixpointOptions& opts) {
    return iterate_from_bottom(m.num_states(), [&](const StateMetric& d) { return functor_step(m, d); }, opts);
}

StateMetric kleene_iterate(const Plts& m, std::size_t k) {
    StateMetric d(m.num_states());
    for (std::size_t i = 0; i < k; ++i) d = functor_step(m, d);
    return d;
}

std::vector<std::size_t> Partition::block_index(std::size_t num_states) const {
    std::vector<std::size_t> index(num_states, 0);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (StateId s : blocks[b]) index[s] = b;
    }
    return index;
}

bool Partition::same_block(StateId s, StateId t) const {
    for (const auto& b : blocks) {
        bool hs = std::find(b.begin(), b.end(), s) != b.end();
        bool ht = std::find(b.begin(), b.end(), t) != b.end();
        if (hs || ht) return hs && ht;
    }
    return false;
}

namespace {

Partition from_labels(const std::vector<std::size_t>& label) {
    std::map<std::size_t, std::vector<StateId>> groups;
    for (StateId s = 0; s < label.size(); ++s) groups[label[s]].push_back(s);
    Partition p;
    for (auto& [l, members] : groups) p.blocks.push_back(std::move(members));
    std::sort(p.blocks.begin(), p.blocks.end());
    return p;
}

}  // namespace

Partition kernel(const StateMetric& d, double tol) {
    const std::size_t n = d.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (StateId s = 0; s < n; ++s) {
        for (StateId t = s + 1; t < n; ++t) {
            if (d(s, t) <= tol) parent[find(s)] = find(t);
        }
    }
    std::vector<std::size_t> label(n);
    for (StateId s = 0; s < n; ++s) label[s] = find(s);
    Partition p = from_labels(label);
    for (const auto& block : p.blocks) {
        for (StateId s : block) {
            for (StateId t : block) {
                if (d(s, t) > 10.0 * tol) p.transitive = false;
            }
        }
    }
    return p;
}

Partition bisimilarity_oracle(const Plts& m) {
    const std::size_t n = m.num_states();
    const std::size_t k = m.num_actions();
    // Block masses are compared after rounding to 1e-9.
    using BlockMass = std::vector<std::pair<std::size_t, long long>>;
    using Signature = std::vector<std::pair<ActionId, std::vector<BlockMass>>>;

    std::vector<std::size_t> block(n, 0);
    std::size_t count = n ? 1 : 0;
    for (;;) {
        std::map<std::pair<std::size_t, Signature>, std::size_t> ids;
        std::vector<std::size_t> next(n);
        for (StateId s = 0; s < n; ++s) {
            Signature sig;
            for (ActionId a = 0; a < k; ++a) {
                auto ders = m.successors(s, a);
                if (ders.empty()) continue;
                std::vector<BlockMass> lifted;
                for (const auto& delta : ders) {
                    std::map<std::size_t, double> mass;
                    for (const auto& [t, p] : delta.entries()) mass[block[t]] += p;
                    BlockMass bm;
                    for (const auto& [b, p] : mass) bm.emplace_back(b, std::llround(p * 1e9));
                    lifted.push_back(std::move(bm));
                }
                std::sort(lifted.begin(), lifted.end());
                lifted.erase(std::unique(lifted.begin(), lifted.end()), lifted.end());
                sig.emplace_back(a, std::move(lifted));
            }
            auto key = std::make_pair(block[s], std::move(sig));
            auto it = ids.find(key);
            if (it == ids.end()) it = ids.emplace(std::move(key), ids.size()).first;
            next[s] = it->second;
        }
        std::size_t next_count = ids.size();
        block = std::move(next);
        if (next_count == count) break;
        count = next_count;
    }
    return from_labels(block);
}

}  // namespace pmetric
