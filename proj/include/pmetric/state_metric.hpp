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

#include <cstddef>
#include <functional>
#include <vector>

#include "pmetric/plts.hpp"
#include "pmetric/transport.hpp"

namespace pmetric {

struct FixpointOptions {
    double tol = 1e-9;
    /// 0 selects the default 10 * |S|^2 + 100.
    std::size_t max_iter = 0;
    /// Record every iterate d_0, d_1, ... in FixpointResult::iterates.
    bool keep_iterates = false;
};

struct FixpointResult {
    StateMetric metric;
    std::size_t iterations = 0;
    /// Sup-norm change made by the last step.
    double residual = 0.0;
    bool converged = false;
    std::vector<StateMetric> iterates;
};

std::size_t default_max_iterations(std::size_t num_states);

/// One application of F: for every pair, the largest Hausdorff-Kantorovich
/// distance between same-labelled successor sets.
StateMetric functor_step(const Plts& m, const StateMetric& d);

/// Kleene iteration of `step` from the zero table until the sup-norm change
/// drops below opts.tol or the iteration budget runs out.
FixpointResult iterate_from_bottom(std::size_t num_states, const std::function<StateMetric(const StateMetric&)>& step,
                                   const FixpointOptions& opts);

/// Least fixed point of F approached from below.
FixpointResult fixpoint(const Plts& m, const FixpointOptions& opts = {});

/// The k-th Kleene iterate F^k(0).
StateMetric kleene_iterate(const Plts& m, std::size_t k);

/// A partition of the states; blocks are sorted and ordered by their least
/// element.
struct Partition {
    std::vector<std::vector<StateId>> blocks;
    /// False when some pair in a block sits further apart than the closure
    /// tolerance allows (only set by kernel()).
    bool transitive = true;

    std::vector<std::size_t> block_index(std::size_t num_states) const;
    bool same_block(StateId s, StateId t) const;

    friend bool operator==(const Partition& a, const Partition& b) { return a.blocks == b.blocks; }
};

/// Classes of the transitive closure of d(s,t) <= tol. Flags non-transitivity
/// when a class contains a pair further apart than 10 * tol.
Partition kernel(const StateMetric& d, double tol);

/// Probabilistic bisimilarity by partition refinement.
Partition bisimilarity_oracle(const Plts& m);

}  // namespace pmetric
