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
#include <deque>
#include <map>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pmetric/formula.hpp"
#include "pmetric/mhml.hpp"
#include "pmetric/plts.hpp"

namespace pmetric {

/// Node cap for lifted-graph exploration: PMETRIC_NODE_BUDGET if set to a
/// positive integer, 100000 otherwise.
std::size_t default_node_budget();

/**
 * Every Delta' = sum over the support of Delta(s) * Delta_s, where Delta_s is
 * an a-successor of s, or the empty subdistribution when s has none.
 * Duplicates are removed. Unless `allow_null_lift` is set, the result is
 * empty when no support state can perform a.
 */
std::vector<SubDistribution> lifted_successors(const Plts& m, const SubDistribution& d, ActionId a,
                                               bool allow_null_lift = false);

/// Subdistributions reachable by lifted transitions, explored on demand.
class LiftedGraph {
public:
    LiftedGraph(const Plts& m, bool allow_null_lift = false, std::size_t node_budget = default_node_budget());

    /// Id of the node equal to d, adding it when new. Throws BudgetExceeded
    /// when the node cap would be passed.
    std::size_t add(const SubDistribution& d);
    const SubDistribution& node(std::size_t id) const { return nodes_.at(id).dist; }
    /// Successor ids under a, expanded on first use.
    const std::vector<std::size_t>& successors(std::size_t id, ActionId a);

    std::size_t size() const noexcept { return nodes_.size(); }
    const Plts& model() const noexcept { return m_; }

private:
    struct Node {
        SubDistribution dist;
        std::vector<std::vector<std::size_t>> succ;
        std::vector<bool> expanded;
    };

    const Plts& m_;
    bool allow_null_lift_;
    std::size_t budget_;
    std::deque<Node> nodes_;
    std::map<std::vector<StateId>, std::vector<std::size_t>> by_support_;
};

struct DistMetricOptions {
    bool allow_null_lift = false;
    /// 0 selects default_node_budget().
    std::size_t node_budget = 0;
};

/**
 * The k-th approximant of the distribution-based bisimulation metric:
 * d_0 is the mass difference and d_{j+1} adds the Hausdorff distance under
 * d_j between lifted successor sets. Results are memoised across queries.
 */
class DistMetric {
public:
    explicit DistMetric(const Plts& m, const DistMetricOptions& opts = {});

    double operator()(const SubDistribution& a, const SubDistribution& b, std::size_t k);
    double between(std::size_t x, std::size_t y, std::size_t k);

    LiftedGraph& graph() noexcept { return graph_; }

private:
    LiftedGraph graph_;
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double> memo_;
};

/// d_k for each requested pair.
std::vector<double> dist_fixpoint(const Plts& m, const std::vector<std::pair<SubDistribution, SubDistribution>>& pairs,
                                  std::size_t k, const DistMetricOptions& opts = {});

/// Value of a distribution-only formula at any subdistribution; tt is the mass.
double eval_dstar(const Plts& m, const DstarFormula& f, const SubDistribution& d, bool allow_null_lift = false);

struct DstarBound {
    double value = 0.0;
    DstarFormula witness = dstar::minus(dstar::tt(), 1.0);
    std::size_t examined = 0;
};

/**
 * max |[[chi]](a) - [[chi]](b)| over enumerated formulas of depth at most
 * opts.depth with literals on the 1/grid lattice, together with the
 * formula built by the guided construction that follows the maximising
 * lifted transitions of d_depth.
 */
DstarBound dstar_lower_bound(const Plts& m, const SubDistribution& a, const SubDistribution& b,
                             const EnumerationOptions& opts = {}, const DistMetricOptions& metric_opts = {});

/// Formula built by the guided construction alone: its gap at (a, b) is at
/// least d_k(a,b) - eps.
DstarFormula dstar_distinguishing(const Plts& m, const SubDistribution& a, const SubDistribution& b, std::size_t k,
                                  double eps, const DistMetricOptions& metric_opts = {});

}  // namespace pmetric
