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

#include "pmetric/lifting.hpp"

#include <algorithm>
#include <stdexcept>

#include "pmetric/lp.hpp"

namespace pmetric {

DistributionSet::DistributionSet(std::vector<SubDistribution> members, bool convex) : convex_(convex) {
    for (auto& m : members) {
        if (std::none_of(members_.begin(), members_.end(), [&](const SubDistribution& x) { return x == m; })) {
            members_.push_back(std::move(m));
        }
    }
}

double hausdorff(const DistributionDistance& dhat, const DistributionSet& a, const DistributionSet& b) {
    if (a.convex() || b.convex()) throw std::invalid_argument("hausdorff: use hausdorff_convex for convex sets");
    return std::max(directed_hausdorff(dhat, a.members(), b.members()),
                    directed_hausdorff(dhat, b.members(), a.members()));
}

double distance_to_hull(const StateMetric& d, const SubDistribution& from, const std::vector<SubDistribution>& hull,
                        std::vector<double>* weights) {
    if (hull.empty()) return 1.0;
    if (hull.size() == 1) {
        if (weights) *weights = {1.0};
        return kantorovich_distance(d, from, hull.front());
    }

    std::vector<StateId> targets;
    for (const auto& h : hull) {
        for (const auto& [t, p] : h.entries()) targets.push_back(t);
    }
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    auto sources = from.entries();
    lp::Problem problem;
    // omega(s, t) laid out row-major, then one weight per generator.
    for (const auto& [s, p] : sources) {
        for (StateId t : targets) problem.add_variable(d(s, t));
    }
    const std::size_t first_weight = problem.num_variables();
    for (std::size_t i = 0; i < hull.size(); ++i) problem.add_variable(0.0);

    for (std::size_t i = 0; i < sources.size(); ++i) {
        std::vector<std::pair<std::size_t, double>> row;
        for (std::size_t j = 0; j < targets.size(); ++j) row.emplace_back(i * targets.size() + j, 1.0);
        problem.add_constraint(std::move(row), lp::Relation::Equal, sources[i].second);
    }
    for (std::size_t j = 0; j < targets.size(); ++j) {
        std::vector<std::pair<std::size_t, double>> col;
        for (std::size_t i = 0; i < sources.size(); ++i) col.emplace_back(i * targets.size() + j, 1.0);
        for (std::size_t k = 0; k < hull.size(); ++k) {
            double q = hull[k][targets[j]];
            if (q != 0.0) col.emplace_back(first_weight + k, -q);
        }
        problem.add_constraint(std::move(col), lp::Relation::Equal, 0.0);
    }
    std::vector<std::pair<std::size_t, double>> simplex;
    for (std::size_t k = 0; k < hull.size(); ++k) simplex.emplace_back(first_weight + k, 1.0);
    problem.add_constraint(std::move(simplex), lp::Relation::Equal, 1.0);

    auto sol = problem.minimize();
    if (sol.status != lp::Status::Optimal) throw std::runtime_error("convex-closure transport program not solved");
    if (weights) weights->assign(sol.x.begin() + static_cast<std::ptrdiff_t>(first_weight), sol.x.end());
    return std::clamp(sol.value, 0.0, 1.0);
}

double hausdorff_convex(const StateMetric& d, const DistributionSet& a, const DistributionSet& b) {
    if (!a.convex() || !b.convex()) throw std::invalid_argument("hausdorff_convex: sets must be marked convex");
    // The inner infimum is convex in its first argument, so the supremum over
    // a hull is attained at one of its generators.
    auto directed = [&](const DistributionSet& from, const DistributionSet& to) {
        double worst = 0.0;
        for (const auto& x : from.members()) worst = std::max(worst, distance_to_hull(d, x, to.members()));
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

}  // namespace pmetric
