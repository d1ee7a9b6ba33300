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
#include <functional>
#include <stdexcept>
#include <vector>

#include "pmetric/plts.hpp"
#include "pmetric/transport.hpp"

namespace pmetric {

/// Finite set of distributions. With `convex` set the value denotes the
/// convex closure of its members, which are then its generating vertices.
class DistributionSet {
public:
    DistributionSet() = default;
    explicit DistributionSet(std::vector<SubDistribution> members, bool convex = false);

    const std::vector<SubDistribution>& members() const noexcept { return members_; }
    bool convex() const noexcept { return convex_; }
    bool empty() const noexcept { return members_.empty(); }
    std::size_t size() const noexcept { return members_.size(); }

private:
    std::vector<SubDistribution> members_;
    bool convex_ = false;
};

using DistributionDistance = std::function<double(const SubDistribution&, const SubDistribution&)>;

/// sup over `from` of inf over `to`, with inf of nothing = 1 and sup of
/// nothing = 0.
template <class Distance>
double directed_hausdorff(Distance&& dhat, const std::vector<SubDistribution>& from,
                          const std::vector<SubDistribution>& to) {
    double worst = 0.0;
    for (const auto& x : from) {
        double best = 1.0;
        for (const auto& y : to) {
            best = std::min(best, dhat(x, y));
            if (best <= 0.0) break;
        }
        worst = std::max(worst, best);
    }
    return worst;
}

/// Hausdorff lifting of a distribution distance to finite sets.
double hausdorff(const DistributionDistance& dhat, const DistributionSet& a, const DistributionSet& b);

/// inf over the convex closure of `hull` of K(d)(from, .), solved as a single
/// LP over the matching and the mixture weights. Returns 1 when `hull` is
/// empty. `weights`, when given, receives the optimal mixture.
double distance_to_hull(const StateMetric& d, const SubDistribution& from, const std::vector<SubDistribution>& hull,
                        std::vector<double>* weights = nullptr);

/// Hausdorff distance under K(d) between the convex closures of two
/// generator sets.
double hausdorff_convex(const StateMetric& d, const DistributionSet& a, const DistributionSet& b);

}  // namespace pmetric
