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
#include <span>
#include <vector>

#include "pmetric/plts.hpp"

namespace pmetric {

/**
 * Dense symmetric table of distances between states, values in [0,1].
 * The default-constructed table over n states is the bottom element (all
 * zeros) of the lattice ordered entrywise.
 */
class StateMetric {
public:
    StateMetric() = default;
    explicit StateMetric(std::size_t n) : n_(n), values_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    double operator()(StateId s, StateId t) const { return values_[s * n_ + t]; }
    /// Writes both (s,t) and (t,s).
    void set(StateId s, StateId t, double v) {
        values_[s * n_ + t] = v;
        values_[t * n_ + s] = v;
    }

    /// Largest entrywise |a - b|.
    friend double sup_distance(const StateMetric& a, const StateMetric& b);
    /// a ⊑ b + slack entrywise.
    friend bool below(const StateMetric& a, const StateMetric& b, double slack);

    /// Zero diagonal, symmetry, [0,1] range and the triangle inequality, all
    /// up to `tol`.
    bool is_pseudometric(double tol) const;

    /// The discrete metric: 0 on the diagonal, 1 elsewhere.
    static StateMetric discrete(std::size_t n);

private:
    std::size_t n_ = 0;
    std::vector<double> values_;
};

struct Coupling {
    StateId from;
    StateId to;
    double mass;
};

/// Result of lifting a state metric to a pair of distributions.
struct TransportPlan {
    double value = 0.0;
    /// Optimal matching; empty when produced by the dual route.
    std::vector<Coupling> matching;
    /// Potentials x_s for every state of the metric table: 0 <= x_s <= 1 and
    /// x_s - x_t <= d(s,t).
    std::vector<double> duals;
    /// sum_s (Delta(s) - Theta(s)) * x_s.
    double dual_value = 0.0;
};

/// Kantorovich lifting K(d)(from, to) by the transportation simplex; the
/// potentials come from the optimal basis. Both arguments must be full
/// distributions (std::invalid_argument otherwise).
TransportPlan kantorovich(const StateMetric& d, const SubDistribution& from, const SubDistribution& to);

/// Same value obtained by solving the dual program over potentials directly.
TransportPlan kantorovich_dual(const StateMetric& d, const SubDistribution& from, const SubDistribution& to);

/// Convenience: kantorovich(d, from, to).value.
double kantorovich_distance(const StateMetric& d, const SubDistribution& from, const SubDistribution& to);

namespace detail {

struct TransportSolution {
    double cost = 0.0;
    std::vector<double> flow;  // row-major, rows x cols
    std::vector<double> row_potential;
    std::vector<double> col_potential;
};

/// Balanced transportation problem: min sum c_ij f_ij subject to row sums
/// `supply`, column sums `demand`, f >= 0. North-west-corner start, MODI
/// pricing, lowest-index entering and leaving rules.
TransportSolution transportation_simplex(std::span<const double> cost, std::span<const double> supply,
                                         std::span<const double> demand);

}  // namespace detail

}  // namespace pmetric
