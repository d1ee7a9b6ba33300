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

#include <doctest.h>

#include <random>

#include "pmetric/state_metric.hpp"
#include "pmetric/transport.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace pmetric;

namespace {

void check_plan(const StateMetric& d, const SubDistribution& from, const SubDistribution& to, const TransportPlan& plan) {
    std::vector<double> rows(d.size(), 0.0), cols(d.size(), 0.0);
    double cost = 0.0;
    for (const auto& c : plan.matching) {
        CHECK(c.mass >= 0.0);
        rows[c.from] += c.mass;
        cols[c.to] += c.mass;
        cost += c.mass * d(c.from, c.to);
    }
    for (StateId s = 0; s < d.size(); ++s) {
        CHECK(rows[s] == doctest::Approx(from[s]).epsilon(1e-9));
        CHECK(cols[s] == doctest::Approx(to[s]).epsilon(1e-9));
    }
    CHECK(cost == doctest::Approx(plan.value).epsilon(1e-9));
    for (StateId s = 0; s < d.size(); ++s) {
        CHECK(plan.duals[s] >= -1e-12);
        CHECK(plan.duals[s] <= 1.0 + 1e-12);
        for (StateId t = 0; t < d.size(); ++t) CHECK(plan.duals[s] - plan.duals[t] <= d(s, t) + 1e-9);
    }
    CHECK(std::abs(plan.value - plan.dual_value) <= 1e-7);
}

SubDistribution on(std::initializer_list<SubDistribution::Entry> e) { return SubDistribution(std::vector(e)); }

}  // namespace

TEST_CASE("lifting the bisimilarity metric of figure 1") {
    const Plts m = testing::bundled("fig1");
    const StateMetric delta = fixpoint(m).metric;
    const SubDistribution left = on({{m.state("s2"), 0.5}, {m.state("s3"), 0.5}});
    const SubDistribution right = SubDistribution::dirac(m.state("t3"));
    const TransportPlan plan = kantorovich(delta, left, right);
    CHECK(plan.value == doctest::Approx(0.5).epsilon(1e-12));
    check_plan(delta, left, right, plan);
    CHECK(kantorovich_dual(delta, left, right).dual_value == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("identical distributions are at distance zero") {
    std::mt19937 rng(3);
    const StateMetric d = testing::random_pseudometric(rng, 5);
    const SubDistribution x = on({{0, 0.25}, {2, 0.5}, {4, 0.25}});
    const TransportPlan plan = kantorovich(d, x, x);
    CHECK(plan.value == 0.0);
    for (const auto& c : plan.matching) {
        if (c.mass > 0) CHECK(d(c.from, c.to) == 0.0);
    }
    const TransportPlan dual = kantorovich_dual(d, x, x);
    CHECK(dual.dual_value == doctest::Approx(0.0));
}

TEST_CASE("discrete metric reduces to total variation") {
    const StateMetric d = StateMetric::discrete(2);
    const SubDistribution x = on({{0, 0.3}, {1, 0.7}});
    const SubDistribution y = on({{0, 0.6}, {1, 0.4}});
    const TransportPlan plan = kantorovich(d, x, y);
    CHECK(plan.value == doctest::Approx(0.3).epsilon(1e-12));
    check_plan(d, x, y, plan);
    const TransportPlan dual = kantorovich_dual(d, x, y);
    CHECK(dual.dual_value == doctest::Approx(0.3).epsilon(1e-9));
    // The optimal potentials are the vertex x_u = 1, x_v = 0.
    CHECK(dual.duals[0] - dual.duals[1] == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("full distributions are required") {
    const StateMetric d = StateMetric::discrete(2);
    CHECK_THROWS_AS(kantorovich(d, on({{0, 0.5}}), on({{1, 0.5}})), std::invalid_argument);
    CHECK_THROWS_AS(kantorovich(d, on({{0, 1.0}}), on({{1, 0.5}})), std::invalid_argument);
}

TEST_CASE("point masses lift exactly") {
    std::mt19937 rng(11);
    for (int i = 0; i < 20; ++i) {
        const StateMetric d = testing::random_pseudometric(rng, 5);
        for (StateId u = 0; u < 5; ++u) {
            for (StateId v = 0; v < 5; ++v)
                CHECK(kantorovich_distance(d, SubDistribution::dirac(u), SubDistribution::dirac(v)) == d(u, v));
        }
    }
}

TEST_CASE("lifted distances form a pseudometric") {
    std::mt19937 rng(5);
    std::vector<StateId> pool{0, 1, 2, 3, 4, 5};
    for (int i = 0; i < 100; ++i) {
        const StateMetric d = testing::random_pseudometric(rng, 6);
        const auto x = testing::random_distribution(rng, pool, 3);
        const auto y = testing::random_distribution(rng, pool, 3);
        const auto z = testing::random_distribution(rng, pool, 3);
        const double xy = kantorovich_distance(d, x, y);
        CHECK(std::abs(xy - kantorovich_distance(d, y, x)) <= 1e-7);
        CHECK(kantorovich_distance(d, x, z) <= xy + kantorovich_distance(d, y, z) + 1e-7);
        CHECK(xy >= 0.0);
        CHECK(xy <= 1.0);
    }
}

TEST_CASE("lifting is monotone in the state metric") {
    std::mt19937 rng(13);
    std::vector<StateId> pool{0, 1, 2, 3, 4};
    for (int i = 0; i < 100; ++i) {
        const StateMetric a = testing::random_pseudometric(rng, 5);
        const StateMetric b = testing::random_pseudometric(rng, 5);
        StateMetric hi(5);
        for (StateId s = 0; s < 5; ++s) {
            for (StateId t = s + 1; t < 5; ++t) hi.set(s, t, std::max(a(s, t), b(s, t)));
        }
        // The pointwise max of two pseudometrics is again one.
        REQUIRE(hi.is_pseudometric(1e-12));
        const auto x = testing::random_distribution(rng, pool, 3);
        const auto y = testing::random_distribution(rng, pool, 3);
        CHECK(kantorovich_distance(a, x, y) <= kantorovich_distance(hi, x, y) + 1e-12);
    }
}

TEST_CASE("convexity of the lifting") {
    std::mt19937 rng(17);
    std::vector<StateId> pool{0, 1, 2, 3, 4};
    for (int i = 0; i < 100; ++i) {
        const StateMetric d = testing::random_pseudometric(rng, 5);
        std::vector<SubDistribution> xs, ys;
        const auto w = testing::grid_weights(rng, 3);
        for (int k = 0; k < 3; ++k) {
            xs.push_back(testing::random_distribution(rng, pool, 3));
            ys.push_back(testing::random_distribution(rng, pool, 3));
        }
        double rhs = 0.0;
        for (int k = 0; k < 3; ++k) rhs += w[k] * kantorovich_distance(d, xs[k], ys[k]);
        CHECK(kantorovich_distance(d, mix(w, xs), mix(w, ys)) <= rhs + 1e-7);
    }
}

TEST_CASE("agreement with exhaustive enumeration of matchings") {
    std::mt19937 rng(19);
    std::vector<StateId> pool{0, 1, 2, 3, 4, 5};
    for (int i = 0; i < 200; ++i) {
        const StateMetric d = testing::random_pseudometric(rng, 6);
        const auto x = testing::random_distribution(rng, pool, 3);
        const auto y = testing::random_distribution(rng, pool, 3);
        const double oracle = testing::brute_force_kantorovich(d, x, y);
        const TransportPlan primal = kantorovich(d, x, y);
        check_plan(d, x, y, primal);
        CHECK(primal.value == doctest::Approx(oracle).epsilon(1e-9));
        CHECK(kantorovich_dual(d, x, y).dual_value == doctest::Approx(oracle).epsilon(1e-7));
    }
}

TEST_CASE("transportation simplex on a degenerate instance") {
    // Equal row and column sums force a degenerate north-west start.
    const std::vector<double> cost{0, 1, 1, 0};
    const std::vector<double> supply{0.5, 0.5};
    const std::vector<double> demand{0.5, 0.5};
    const auto sol = detail::transportation_simplex(cost, supply, demand);
    CHECK(sol.cost == doctest::Approx(0.0));
    CHECK(sol.flow[0] == doctest::Approx(0.5));
    CHECK(sol.flow[3] == doctest::Approx(0.5));
}
