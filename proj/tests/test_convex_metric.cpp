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

#include "pmetric/convex_metric.hpp"
#include "pmetric/lifting.hpp"
#include "pmetric/state_metric.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace pmetric;

TEST_CASE("convex metric of the bundled figures") {
    const Plts fig1 = testing::bundled("fig1");
    const FixpointResult c1 = convex_fixpoint(fig1);
    CHECK(c1.converged);
    CHECK(c1.metric(fig1.state("s"), fig1.state("t")) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(sup_distance(c1.metric, fixpoint(fig1).metric) <= 1e-9);

    const Plts fig2 = testing::bundled("fig2");
    const FixpointResult c2 = convex_fixpoint(fig2);
    CHECK(c2.metric(fig2.state("s"), fig2.state("t")) == doctest::Approx(0.0).epsilon(1e-9));
    for (StateId s = 0; s < fig2.num_states(); ++s) CHECK(c2.metric(s, s) == 0.0);
}

TEST_CASE("convex metric never exceeds the plain one") {
    std::mt19937 rng(89);
    for (int i = 0; i < 30; ++i) {
        const Plts m = testing::random_model(rng);
        CHECK(below(convex_fixpoint(m).metric, fixpoint(m).metric, 1e-9));
    }
}

TEST_CASE("singleton successor sets make the two metrics agree") {
    std::mt19937 rng(97);
    testing::ModelShape shape;
    shape.deterministic = true;
    for (int i = 0; i < 30; ++i) {
        const Plts m = testing::random_model(rng, shape);
        CHECK(sup_distance(convex_fixpoint(m).metric, fixpoint(m).metric) <= 1e-6);
    }
}

TEST_CASE("saturation") {
    const Plts m = testing::bundled("fig2");
    CHECK(saturate(m, 1) == m);
    const Plts half = saturate(m, 2);
    const auto der = half.successors(half.state("s"), half.action("a"));
    CHECK(der.size() == 3);
    const auto orig = m.successors(m.state("s"), m.action("a"));
    const double w[] = {0.5, 0.5};
    CHECK(der[2] == mix(w, orig));
    // Both sides gain mixtures; t's half-and-half blend of its first two moves has a-mass 0.35.
    CHECK(fixpoint(half).metric(half.state("s"), half.state("t")) == doctest::Approx(0.15).epsilon(1e-9));

    // Finer grids only add responses, so the distance cannot grow.
    const double coarse = fixpoint(saturate(m, 3)).metric(m.state("s"), m.state("t"));
    const double fine = fixpoint(saturate(m, 6)).metric(m.state("s"), m.state("t"));
    CHECK(fine <= coarse + 1e-9);
    CHECK(fine >= convex_fixpoint(m).metric(m.state("s"), m.state("t")) - 1e-9);
}

TEST_CASE("combined transitions are matched within the fixpoint distance") {
    for (const char* name : {"fig1", "fig2"}) {
        const Plts m = testing::bundled(name);
        const StateMetric dc = convex_fixpoint(m).metric;
        for (std::size_t grid : {2, 4}) {
            const Plts sat = saturate(m, grid);
            for (StateId s = 0; s < m.num_states(); ++s) {
                for (StateId t = 0; t < m.num_states(); ++t) {
                    for (ActionId a = 0; a < m.num_actions(); ++a) {
                        const auto response = m.successors(t, a);
                        if (response.empty()) continue;
                        for (const auto& combined : sat.successors(s, a))
                            CHECK(distance_to_hull(dc, combined, response) <= dc(s, t) + 1e-9);
                    }
                }
            }
        }
    }
}
