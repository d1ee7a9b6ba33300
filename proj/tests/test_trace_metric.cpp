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

#include "pmetric/dist_metric.hpp"
#include "pmetric/mhml.hpp"
#include "pmetric/trace_metric.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace pmetric;

TEST_CASE("trace probabilities on figure 1") {
    const Plts m = testing::bundled("fig1");
    const Trace abc = parse_trace(m, "a b c");
    CHECK(trace_prob(m, m.state("s"), abc) == 0.5);
    CHECK(trace_prob(m, m.state("t"), abc) == 0.5);
    CHECK(trace_prob(m, m.state("s2"), parse_trace(m, "d")) == 0.0);
    for (StateId s = 0; s < m.num_states(); ++s) CHECK(trace_prob(m, s, {}) == 1.0);
    CHECK_THROWS_AS(parse_trace(m, "a zz"), std::out_of_range);
    CHECK(format_trace(m, abc) == "a b c");
}

TEST_CASE("trace distances on figure 1") {
    const Plts m = testing::bundled("fig1");
    const TraceDistance st = trace_distance(m, m.state("s"), m.state("t"), 4);
    CHECK(st.value == 0.0);
    const TraceDistance leaf = trace_distance(m, m.state("s3"), m.state("t3"), 1);
    CHECK(leaf.value == 1.0);
    CHECK(format_trace(m, leaf.witness) == "c");
    CHECK(trace_distance(m, 0, 0, 4).value == 0.0);
}

TEST_CASE("trace formulas") {
    CHECK(to_string(trace_formula(std::vector<std::string>{})) == "tt");
    const StateFormula ab = trace_formula(std::vector<std::string>{"a", "b"});
    CHECK(same_formula(ab.ptr(), parse_state_formula("<a><b>tt").ptr()));
    CHECK(is_trace_formula(ab));
}

TEST_CASE("formula values equal trace probabilities bit for bit") {
    std::mt19937 rng(101);
    for (int i = 0; i < 100; ++i) {
        const Plts m = testing::random_model(rng);
        std::uniform_int_distribution<std::size_t> len(0, 4), act(0, m.num_actions() - 1), st(0, m.num_states() - 1);
        Trace tr(len(rng));
        for (auto& a : tr) a = static_cast<ActionId>(act(rng));
        const StateId s = static_cast<StateId>(st(rng));
        CHECK(eval_state(m, trace_formula(m, tr), s) == trace_prob(m, s, tr));
    }
}

TEST_CASE("monotone in the length bound and coarser than the distribution metric") {
    std::mt19937 rng(103);
    testing::ModelShape shape;
    shape.acyclic = true;
    shape.max_states = 5;
    for (int i = 0; i < 30; ++i) {
        const Plts m = testing::random_model(rng, shape);
        double previous = 0.0;
        for (std::size_t len = 0; len <= 5; ++len) {
            const double v = trace_distance(m, 0, 1, len).value;
            CHECK(v >= previous);
            previous = v;
        }
        const double d = dist_fixpoint(m, {{SubDistribution::dirac(0), SubDistribution::dirac(1)}}, 6)[0];
        CHECK(previous <= d + 1e-9);
    }
}
