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
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace pmetric;

TEST_CASE("first functor step on figure 1") {
    const Plts m = testing::bundled("fig1");
    const StateMetric f = functor_step(m, StateMetric(m.num_states()));
    CHECK(f(m.state("s3"), m.state("t3")) == 1.0);
    CHECK(f(m.state("s2"), m.state("t3")) == 0.0);
    for (StateId s = 0; s < m.num_states(); ++s) CHECK(f(s, s) == 0.0);
}

TEST_CASE("bisimilarity metric of figure 1") {
    const Plts m = testing::bundled("fig1");
    const FixpointResult r = fixpoint(m);
    CHECK(r.converged);
    CHECK(r.residual < 1e-9);
    auto d = [&](const char* a, const char* b) { return r.metric(m.state(a), m.state(b)); };
    CHECK(d("s", "t") == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(d("s1", "t1") == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(d("s1", "t2") == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(d("s2", "t3") == 0.0);
    CHECK(d("s3", "t3") == 1.0);
    for (StateId s = 0; s < m.num_states(); ++s) CHECK(r.metric(s, s) == 0.0);
}

TEST_CASE("bisimilarity metric of figure 2") {
    const Plts m = testing::bundled("fig2");
    const FixpointResult r = fixpoint(m);
    CHECK(r.converged);
    CHECK(r.metric(m.state("s"), m.state("t")) == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("kernel of figure 1") {
    const Plts m = testing::bundled("fig1");
    const Partition p = kernel(fixpoint(m).metric, 1e-6);
    CHECK(p.transitive);
    CHECK(p.same_block(m.state("s2"), m.state("t3")));
    CHECK(p.same_block(m.state("s3"), m.state("t4")));
    CHECK(p.same_block(m.state("s4"), m.state("t5")));
    CHECK_FALSE(p.same_block(m.state("s"), m.state("t")));
    CHECK(p == bisimilarity_oracle(m));
}

TEST_CASE("partition refinement oracle") {
    const Plts m = testing::bundled("fig1");
    const Partition p = bisimilarity_oracle(m);
    CHECK(p.same_block(m.state("s2"), m.state("t3")));
    CHECK_FALSE(p.same_block(m.state("s"), m.state("t")));
    for (StateId s = 0; s < m.num_states(); ++s) CHECK(p.same_block(s, s));

    const Plts single({"only"}, {"a"}, {});
    CHECK(kernel(fixpoint(single).metric, 1e-6).blocks.size() == 1);
    CHECK(bisimilarity_oracle(single).blocks.size() == 1);
}

TEST_CASE("kernel flags a non-transitive closure") {
    StateMetric d(3);
    d.set(0, 1, 0.0);
    d.set(1, 2, 1e-7);
    d.set(0, 2, 0.5);
    const Partition p = kernel(d, 1e-6);
    CHECK(p.blocks.size() == 1);
    CHECK_FALSE(p.transitive);
}

TEST_CASE("the functor is monotone") {
    std::mt19937 rng(37);
    for (int i = 0; i < 40; ++i) {
        const Plts m = testing::random_model(rng);
        const std::size_t n = m.num_states();
        const StateMetric a = testing::random_pseudometric(rng, n);
        const StateMetric b = testing::random_pseudometric(rng, n);
        StateMetric hi(n);
        for (StateId s = 0; s < n; ++s) {
            for (StateId t = s + 1; t < n; ++t) hi.set(s, t, std::max(a(s, t), b(s, t)));
        }
        CHECK(below(functor_step(m, a), functor_step(m, hi), 1e-12));
    }
}

TEST_CASE("iterates climb and stay pseudometrics") {
    std::mt19937 rng(41);
    for (int i = 0; i < 30; ++i) {
        const Plts m = testing::random_model(rng);
        FixpointOptions opts;
        opts.keep_iterates = true;
        const FixpointResult r = fixpoint(m, opts);
        REQUIRE(r.iterates.size() == r.iterations + 1);
        for (std::size_t k = 0; k + 1 < r.iterates.size(); ++k) {
            CHECK(below(r.iterates[k], r.iterates[k + 1], 1e-12));
            CHECK(r.iterates[k + 1].is_pseudometric(1e-7));
        }
        CHECK(sup_distance(functor_step(m, r.metric), r.metric) <= r.residual + 1e-9);
        if (r.converged) CHECK(r.residual < opts.tol);
    }
}

TEST_CASE("non-convergence is reported, not thrown") {
    const Plts m = testing::bundled("fig1");
    FixpointOptions opts;
    opts.max_iter = 1;
    const FixpointResult r = fixpoint(m, opts);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 1);
    CHECK(r.residual > 0.0);
    CHECK(default_max_iterations(11) == 1310);
}

TEST_CASE("kernel matches partition refinement on random models") {
    std::mt19937 rng(43);
    testing::ModelShape shape;
    shape.max_states = 8;
    for (int i = 0; i < 40; ++i) {
        const Plts m = testing::random_model(rng, shape);
        CHECK(kernel(fixpoint(m).metric, 1e-6) == bisimilarity_oracle(m));
    }
}

TEST_CASE("kleene iterates") {
    const Plts m = testing::bundled("fig1");
    CHECK(kleene_iterate(m, 0)(m.state("s"), m.state("t")) == 0.0);
    CHECK(kleene_iterate(m, 4)(m.state("s"), m.state("t")) == doctest::Approx(0.5));
}
