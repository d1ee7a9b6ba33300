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

#include "pmetric/errors.hpp"
#include "pmetric/mhml.hpp"
#include "pmetric/state_metric.hpp"
#include "pmetric/transport.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace pmetric;

namespace {

const char* const kExample = "<a>([<a>tt] & [<b>tt])";

SubDistribution delta1(const Plts& m) { return SubDistribution({{m.state("s1"), 0.2}, {m.state("s2"), 0.8}}); }

}  // namespace

TEST_CASE("the figure 2 formula") {
    const Plts m = testing::bundled("fig2");
    const StateFormula f = parse_state_formula(kExample);
    CHECK(eval_state(m, f, m.state("s")) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(eval_state(m, f, m.state("t")) == doctest::Approx(0.5).epsilon(1e-12));
    const StateFormula a = parse_state_formula("<a>tt");
    CHECK(eval_state(m, a, m.state("s1")) == 1.0);
    CHECK(eval_state(m, a, m.state("s2")) == 0.0);
}

TEST_CASE("constants and negation") {
    const Plts m = testing::bundled("fig1");
    for (StateId s = 0; s < m.num_states(); ++s) {
        CHECK(eval_state(m, mhml::tt(), s) == 1.0);
        CHECK(eval_state(m, mhml::neg(mhml::tt()), s) == 0.0);
        CHECK(eval_state(m, mhml::constant(0.375), s) == 0.375);
    }
    CHECK(eval_state(m, parse_state_formula("<zz>tt"), 0) == 0.0);
}

TEST_CASE("shifting inside and outside a box") {
    const Plts m = testing::bundled("fig2");
    const SubDistribution d = delta1(m);
    CHECK(eval_dist(m, parse_dist_formula("[<b>tt] - 0.5"), d) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(eval_dist(m, parse_dist_formula("[<b>tt - 0.5]"), d) == doctest::Approx(0.4).epsilon(1e-12));
    const StateFormula psi = parse_state_formula("<b>tt - 0.5");
    const double mixed = 0.2 * eval_state(m, psi, m.state("s1")) + 0.8 * eval_state(m, psi, m.state("s2"));
    CHECK(mixed == doctest::Approx(0.4).epsilon(1e-12));
    const DistFormula twice = parse_dist_formula("[<b>tt] & [<b>tt]");
    CHECK(eval_dist(m, twice, d) == eval_dist(m, parse_dist_formula("[<b>tt]"), d));
    CHECK_THROWS_AS(eval_dist(m, twice, SubDistribution({{0, 0.5}})), std::invalid_argument);
}

TEST_CASE("connective identities") {
    std::mt19937 rng(53);
    for (int i = 0; i < 100; ++i) {
        const Plts m = testing::random_model(rng);
        const StateFormula f = testing::random_state_formula(rng, m, 2);
        const double p = testing::random_literal(rng);
        Evaluator ev(m);
        for (StateId s = 0; s < m.num_states(); ++s) {
            const double v = ev.state(f, s);
            CHECK(ev.state(mhml::neg(mhml::neg(f)), s) == doctest::Approx(v).epsilon(1e-15));
            CHECK(ev.state(mhml::minus(f, 0.0), s) == v);
            CHECK(ev.state(mhml::plus(f, p), s) == doctest::Approx(std::min(v + p, 1.0)).epsilon(1e-12));
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("boxes are linear in the distribution") {
    std::mt19937 rng(59);
    for (int i = 0; i < 50; ++i) {
        const Plts m = testing::random_model(rng);
        std::vector<StateId> pool;
        for (StateId s = 0; s < m.num_states(); ++s) pool.push_back(s);
        const auto x = testing::random_distribution(rng, pool, 3);
        const auto y = testing::random_distribution(rng, pool, 3);
        const double p = testing::random_literal(rng);
        const DistFormula box = mhml::box(testing::random_state_formula(rng, m, 2));
        const double w[] = {p, 1.0 - p};
        const SubDistribution parts[] = {x, y};
        CHECK(eval_dist(m, box, mix(w, parts)) ==
              doctest::Approx(p * eval_dist(m, box, x) + (1 - p) * eval_dist(m, box, y)).epsilon(1e-12));
    }
}

TEST_CASE("formulas are non-expansive") {
    std::mt19937 rng(61);
    for (int i = 0; i < 60; ++i) {
        const Plts m = testing::random_model(rng);
        const StateMetric delta = fixpoint(m).metric;
        Evaluator ev(m);
        const StateFormula f = testing::random_state_formula(rng, m, 3);
        for (StateId s = 0; s < m.num_states(); ++s) {
            for (StateId t = 0; t < m.num_states(); ++t)
                CHECK(std::abs(ev.state(f, s) - ev.state(f, t)) <= delta(s, t) + 1e-7);
        }
        std::vector<StateId> pool;
        for (StateId s = 0; s < m.num_states(); ++s) pool.push_back(s);
        const auto x = testing::random_distribution(rng, pool, 3);
        const auto y = testing::random_distribution(rng, pool, 3);
        const DistFormula g = testing::random_dist_formula(rng, m, 2);
        CHECK(std::abs(ev.dist(g, x) - ev.dist(g, y)) <= kantorovich_distance(delta, x, y) + 1e-7);
    }
}

TEST_CASE("enumerated lower bound on figure 2") {
    const Plts m = testing::bundled("fig2");
    const LowerBound lb = logical_metric_lower_bound(m, m.state("s"), m.state("t"), {2, 10});
    CHECK(lb.value == doctest::Approx(0.3).epsilon(1e-9));
    Evaluator ev(m);
    CHECK(std::abs(ev.state(lb.witness, m.state("s")) - ev.state(lb.witness, m.state("t"))) == lb.value);
    CHECK(modal_depth(lb.witness) <= 2);
    const LowerBound same = logical_metric_lower_bound(m, m.state("s"), m.state("s"), {2, 10});
    CHECK(same.value == 0.0);
}

TEST_CASE("enumerated lower bound on figure 1") {
    const Plts m = testing::bundled("fig1");
    const LowerBound lb = logical_metric_lower_bound(m, m.state("s"), m.state("t"), {4, 2});
    CHECK(lb.value == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("lower bound is monotone and sound") {
    std::mt19937 rng(67);
    testing::ModelShape shape;
    shape.max_states = 4;
    for (int i = 0; i < 15; ++i) {
        const Plts m = testing::random_model(rng, shape);
        const StateMetric delta = fixpoint(m).metric;
        const StateId s = 0;
        const StateId t = 1;
        // value[depth - 1][i] for grids 1, 2, 4.
        double value[2][3];
        const std::size_t grids[] = {1, 2, 4};
        for (std::size_t depth = 1; depth <= 2; ++depth) {
            for (std::size_t g = 0; g < 3; ++g) {
                const double v = logical_metric_lower_bound(m, s, t, {depth, grids[g]}).value;
                value[depth - 1][g] = v;
                CHECK(v <= delta(s, t) + 1e-7);
                CHECK(v <= kleene_iterate(m, depth)(s, t) + 1e-7);
                if (g > 0) CHECK(v >= value[depth - 1][g - 1] - 1e-12);
                if (depth > 1) CHECK(v >= value[depth - 2][g] - 1e-12);
            }
        }
    }
}

TEST_CASE("enumeration budget") {
    const Plts m = testing::bundled("fig2");
    EnumerationOptions opts{2, 10, 1000};
    CHECK_THROWS_AS(logical_metric_lower_bound(m, m.state("s"), m.state("t"), opts), BudgetExceeded);
}

TEST_CASE("synthesised witnesses") {
    SUBCASE("figure 2") {
        const Plts m = testing::bundled("fig2");
        const StateFormula f = synthesize_distinguishing(m, m.state("s"), m.state("t"), 2, 0.01);
        const double gap = std::abs(eval_state(m, f, m.state("s")) - eval_state(m, f, m.state("t")));
        CHECK(gap >= 0.29);
    }
    SUBCASE("figure 1") {
        const Plts m = testing::bundled("fig1");
        const StateFormula f = synthesize_distinguishing(m, m.state("s"), m.state("t"), 4, 0.01);
        const double gap = std::abs(eval_state(m, f, m.state("s")) - eval_state(m, f, m.state("t")));
        CHECK(gap >= 0.49);
    }
    SUBCASE("identical states") {
        const Plts m = testing::bundled("fig1");
        const StateFormula f = synthesize_distinguishing(m, 0, 0, 3, 0.01);
        CHECK(same_formula(f.ptr(), mhml::constant(0.0).ptr()));
    }
}

TEST_CASE("synthesis meets its contract on random models") {
    std::mt19937 rng(71);
    for (bool deterministic : {false, true}) {
        testing::ModelShape shape;
        shape.deterministic = deterministic;
        shape.max_states = 5;
        for (int i = 0; i < 50; ++i) {
            const Plts m = testing::random_model(rng, shape);
            const std::size_t k = 3;
            const StateMetric dk = kleene_iterate(m, k);
            Evaluator ev(m);
            for (StateId s = 0; s < m.num_states(); ++s) {
                for (StateId t = s + 1; t < m.num_states(); ++t) {
                    const StateFormula f = synthesize_distinguishing(m, s, t, k, 0.01);
                    CHECK(std::abs(ev.state(f, s) - ev.state(f, t)) >= dk(s, t) - 0.01);
                    if (deterministic) CHECK_FALSE(uses_distribution_connectives(f));
                }
            }
        }
    }
}
