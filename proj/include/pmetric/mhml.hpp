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
#include <unordered_map>
#include <utility>
#include <vector>

#include "pmetric/formula.hpp"
#include "pmetric/plts.hpp"

namespace pmetric {

/**
 * Evaluates metric HML formulas over one model. State formulas are computed
 * for every state at once and cached per syntax node, so formulas with shared
 * subterms cost time proportional to their DAG size.
 */
class Evaluator {
public:
    explicit Evaluator(const Plts& m) : m_(m) {}

    /// Value of f at every state, indexed by StateId.
    const std::vector<double>& values(const StateFormula& f) { return values(f.ptr()); }
    double state(const StateFormula& f, StateId s) { return values(f.ptr()).at(s); }
    /// No mass check: callers decide what subdistributions are admissible.
    double dist(const DistFormula& f, const SubDistribution& d) { return dist(f.ptr(), d); }

private:
    const std::vector<double>& values(const NodePtr& n);
    double dist(const NodePtr& n, const SubDistribution& d);

    const Plts& m_;
    std::unordered_map<const FormulaNode*, std::pair<NodePtr, std::vector<double>>> cache_;
};

/// Value of a state formula at s. Actions unknown to the model never fire.
double eval_state(const Plts& m, const StateFormula& f, StateId s);

/// Value of a distribution formula at a full distribution
/// (std::invalid_argument when the mass differs from 1 by more than 1e-9).
double eval_dist(const Plts& m, const DistFormula& f, const SubDistribution& d);

struct EnumerationOptions {
    std::size_t depth = 3;
    /// Probability literals range over {0, 1/grid, ..., 1}.
    std::size_t grid = 20;
    /// Cap on candidate formulas examined; BudgetExceeded past it.
    std::size_t budget = 5'000'000;
};

struct LowerBound {
    double value = 0.0;
    StateFormula witness = mhml::constant(0.0);
    /// Candidates examined, duplicates included.
    std::size_t examined = 0;
};

/**
 * max |[[phi]](s) - [[phi]](t)| over a finite family of formulas of modal
 * depth at most `depth` with literals on the 1/grid lattice. Candidates with
 * the same values on the states that matter are merged, which keeps the
 * family finite without losing any attainable gap.
 */
LowerBound logical_metric_lower_bound(const Plts& m, StateId s, StateId t, const EnumerationOptions& opts = {});

/**
 * A state formula phi with [[phi]](s) - [[phi]](t) >= d_k(s,t) - eps, where
 * d_k is the k-th Kleene iterate of the bisimulation functor. Built from dual
 * transport potentials and depth-(k-1) witnesses; const(0) when d_k(s,t) <= eps.
 */
StateFormula synthesize_distinguishing(const Plts& m, StateId s, StateId t, std::size_t k, double eps);

}  // namespace pmetric
