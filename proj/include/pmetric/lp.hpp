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
#include <utility>
#include <vector>

// Small dense linear programs: two-phase tableau simplex with Bland's rule.
// Sized for the few hundred variables that show up in desk-scale metric
// computations; no attempt at sparsity.

namespace pmetric::lp {

enum class Relation { LessEq, Equal, GreaterEq };
enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
    Status status = Status::Infeasible;
    double value = 0.0;
    std::vector<double> x;
};

/// Variables are implicitly non-negative.
class Problem {
public:
    std::size_t add_variable(double cost);
    void add_constraint(std::vector<std::pair<std::size_t, double>> coefficients, Relation relation,
                        double rhs);

    std::size_t num_variables() const noexcept { return costs_.size(); }
    std::size_t num_constraints() const noexcept { return rows_.size(); }

    Solution minimize() const;
    Solution maximize() const;

private:
    struct Row {
        std::vector<std::pair<std::size_t, double>> coefficients;
        Relation relation;
        double rhs;
    };

    Solution solve(bool maximise) const;

    std::vector<double> costs_;
    std::vector<Row> rows_;
};

}  // namespace pmetric::lp
