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

#include "pmetric/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pmetric::lp {

namespace {

constexpr double kPivotEps = 1e-12;
constexpr double kCostEps = 1e-11;
constexpr std::size_t kMaxPivots = 200000;

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), cells_(rows * (cols + 1), 0.0), basis_(rows, 0), objective_(cols + 1, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return cells_[i * (cols_ + 1) + j]; }
    double at(std::size_t i, std::size_t j) const { return cells_[i * (cols_ + 1) + j]; }
    double& rhs(std::size_t i) { return at(i, cols_); }
    double rhs(std::size_t i) const { return at(i, cols_); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::vector<std::size_t>& basis() { return basis_; }

    // Loads reduced costs for `costs` relative to the current basis.
    void price(const std::vector<double>& costs) {
        for (std::size_t j = 0; j <= cols_; ++j) objective_[j] = j < cols_ ? costs[j] : 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            double cb = costs[basis_[i]];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) objective_[j] -= cb * at(i, j);
        }
    }

    void pivot(std::size_t r, std::size_t c) {
        double p = at(r, c);
        for (std::size_t j = 0; j <= cols_; ++j) at(r, j) /= p;
        at(r, c) = 1.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == r) continue;
            double f = at(i, c);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
            at(i, c) = 0.0;
        }
        double f = objective_[c];
        if (f != 0.0) {
            for (std::size_t j = 0; j <= cols_; ++j) objective_[j] -= f * at(r, j);
            objective_[c] = 0.0;
        }
        basis_[r] = c;
    }

    // Bland's rule on columns [0, allowed). Returns false when unbounded.
    bool optimise(std::size_t allowed, std::size_t& pivots) {
        for (;;) {
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < allowed; ++j) {
                if (objective_[j] < -kCostEps) {
                    enter = j;
                    break;
                }
            }
            if (enter == cols_) return true;

            std::size_t leave = rows_;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < rows_; ++i) {
                double a = at(i, enter);
                if (a <= kPivotEps) continue;
                double ratio = std::max(rhs(i), 0.0) / a;
                if (leave == rows_ || ratio < best - 1e-14 ||
                    (ratio <= best + 1e-14 && basis_[i] < basis_[leave])) {
                    best = std::min(best, ratio);
                    leave = i;
                }
            }
            if (leave == rows_) return false;
            pivot(leave, enter);
            if (++pivots > kMaxPivots) throw std::runtime_error("simplex pivot limit exceeded");
        }
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> cells_;
    std::vector<std::size_t> basis_;
    std::vector<double> objective_;
};

}  // namespace

std::size_t Problem::add_variable(double cost) {
    costs_.push_back(cost);
    return costs_.size() - 1;
}

void Problem::add_constraint(std::vector<std::pair<std::size_t, double>> coefficients, Relation relation,
                             double rhs) {
    for (const auto& [j, a] : coefficients) {
        (void)a;
        if (j >= costs_.size()) throw std::out_of_range("constraint refers to an unknown variable");
    }
    rows_.push_back(Row{std::move(coefficients), relation, rhs});
}

Solution Problem::minimize() const { return solve(false); }
Solution Problem::maximize() const { return solve(true); }

Solution Problem::solve(bool maximise) const {
    const std::size_t n = costs_.size();
    const std::size_t m = rows_.size();

    // Normalise to non-negative right-hand sides.
    std::vector<Row> rows = rows_;
    for (auto& r : rows) {
        if (r.rhs < 0.0) {
            r.rhs = -r.rhs;
            for (auto& c : r.coefficients) c.second = -c.second;
            if (r.relation == Relation::LessEq) {
                r.relation = Relation::GreaterEq;
            } else if (r.relation == Relation::GreaterEq) {
                r.relation = Relation::LessEq;
            }
        }
    }

    std::size_t slack_count = 0;
    std::size_t artificial_count = 0;
    for (const auto& r : rows) {
        if (r.relation != Relation::Equal) ++slack_count;
        if (r.relation != Relation::LessEq) ++artificial_count;
    }
    const std::size_t first_artificial = n + slack_count;
    const std::size_t cols = first_artificial + artificial_count;

    Tableau tab(m, cols);
    std::size_t next_slack = n;
    std::size_t next_artificial = first_artificial;
    for (std::size_t i = 0; i < m; ++i) {
        for (const auto& [j, a] : rows[i].coefficients) tab.at(i, j) += a;
        tab.rhs(i) = rows[i].rhs;
        switch (rows[i].relation) {
            case Relation::LessEq:
                tab.at(i, next_slack) = 1.0;
                tab.basis()[i] = next_slack++;
                break;
            case Relation::GreaterEq:
                tab.at(i, next_slack++) = -1.0;
                tab.at(i, next_artificial) = 1.0;
                tab.basis()[i] = next_artificial++;
                break;
            case Relation::Equal:
                tab.at(i, next_artificial) = 1.0;
                tab.basis()[i] = next_artificial++;
                break;
        }
    }

    std::size_t pivots = 0;
    Solution out;

    if (artificial_count > 0) {
        std::vector<double> phase1(cols, 0.0);
        for (std::size_t j = first_artificial; j < cols; ++j) phase1[j] = 1.0;
        tab.price(phase1);
        tab.optimise(cols, pivots);
        double infeasibility = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (tab.basis()[i] >= first_artificial) infeasibility += tab.rhs(i);
        }
        if (infeasibility > 1e-9) {
            out.status = Status::Infeasible;
            return out;
        }
        // Drive remaining (zero-valued) artificials out of the basis.
        for (std::size_t i = 0; i < m; ++i) {
            if (tab.basis()[i] < first_artificial) continue;
            for (std::size_t j = 0; j < first_artificial; ++j) {
                if (std::abs(tab.at(i, j)) > 1e-9) {
                    tab.pivot(i, j);
                    break;
                }
            }
        }
    }

    std::vector<double> phase2(cols, 0.0);
    for (std::size_t j = 0; j < n; ++j) phase2[j] = maximise ? -costs_[j] : costs_[j];
    tab.price(phase2);
    if (!tab.optimise(first_artificial, pivots)) {
        out.status = Status::Unbounded;
        return out;
    }

    out.status = Status::Optimal;
    out.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t b = tab.basis()[i];
        if (b < n) out.x[b] = std::max(tab.rhs(i), 0.0);
    }
    out.value = 0.0;
    for (std::size_t j = 0; j < n; ++j) out.value += costs_[j] * out.x[j];
    return out;
}

}  // namespace pmetric::lp
