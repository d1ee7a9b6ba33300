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

#include "pmetric/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pmetric/lp.hpp"

namespace pmetric {

double sup_distance(const StateMetric& a, const StateMetric& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("sup_distance: size mismatch");
    double best = 0.0;
    for (std::size_t i = 0; i < a.values_.size(); ++i) best = std::max(best, std::abs(a.values_[i] - b.values_[i]));
    return best;
}

bool below(const StateMetric& a, const StateMetric& b, double slack) {
    if (a.n_ != b.n_) throw std::invalid_argument("below: size mismatch");
    for (std::size_t i = 0; i < a.values_.size(); ++i) {
        if (a.values_[i] > b.values_[i] + slack) return false;
    }
    return true;
}

bool StateMetric::is_pseudometric(double tol) const {
    for (std::size_t s = 0; s < n_; ++s) {
        if (std::abs((*this)(s, s)) > tol) return false;
        for (std::size_t t = 0; t < n_; ++t) {
            double v = (*this)(s, t);
            if (v < -tol || v > 1.0 + tol) return false;
            if (std::abs(v - (*this)(t, s)) > tol) return false;
            for (std::size_t u = 0; u < n_; ++u) {
                if (v > (*this)(s, u) + (*this)(u, t) + tol) return false;
            }
        }
    }
    return true;
}

StateMetric StateMetric::discrete(std::size_t n) {
    StateMetric d(n);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = s + 1; t < n; ++t) d.set(s, t, 1.0);
    }
    return d;
}

namespace detail {

namespace {

constexpr double kReducedCostEps = 1e-12;
constexpr std::size_t kMaxIterations = 100000;

struct Basis {
    std::size_t rows;
    std::size_t cols;
    std::vector<char> in_basis;  // rows x cols

    bool contains(std::size_t i, std::size_t j) const { return in_basis[i * cols + j] != 0; }
    void set(std::size_t i, std::size_t j, bool v) { in_basis[i * cols + j] = v ? 1 : 0; }

    // Tree nodes: rows are 0..rows-1, columns are rows..rows+cols-1.
    std::vector<std::vector<std::size_t>> adjacency() const {
        std::vector<std::vector<std::size_t>> adj(rows + cols);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                if (!contains(i, j)) continue;
                adj[i].push_back(rows + j);
                adj[rows + j].push_back(i);
            }
        }
        return adj;
    }
};

void solve_potentials(const Basis& basis, std::span<const double> cost, std::vector<double>& u,
                      std::vector<double>& v) {
    const std::size_t m = basis.rows;
    const std::size_t n = basis.cols;
    auto adj = basis.adjacency();
    std::vector<double> pot(m + n, 0.0);
    std::vector<char> seen(m + n, 0);
    std::vector<std::size_t> stack;
    for (std::size_t root = 0; root < m + n; ++root) {
        // The basis is a spanning tree, so a single root suffices; the loop
        // only guards against a disconnected basis after numerical trouble.
        if (seen[root]) continue;
        seen[root] = 1;
        pot[root] = 0.0;
        stack.push_back(root);
        while (!stack.empty()) {
            std::size_t x = stack.back();
            stack.pop_back();
            for (std::size_t y : adj[x]) {
                if (seen[y]) continue;
                seen[y] = 1;
                // u_i + v_j = c_ij
                if (x < m) {
                    pot[y] = cost[x * n + (y - m)] - pot[x];
                } else {
                    pot[y] = cost[y * n + (x - m)] - pot[x];
                }
                stack.push_back(y);
            }
        }
    }
    u.assign(pot.begin(), pot.begin() + static_cast<std::ptrdiff_t>(m));
    v.assign(pot.begin() + static_cast<std::ptrdiff_t>(m), pot.end());
}

// Cells on the tree path from row node `row` to column node `col`, in order.
std::vector<std::pair<std::size_t, std::size_t>> tree_path(const Basis& basis, std::size_t row, std::size_t col) {
    const std::size_t m = basis.rows;
    auto adj = basis.adjacency();
    const std::size_t target = m + col;
    std::vector<std::size_t> parent(adj.size(), std::numeric_limits<std::size_t>::max());
    std::vector<std::size_t> queue{row};
    parent[row] = row;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        std::size_t x = queue[head];
        if (x == target) break;
        for (std::size_t y : adj[x]) {
            if (parent[y] != std::numeric_limits<std::size_t>::max()) continue;
            parent[y] = x;
            queue.push_back(y);
        }
    }
    if (parent[target] == std::numeric_limits<std::size_t>::max())
        throw std::logic_error("transportation basis is not a spanning tree");

    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t x = target; x != row; x = parent[x]) {
        std::size_t y = parent[x];
        std::size_t r = x < m ? x : y;
        std::size_t c = x < m ? y - m : x - m;
        cells.emplace_back(r, c);
    }
    std::reverse(cells.begin(), cells.end());
    return cells;
}

}  // namespace

TransportSolution transportation_simplex(std::span<const double> cost, std::span<const double> supply,
                                         std::span<const double> demand) {
    const std::size_t m = supply.size();
    const std::size_t n = demand.size();
    if (m == 0 || n == 0) throw std::invalid_argument("transportation problem needs non-empty margins");
    if (cost.size() != m * n) throw std::invalid_argument("cost matrix has the wrong size");

    double total_supply = 0.0;
    double total_demand = 0.0;
    for (double a : supply) total_supply += a;
    for (double b : demand) total_demand += b;
    if (std::abs(total_supply - total_demand) > 1e-9)
        throw std::invalid_argument("unbalanced transportation problem");

    std::vector<double> rem_supply(supply.begin(), supply.end());
    std::vector<double> rem_demand(demand.begin(), demand.end());
    for (double& b : rem_demand) b *= total_supply / total_demand;

    TransportSolution sol;
    sol.flow.assign(m * n, 0.0);
    Basis basis{m, n, std::vector<char>(m * n, 0)};

    // North-west corner.
    for (std::size_t i = 0, j = 0;;) {
        double q = std::max(0.0, std::min(rem_supply[i], rem_demand[j]));
        sol.flow[i * n + j] = q;
        basis.set(i, j, true);
        rem_supply[i] -= q;
        rem_demand[j] -= q;
        if (i == m - 1 && j == n - 1) break;
        if (i == m - 1) {
            ++j;
        } else if (j == n - 1 || rem_supply[i] <= rem_demand[j]) {
            ++i;
        } else {
            ++j;
        }
    }

    for (std::size_t iter = 0;; ++iter) {
        if (iter > kMaxIterations) throw std::runtime_error("transportation simplex did not terminate");
        solve_potentials(basis, cost, sol.row_potential, sol.col_potential);

        std::size_t enter_i = m;
        std::size_t enter_j = n;
        for (std::size_t i = 0; i < m && enter_i == m; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (basis.contains(i, j)) continue;
                double reduced = cost[i * n + j] - sol.row_potential[i] - sol.col_potential[j];
                if (reduced < -kReducedCostEps) {
                    enter_i = i;
                    enter_j = j;
                    break;
                }
            }
        }
        if (enter_i == m) break;

        // Entering cell gains, path cells alternate starting with a loss.
        auto path = tree_path(basis, enter_i, enter_j);
        double theta = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < path.size(); k += 2) {
            theta = std::min(theta, sol.flow[path[k].first * n + path[k].second]);
        }
        std::pair<std::size_t, std::size_t> leaving{m, n};
        for (std::size_t k = 0; k < path.size(); k += 2) {
            if (sol.flow[path[k].first * n + path[k].second] <= theta + 1e-15 && path[k] < leaving) {
                leaving = path[k];
            }
        }
        for (std::size_t k = 0; k < path.size(); ++k) {
            double& f = sol.flow[path[k].first * n + path[k].second];
            f += (k % 2 == 0) ? -theta : theta;
            if (f < 0.0) f = 0.0;
        }
        sol.flow[enter_i * n + enter_j] += theta;
        sol.flow[leaving.first * n + leaving.second] = 0.0;
        basis.set(leaving.first, leaving.second, false);
        basis.set(enter_i, enter_j, true);
    }

    sol.cost = 0.0;
    for (std::size_t k = 0; k < m * n; ++k) sol.cost += cost[k] * sol.flow[k];
    return sol;
}

}  // namespace detail

namespace {

void require_full(const SubDistribution& d, const char* which) {
    if (std::abs(d.mass() - 1.0) > kMassTolerance) {
        throw std::invalid_argument(std::string("kantorovich: ") + which + " is not a full distribution");
    }
}

double dual_objective(const SubDistribution& from, const SubDistribution& to, const std::vector<double>& x) {
    double value = 0.0;
    for (const auto& [s, p] : from.entries()) value += p * x[s];
    for (const auto& [s, p] : to.entries()) value -= p * x[s];
    return value;
}

}  // namespace

TransportPlan kantorovich(const StateMetric& d, const SubDistribution& from, const SubDistribution& to) {
    require_full(from, "left argument");
    require_full(to, "right argument");

    auto rows = from.entries();
    auto cols = to.entries();
    std::vector<double> cost(rows.size() * cols.size());
    std::vector<double> supply;
    std::vector<double> demand;
    for (const auto& [s, p] : rows) supply.push_back(p);
    for (const auto& [t, q] : cols) demand.push_back(q);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) cost[i * cols.size() + j] = d(rows[i].first, cols[j].first);
    }

    auto sol = detail::transportation_simplex(cost, supply, demand);

    TransportPlan plan;
    plan.value = std::clamp(sol.cost, 0.0, 1.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            double f = sol.flow[i * cols.size() + j];
            if (f > 0.0) plan.matching.push_back({rows[i].first, cols[j].first, f});
        }
    }

    // c-transform of the column potentials, then shift into [0,1].
    const std::size_t n = d.size();
    plan.duals.assign(n, 0.0);
    double lowest = std::numeric_limits<double>::infinity();
    for (StateId s = 0; s < n; ++s) {
        double x = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < cols.size(); ++j) x = std::min(x, d(s, cols[j].first) - sol.col_potential[j]);
        plan.duals[s] = x;
        lowest = std::min(lowest, x);
    }
    for (double& x : plan.duals) x = std::clamp(x - lowest, 0.0, 1.0);
    plan.dual_value = dual_objective(from, to, plan.duals);
    return plan;
}

TransportPlan kantorovich_dual(const StateMetric& d, const SubDistribution& from, const SubDistribution& to) {
    require_full(from, "left argument");
    require_full(to, "right argument");

    std::vector<StateId> support;
    for (const auto& [s, p] : from.entries()) support.push_back(s);
    for (const auto& [s, p] : to.entries()) support.push_back(s);
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());

    lp::Problem problem;
    for (StateId s : support) problem.add_variable(from[s] - to[s]);
    for (std::size_t i = 0; i < support.size(); ++i) {
        problem.add_constraint({{i, 1.0}}, lp::Relation::LessEq, 1.0);
        for (std::size_t j = 0; j < support.size(); ++j) {
            if (i == j) continue;
            problem.add_constraint({{i, 1.0}, {j, -1.0}}, lp::Relation::LessEq, d(support[i], support[j]));
        }
    }
    auto sol = problem.maximize();
    if (sol.status != lp::Status::Optimal) throw std::runtime_error("kantorovich dual program not solved");

    // Lipschitz extension to every state of the table.
    TransportPlan plan;
    plan.duals.assign(d.size(), 0.0);
    for (StateId s = 0; s < d.size(); ++s) {
        double x = 1.0;
        for (std::size_t i = 0; i < support.size(); ++i) x = std::min(x, sol.x[i] + d(support[i], s));
        plan.duals[s] = std::clamp(x, 0.0, 1.0);
    }
    plan.dual_value = dual_objective(from, to, plan.duals);
    plan.value = std::clamp(plan.dual_value, 0.0, 1.0);
    return plan;
}

double kantorovich_distance(const StateMetric& d, const SubDistribution& from, const SubDistribution& to) {
    return kantorovich(d, from, to).value;
}

}  // namespace pmetric
