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

#include "pmetric/mhml.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <unordered_set>

#include "pmetric/errors.hpp"
#include "pmetric/state_metric.hpp"
#include "pmetric/transport.hpp"

namespace pmetric {

const std::vector<double>& Evaluator::values(const NodePtr& n) {
    if (auto it = cache_.find(n.get()); it != cache_.end()) return it->second.second;
    const std::size_t size = m_.num_states();
    std::vector<double> out(size, 0.0);
    switch (n->op) {
        case Op::True:
            std::fill(out.begin(), out.end(), 1.0);
            break;
        case Op::Not: {
            const auto& v = values(n->left);
            for (std::size_t s = 0; s < size; ++s) out[s] = 1.0 - v[s];
            break;
        }
        case Op::Minus: {
            const auto& v = values(n->left);
            for (std::size_t s = 0; s < size; ++s) out[s] = std::max(v[s] - n->literal, 0.0);
            break;
        }
        case Op::And: {
            const auto& l = values(n->left);
            const auto& r = values(n->right);
            for (std::size_t s = 0; s < size; ++s) out[s] = std::min(l[s], r[s]);
            break;
        }
        case Op::Diamond: {
            if (!m_.has_action(n->action)) break;
            const ActionId a = m_.action(n->action);
            for (StateId s = 0; s < size; ++s) {
                double best = 0.0;
                for (std::size_t id : m_.transition_ids(s, a))
                    best = std::max(best, dist(n->left, m_.transitions()[id].target));
                out[s] = best;
            }
            break;
        }
        case Op::Box:
            throw std::logic_error("distribution formula evaluated as a state formula");
    }
    return cache_.emplace(n.get(), std::make_pair(n, std::move(out))).first->second.second;
}

double Evaluator::dist(const NodePtr& n, const SubDistribution& d) {
    switch (n->op) {
        case Op::Box: {
            const auto& v = values(n->left);
            double sum = 0.0;
            for (const auto& [s, p] : d.entries()) sum += p * v[s];
            return sum;
        }
        case Op::Minus:
            return std::max(dist(n->left, d) - n->literal, 0.0);
        case Op::And:
            return std::min(dist(n->left, d), dist(n->right, d));
        default:
            throw std::logic_error("state formula evaluated as a distribution formula");
    }
}

double eval_state(const Plts& m, const StateFormula& f, StateId s) {
    if (s >= m.num_states()) throw std::out_of_range("eval_state: unknown state");
    Evaluator ev(m);
    return ev.state(f, s);
}

double eval_dist(const Plts& m, const DistFormula& f, const SubDistribution& d) {
    if (std::abs(d.mass() - 1.0) > kMassTolerance) throw std::invalid_argument("eval_dist: distribution mass must be 1");
    for (const auto& [s, p] : d.entries()) {
        if (s >= m.num_states()) throw std::out_of_range("eval_dist: unknown state");
    }
    Evaluator ev(m);
    return ev.dist(f, d);
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

struct KeyHash {
    std::size_t operator()(const std::vector<std::int64_t>& k) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        for (std::int64_t x : k) {
            h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

struct Candidate {
    NodePtr node;
    std::vector<double> v;
};

/// Formulas kept up to equality of their value vectors (rounded to 1e-9).
class Pool {
public:
    Pool(std::size_t& examined, std::size_t budget) : examined_(&examined), budget_(budget) {}

    template <class Make>
    bool offer(std::vector<double> v, Make&& make) {
        if (++*examined_ > budget_) throw BudgetExceeded("formula enumeration exceeded its budget of " +
                                                        std::to_string(budget_) + " candidates");
        std::vector<std::int64_t> key(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) key[i] = std::llround(v[i] * 1e9);
        if (!seen_.insert(std::move(key)).second) return false;
        items.push_back({make(), std::move(v)});
        return true;
    }

    std::vector<Candidate> items;

private:
    std::size_t* examined_;
    std::size_t budget_;
    std::unordered_set<std::vector<std::int64_t>, KeyHash> seen_;
};

std::vector<std::vector<StateId>> reachable_layers(const Plts& m, StateId s, StateId t, std::size_t depth) {
    std::vector<std::vector<StateId>> layers;
    std::vector<bool> in(m.num_states(), false);
    in[s] = in[t] = true;
    for (std::size_t k = 0; k <= depth; ++k) {
        std::vector<StateId> layer;
        for (StateId u = 0; u < m.num_states(); ++u) {
            if (in[u]) layer.push_back(u);
        }
        for (StateId u : layer) {
            for (ActionId a = 0; a < m.num_actions(); ++a) {
                for (std::size_t id : m.transition_ids(u, a)) {
                    for (const auto& [w, p] : m.transitions()[id].target.entries()) in[w] = true;
                }
            }
        }
        layers.push_back(std::move(layer));
    }
    return layers;
}

StateFormula state_of(const NodePtr& n) { return StateFormula(n); }
DistFormula dist_of(const NodePtr& n) { return DistFormula(n); }

}  // namespace

LowerBound logical_metric_lower_bound(const Plts& m, StateId s, StateId t, const EnumerationOptions& opts) {
    if (opts.depth < 1 || opts.grid < 1) throw std::invalid_argument("depth and grid must be at least 1");
    if (s >= m.num_states() || t >= m.num_states()) throw std::out_of_range("unknown state");
    LowerBound result;
    if (s == t) return result;

    const std::size_t depth = opts.depth;
    const std::size_t grid = opts.grid;
    const auto layers = reachable_layers(m, s, t, depth);
    auto literal = [grid](std::size_t k) { return static_cast<double>(k) / static_cast<double>(grid); };

    // Level 0: the constants, on the widest layer.
    Pool states(result.examined, opts.budget);
    for (std::size_t k = 0; k <= grid; ++k) {
        const double p = literal(k);
        states.offer(std::vector<double>(layers[depth].size(), p),
                     [&] { return (k == grid ? mhml::tt() : mhml::constant(p)).ptr(); });
    }

    for (std::size_t level = 1; level <= depth; ++level) {
        const auto& domain = layers[depth - level];
        const auto& wider = layers[depth - level + 1];
        std::vector<std::size_t> pos(m.num_states(), 0);
        for (std::size_t i = 0; i < wider.size(); ++i) pos[wider[i]] = i;

        std::vector<SubDistribution> targets;
        std::map<std::size_t, std::size_t> target_of;
        for (StateId u : domain) {
            for (ActionId a = 0; a < m.num_actions(); ++a) {
                for (std::size_t id : m.transition_ids(u, a)) {
                    const auto& delta = m.transitions()[id].target;
                    auto it = std::find(targets.begin(), targets.end(), delta);
                    target_of[id] = static_cast<std::size_t>(it - targets.begin());
                    if (it == targets.end()) targets.push_back(delta);
                }
            }
        }

        Pool dists(result.examined, opts.budget);
        for (const auto& c : states.items) {
            std::vector<double> v(targets.size());
            for (std::size_t i = 0; i < targets.size(); ++i) {
                double sum = 0.0;
                for (const auto& [w, p] : targets[i].entries()) sum += p * c.v[pos[w]];
                v[i] = sum;
            }
            dists.offer(std::move(v), [&] { return mhml::box(state_of(c.node)).ptr(); });
        }
        const std::size_t atoms = dists.items.size();
        for (std::size_t i = 0; i < atoms; ++i) {
            for (std::size_t k = 1; k < grid; ++k) {
                const double p = literal(k);
                std::vector<double> v = dists.items[i].v;
                for (double& x : v) x = std::max(x - p, 0.0);
                dists.offer(std::move(v), [&] { return mhml::minus(dist_of(dists.items[i].node), p).ptr(); });
            }
        }
        const std::size_t shifted = dists.items.size();
        for (std::size_t i = 0; i < shifted; ++i) {
            for (std::size_t j = i + 1; j < shifted; ++j) {
                std::vector<double> v(targets.size());
                for (std::size_t x = 0; x < v.size(); ++x) v[x] = std::min(dists.items[i].v[x], dists.items[j].v[x]);
                dists.offer(std::move(v), [&] {
                    return mhml::conj(dist_of(dists.items[i].node), dist_of(dists.items[j].node)).ptr();
                });
            }
        }

        Pool next(result.examined, opts.budget);
        for (const auto& c : states.items) {
            std::vector<double> v(domain.size());
            for (std::size_t i = 0; i < domain.size(); ++i) v[i] = c.v[pos[domain[i]]];
            next.offer(std::move(v), [&] { return c.node; });
        }
        std::vector<std::size_t> base;
        for (ActionId a = 0; a < m.num_actions(); ++a) {
            for (const auto& psi : dists.items) {
                std::vector<double> v(domain.size(), 0.0);
                for (std::size_t i = 0; i < domain.size(); ++i) {
                    for (std::size_t id : m.transition_ids(domain[i], a)) v[i] = std::max(v[i], psi.v[target_of[id]]);
                }
                if (next.offer(std::move(v), [&] { return mhml::diamond(m.action_name(a), dist_of(psi.node)).ptr(); }))
                    base.push_back(next.items.size() - 1);
            }
        }

        // Negation, shifts and boolean combinations cannot widen the gap on
        // {s, t} itself, so the last level stops at the diamonds.
        if (level < depth) {
            std::vector<Candidate> literals;
            for (std::size_t b : base) {
                literals.push_back(next.items[b]);
                Candidate negated{mhml::neg(state_of(next.items[b].node)).ptr(), next.items[b].v};
                for (double& x : negated.v) x = 1.0 - x;
                literals.push_back(std::move(negated));
            }
            for (const auto& lit : literals) {
                for (std::size_t k = 1; k < grid; ++k) {
                    const double p = literal(k);
                    std::vector<double> v = lit.v;
                    for (double& x : v) x = std::max(x - p, 0.0);
                    std::vector<double> w = v;
                    for (double& x : w) x = 1.0 - x;
                    NodePtr shifted_node;
                    auto make_shifted = [&] {
                        if (!shifted_node) shifted_node = mhml::minus(state_of(lit.node), p).ptr();
                        return shifted_node;
                    };
                    next.offer(std::move(v), make_shifted);
                    next.offer(std::move(w), [&] { return mhml::neg(state_of(make_shifted())).ptr(); });
                }
            }
            for (std::size_t i = 0; i < literals.size(); ++i) {
                for (std::size_t j = i + 1; j < literals.size(); ++j) {
                    const auto& x = literals[i];
                    const auto& y = literals[j];
                    std::vector<double> lo(domain.size()), hi(domain.size());
                    for (std::size_t q = 0; q < domain.size(); ++q) {
                        lo[q] = std::min(x.v[q], y.v[q]);
                        hi[q] = std::max(x.v[q], y.v[q]);
                    }
                    next.offer(std::move(lo), [&] { return mhml::conj(state_of(x.node), state_of(y.node)).ptr(); });
                    next.offer(std::move(hi), [&] { return mhml::disj(state_of(x.node), state_of(y.node)).ptr(); });
                }
            }
        }
        states = std::move(next);
    }

    const auto& top = layers[0];
    const std::size_t is = static_cast<std::size_t>(std::find(top.begin(), top.end(), s) - top.begin());
    const std::size_t it = static_cast<std::size_t>(std::find(top.begin(), top.end(), t) - top.begin());
    for (const auto& c : states.items) {
        const double gap = std::abs(c.v[is] - c.v[it]);
        if (gap > result.value) {
            result.value = gap;
            result.witness = state_of(c.node);
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Synthesis

namespace {

class Synthesizer {
public:
    Synthesizer(const Plts& m, std::size_t k, double slack) : m_(m), slack_(slack), ev_(m) {
        iterates_.emplace_back(m.num_states());
        for (std::size_t j = 0; j < k; ++j) iterates_.push_back(functor_step(m, iterates_.back()));
    }

    const StateMetric& iterate(std::size_t j) const { return iterates_[j]; }

    /// [[phi]](u) - [[phi]](v) >= d_j(u,v) - slack.
    StateFormula witness(std::size_t j, StateId u, StateId v) {
        if (u == v || j == 0 || iterates_[j](u, v) <= slack_) return mhml::constant(0.0);
        const auto key = std::make_tuple(j, u, v);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        const StateMetric& d = iterates_[j - 1];
        double best = -1.0;
        bool reversed = false;
        ActionId best_action = 0;
        std::size_t best_index = 0;
        for (ActionId a = 0; a < m_.num_actions(); ++a) {
            const auto du = m_.successors(u, a);
            const auto dv = m_.successors(v, a);
            std::vector<std::vector<double>> k(du.size(), std::vector<double>(dv.size()));
            for (std::size_t i = 0; i < du.size(); ++i) {
                for (std::size_t l = 0; l < dv.size(); ++l) k[i][l] = kantorovich_distance(d, du[i], dv[l]);
            }
            for (std::size_t i = 0; i < du.size(); ++i) {
                double inf = 1.0;
                for (std::size_t l = 0; l < dv.size(); ++l) inf = std::min(inf, k[i][l]);
                if (inf > best) std::tie(best, reversed, best_action, best_index) = std::make_tuple(inf, false, a, i);
            }
            for (std::size_t l = 0; l < dv.size(); ++l) {
                double inf = 1.0;
                for (std::size_t i = 0; i < du.size(); ++i) inf = std::min(inf, k[i][l]);
                if (inf > best) std::tie(best, reversed, best_action, best_index) = std::make_tuple(inf, true, a, l);
            }
        }

        StateFormula phi = reversed ? mhml::neg(guarded(j, v, u, best_action, best_index))
                                    : guarded(j, u, v, best_action, best_index);
        memo_.emplace(key, phi);
        return phi;
    }

private:
    /// <a> psi where psi is large at the index-th a-successor of u and small
    /// at every a-successor of v.
    StateFormula guarded(std::size_t j, StateId u, StateId v, ActionId a, std::size_t index) {
        const std::string& label = m_.action_name(a);
        const SubDistribution delta = m_.successors(u, a)[index];
        const auto thetas = m_.successors(v, a);
        if (thetas.empty()) return mhml::diamond(label, mhml::box(mhml::tt()));
        if (thetas.size() == 1) return mhml::diamond(label, separate(j, delta, thetas.front()));

        std::optional<DistFormula> body;
        for (const auto& theta : thetas) {
            DistFormula psi = separate(j, delta, theta);
            DistFormula guard = mhml::minus(psi, ev_.dist(psi, theta));
            body = body ? mhml::conj(*body, guard) : guard;
        }
        return mhml::diamond(label, *body);
    }

    /// [phi] with [[phi]] within slack above the optimal dual potentials of
    /// K(d_{j-1})(delta, theta) on both supports.
    DistFormula separate(std::size_t j, const SubDistribution& delta, const SubDistribution& theta) {
        const TransportPlan plan = kantorovich(iterates_[j - 1], delta, theta);
        std::vector<StateId> support;
        for (const auto& [w, p] : delta.entries()) support.push_back(w);
        for (const auto& [w, p] : theta.entries()) support.push_back(w);
        std::sort(support.begin(), support.end());
        support.erase(std::unique(support.begin(), support.end()), support.end());

        std::vector<StateFormula> clauses;
        for (StateId u : support) {
            const double ku = plan.duals[u];
            if (ku <= 0.0) continue;
            std::vector<StateFormula> parts;
            for (StateId w : support) {
                if (plan.duals[w] >= ku) continue;
                StateFormula f = witness(j - 1, u, w);
                const double at_u = ev_.state(f, u);
                if (at_u > ku) {
                    f = mhml::minus(f, at_u - ku);
                } else if (at_u < ku) {
                    f = mhml::plus(f, ku - at_u);
                }
                add_unique(parts, f);
            }
            if (ku < 1.0 || parts.empty()) parts.insert(parts.begin(), mhml::constant(ku));
            StateFormula clause = parts.front();
            for (std::size_t i = 1; i < parts.size(); ++i) clause = mhml::conj(clause, parts[i]);
            add_unique(clauses, clause);
        }
        std::optional<StateFormula> phi;
        for (const auto& c : clauses) phi = phi ? mhml::disj(*phi, c) : c;
        return mhml::box(phi ? *phi : mhml::constant(0.0));
    }

    static void add_unique(std::vector<StateFormula>& into, const StateFormula& f) {
        for (const auto& g : into)
            if (same_formula(g.ptr(), f.ptr())) return;
        into.push_back(f);
    }

    const Plts& m_;
    double slack_;
    Evaluator ev_;
    std::vector<StateMetric> iterates_;
    std::map<std::tuple<std::size_t, StateId, StateId>, StateFormula> memo_;
};

}  // namespace

StateFormula synthesize_distinguishing(const Plts& m, StateId s, StateId t, std::size_t k, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("synthesize_distinguishing: eps must be positive");
    if (s >= m.num_states() || t >= m.num_states()) throw std::out_of_range("unknown state");
    // Half the slack goes to the construction, the rest absorbs rounding.
    Synthesizer synth(m, k, eps / 2.0);
    if (s == t || synth.iterate(k)(s, t) <= eps) return mhml::constant(0.0);
    return synth.witness(k, s, t);
}

}  // namespace pmetric
