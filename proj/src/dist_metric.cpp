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

#include "pmetric/dist_metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include "pmetric/errors.hpp"

namespace pmetric {

std::size_t default_node_budget() {
    if (const char* env = std::getenv("PMETRIC_NODE_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return 100000;
}

std::vector<SubDistribution> lifted_successors(const Plts& m, const SubDistribution& d, ActionId a,
                                               bool allow_null_lift) {
    const auto entries = d.entries();
    std::vector<std::vector<SubDistribution>> choices;
    bool moves = false;
    std::size_t combinations = 1;
    for (const auto& [s, p] : entries) {
        choices.push_back(m.successors(s, a));
        if (!choices.back().empty()) {
            moves = true;
            combinations *= choices.back().size();
            if (combinations > 1'000'000) throw BudgetExceeded("too many lifted successors");
        }
    }
    std::vector<SubDistribution> out;
    if (!moves && !allow_null_lift) return out;

    std::vector<std::size_t> pick(entries.size(), 0);
    for (;;) {
        std::vector<SubDistribution::Entry> mixed;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (choices[i].empty()) continue;
            for (const auto& [t, q] : choices[i][pick[i]].entries()) mixed.emplace_back(t, entries[i].second * q);
        }
        SubDistribution next(std::move(mixed));
        if (std::none_of(out.begin(), out.end(), [&](const SubDistribution& x) { return x == next; }))
            out.push_back(std::move(next));

        std::size_t i = 0;
        for (; i < entries.size(); ++i) {
            if (choices[i].size() <= 1) continue;
            if (++pick[i] < choices[i].size()) break;
            pick[i] = 0;
        }
        if (i == entries.size()) break;
    }
    return out;
}

LiftedGraph::LiftedGraph(const Plts& m, bool allow_null_lift, std::size_t node_budget)
    : m_(m), allow_null_lift_(allow_null_lift), budget_(node_budget ? node_budget : default_node_budget()) {}

std::size_t LiftedGraph::add(const SubDistribution& d) {
    std::vector<StateId> support;
    for (const auto& [s, p] : d.entries()) support.push_back(s);
    auto& bucket = by_support_[support];
    for (std::size_t id : bucket) {
        if (nodes_[id].dist == d) return id;
    }
    if (nodes_.size() >= budget_)
        throw BudgetExceeded("lifted graph exceeded its budget of " + std::to_string(budget_) + " nodes");
    nodes_.push_back({d, std::vector<std::vector<std::size_t>>(m_.num_actions()),
                      std::vector<bool>(m_.num_actions(), false)});
    bucket.push_back(nodes_.size() - 1);
    return nodes_.size() - 1;
}

const std::vector<std::size_t>& LiftedGraph::successors(std::size_t id, ActionId a) {
    if (!nodes_.at(id).expanded.at(a)) {
        std::vector<std::size_t> ids;
        for (const auto& next : lifted_successors(m_, nodes_[id].dist, a, allow_null_lift_)) ids.push_back(add(next));
        nodes_[id].succ[a] = std::move(ids);
        nodes_[id].expanded[a] = true;
    }
    return nodes_[id].succ[a];
}

DistMetric::DistMetric(const Plts& m, const DistMetricOptions& opts)
    : graph_(m, opts.allow_null_lift, opts.node_budget) {}

double DistMetric::operator()(const SubDistribution& a, const SubDistribution& b, std::size_t k) {
    return between(graph_.add(a), graph_.add(b), k);
}

double DistMetric::between(std::size_t x, std::size_t y, std::size_t k) {
    if (x == y) return 0.0;
    if (x > y) std::swap(x, y);
    const double floor = std::abs(graph_.node(x).mass() - graph_.node(y).mass());
    if (k == 0) return floor;
    const auto key = std::make_tuple(k, x, y);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    double value = floor;
    for (ActionId a = 0; a < graph_.model().num_actions() && value < 1.0; ++a) {
        const std::vector<std::size_t> sx = graph_.successors(x, a);
        const std::vector<std::size_t> sy = graph_.successors(y, a);
        auto directed = [&](const std::vector<std::size_t>& from, const std::vector<std::size_t>& to) {
            double worst = 0.0;
            for (std::size_t f : from) {
                double best = 1.0;
                for (std::size_t t : to) {
                    best = std::min(best, between(f, t, k - 1));
                    if (best <= 0.0) break;
                }
                worst = std::max(worst, best);
            }
            return worst;
        };
        value = std::max({value, directed(sx, sy), directed(sy, sx)});
    }
    memo_.emplace(key, value);
    return value;
}

std::vector<double> dist_fixpoint(const Plts& m, const std::vector<std::pair<SubDistribution, SubDistribution>>& pairs,
                                  std::size_t k, const DistMetricOptions& opts) {
    DistMetric metric(m, opts);
    std::vector<double> out;
    for (const auto& [a, b] : pairs) out.push_back(metric(a, b, k));
    return out;
}

namespace {

class DstarEvaluator {
public:
    explicit DstarEvaluator(LiftedGraph& g) : g_(g) {}

    double operator()(const DstarFormula& f, std::size_t id) { return value(f.ptr(), id); }

    double value(const NodePtr& n, std::size_t id) {
        const auto key = std::make_pair(n.get(), id);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        double v = 0.0;
        switch (n->op) {
            case Op::True:
                v = g_.node(id).mass();
                break;
            case Op::Not:
                v = 1.0 - value(n->left, id);
                break;
            case Op::Minus:
                v = std::max(value(n->left, id) - n->literal, 0.0);
                break;
            case Op::And:
                v = std::min(value(n->left, id), value(n->right, id));
                break;
            case Op::Diamond:
                if (g_.model().has_action(n->action)) {
                    const std::vector<std::size_t> next = g_.successors(id, g_.model().action(n->action));
                    for (std::size_t x : next) v = std::max(v, value(n->left, x));
                }
                break;
            case Op::Box:
                throw std::logic_error("brackets in a distribution-only formula");
        }
        keep_.push_back(n);
        memo_.emplace(key, v);
        return v;
    }

private:
    LiftedGraph& g_;
    std::map<std::pair<const FormulaNode*, std::size_t>, double> memo_;
    std::vector<NodePtr> keep_;
};

DstarFormula zero() { return dstar::minus(dstar::tt(), 1.0); }

/// Guided construction: [[chi]](x) - [[chi]](y) >= d_j(x,y) - slack.
class DstarSynthesizer {
public:
    DstarSynthesizer(DistMetric& metric, double slack) : metric_(metric), eval_(metric.graph()), slack_(slack) {}

    DstarFormula witness(std::size_t j, std::size_t x, std::size_t y) {
        if (x == y) return zero();
        const double dj = metric_.between(x, y, j);
        if (dj <= slack_) return zero();
        const auto key = std::make_tuple(j, x, y);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        LiftedGraph& g = metric_.graph();
        const double mx = g.node(x).mass();
        const double my = g.node(y).mass();
        std::optional<DstarFormula> chi;
        if (j == 0 || std::abs(mx - my) >= dj) {
            chi = mx >= my ? dstar::tt() : dstar::neg(dstar::tt());
        } else {
            double best = -1.0;
            bool reversed = false;
            ActionId action = 0;
            std::size_t pick = 0;
            for (ActionId a = 0; a < g.model().num_actions(); ++a) {
                const std::vector<std::size_t> sx = g.successors(x, a);
                const std::vector<std::size_t> sy = g.successors(y, a);
                for (std::size_t f : sx) {
                    double inf = 1.0;
                    for (std::size_t t : sy) inf = std::min(inf, metric_.between(f, t, j - 1));
                    if (inf > best) std::tie(best, reversed, action, pick) = std::make_tuple(inf, false, a, f);
                }
                for (std::size_t t : sy) {
                    double inf = 1.0;
                    for (std::size_t f : sx) inf = std::min(inf, metric_.between(f, t, j - 1));
                    if (inf > best) std::tie(best, reversed, action, pick) = std::make_tuple(inf, true, a, t);
                }
            }
            chi = reversed ? dstar::neg(guarded(j, pick, x, action)) : guarded(j, pick, y, action);
        }
        memo_.emplace(key, *chi);
        return *chi;
    }

private:
    DstarFormula guarded(std::size_t j, std::size_t from, std::size_t y, ActionId a) {
        LiftedGraph& g = metric_.graph();
        const std::string& label = g.model().action_name(a);
        const std::vector<std::size_t> others = g.successors(y, a);
        if (others.empty()) return dstar::diamond(label, dstar::neg(zero()));
        if (others.size() == 1) return dstar::diamond(label, witness(j - 1, from, others.front()));
        std::optional<DstarFormula> body;
        for (std::size_t o : others) {
            DstarFormula c = witness(j - 1, from, o);
            DstarFormula guard = dstar::minus(c, eval_(c, o));
            body = body ? dstar::conj(*body, guard) : guard;
        }
        return dstar::diamond(label, *body);
    }

    DistMetric& metric_;
    DstarEvaluator eval_;
    double slack_;
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, DstarFormula> memo_;
};

struct Item {
    NodePtr node;
    std::vector<double> v;
};

class DstarPool {
public:
    DstarPool(std::size_t& examined, std::size_t budget) : examined_(&examined), budget_(budget) {}

    template <class Make>
    bool offer(std::vector<double> v, Make&& make) {
        if (++*examined_ > budget_)
            throw BudgetExceeded("formula enumeration exceeded its budget of " + std::to_string(budget_) +
                                 " candidates");
        std::vector<long long> key(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) key[i] = std::llround(v[i] * 1e9);
        if (!seen_.insert(std::move(key)).second) return false;
        items.push_back({make(), std::move(v)});
        return true;
    }

    std::vector<Item> items;

private:
    std::size_t* examined_;
    std::size_t budget_;
    std::set<std::vector<long long>> seen_;
};

DstarFormula dx(const NodePtr& n) { return DstarFormula(n); }

}  // namespace

double eval_dstar(const Plts& m, const DstarFormula& f, const SubDistribution& d, bool allow_null_lift) {
    for (const auto& [s, p] : d.entries()) {
        if (s >= m.num_states()) throw std::out_of_range("eval_dstar: unknown state");
    }
    LiftedGraph g(m, allow_null_lift);
    DstarEvaluator ev(g);
    return ev(f, g.add(d));
}

DstarFormula dstar_distinguishing(const Plts& m, const SubDistribution& a, const SubDistribution& b, std::size_t k,
                                  double eps, const DistMetricOptions& metric_opts) {
    if (!(eps > 0.0)) throw std::invalid_argument("dstar_distinguishing: eps must be positive");
    DistMetric metric(m, metric_opts);
    const std::size_t x = metric.graph().add(a);
    const std::size_t y = metric.graph().add(b);
    if (metric.between(x, y, k) <= eps) return zero();
    DstarSynthesizer synth(metric, eps / 2.0);
    return synth.witness(k, x, y);
}

DstarBound dstar_lower_bound(const Plts& m, const SubDistribution& a, const SubDistribution& b,
                             const EnumerationOptions& opts, const DistMetricOptions& metric_opts) {
    if (opts.depth < 1 || opts.grid < 1) throw std::invalid_argument("depth and grid must be at least 1");
    DstarBound result;
    DistMetric metric(m, metric_opts);
    LiftedGraph& g = metric.graph();
    const std::size_t x = g.add(a);
    const std::size_t y = g.add(b);
    if (x == y) return result;

    const std::size_t depth = opts.depth;
    const std::size_t grid = opts.grid;
    auto literal = [grid](std::size_t k) { return static_cast<double>(k) / static_cast<double>(grid); };

    std::vector<std::vector<std::size_t>> layers{{std::min(x, y), std::max(x, y)}};
    for (std::size_t k = 0; k < depth; ++k) {
        std::vector<std::size_t> next = layers.back();
        for (std::size_t id : layers.back()) {
            for (ActionId act = 0; act < m.num_actions(); ++act) {
                for (std::size_t s : g.successors(id, act)) next.push_back(s);
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        layers.push_back(std::move(next));
    }

    auto variants = [&](DstarPool& pool, const std::vector<Item>& literals) {
        for (const auto& lit : literals) {
            for (std::size_t k = 1; k < grid; ++k) {
                const double p = literal(k);
                std::vector<double> v = lit.v;
                for (double& q : v) q = std::max(q - p, 0.0);
                std::vector<double> w = v;
                for (double& q : w) q = 1.0 - q;
                NodePtr shifted;
                auto make_shifted = [&] {
                    if (!shifted) shifted = dstar::minus(dx(lit.node), p).ptr();
                    return shifted;
                };
                pool.offer(std::move(v), make_shifted);
                pool.offer(std::move(w), [&] { return dstar::neg(dx(make_shifted())).ptr(); });
            }
        }
    };

    DstarPool pool(result.examined, opts.budget);
    {
        const auto& widest = layers[depth];
        std::vector<double> mass(widest.size());
        for (std::size_t i = 0; i < widest.size(); ++i) mass[i] = g.node(widest[i]).mass();
        std::vector<double> inverse = mass;
        for (double& q : inverse) q = 1.0 - q;
        std::vector<Item> atoms{{dstar::tt().ptr(), mass}, {dstar::neg(dstar::tt()).ptr(), inverse}};
        for (const auto& atom : atoms) pool.offer(atom.v, [&] { return atom.node; });
        variants(pool, atoms);
    }

    for (std::size_t level = 1; level <= depth; ++level) {
        const auto& domain = layers[depth - level];
        const auto& wider = layers[depth - level + 1];
        std::unordered_map<std::size_t, std::size_t> pos;
        for (std::size_t i = 0; i < wider.size(); ++i) pos[wider[i]] = i;

        DstarPool next(result.examined, opts.budget);
        for (const auto& c : pool.items) {
            std::vector<double> v(domain.size());
            for (std::size_t i = 0; i < domain.size(); ++i) v[i] = c.v[pos[domain[i]]];
            next.offer(std::move(v), [&] { return c.node; });
        }
        std::vector<Item> literals;
        for (ActionId act = 0; act < m.num_actions(); ++act) {
            for (const auto& c : pool.items) {
                std::vector<double> v(domain.size(), 0.0);
                for (std::size_t i = 0; i < domain.size(); ++i) {
                    for (std::size_t s : g.successors(domain[i], act)) v[i] = std::max(v[i], c.v[pos[s]]);
                }
                std::vector<double> keep = v;
                if (next.offer(std::move(v), [&] { return dstar::diamond(m.action_name(act), dx(c.node)).ptr(); })) {
                    literals.push_back(next.items.back());
                    for (double& q : keep) q = 1.0 - q;
                    literals.push_back({dstar::neg(dx(next.items.back().node)).ptr(), std::move(keep)});
                }
            }
        }
        if (level < depth) {
            variants(next, literals);
            for (std::size_t i = 0; i < literals.size(); ++i) {
                for (std::size_t j = i + 1; j < literals.size(); ++j) {
                    const auto& p = literals[i];
                    const auto& q = literals[j];
                    std::vector<double> lo(domain.size()), hi(domain.size());
                    for (std::size_t r = 0; r < domain.size(); ++r) {
                        lo[r] = std::min(p.v[r], q.v[r]);
                        hi[r] = std::max(p.v[r], q.v[r]);
                    }
                    next.offer(std::move(lo), [&] { return dstar::conj(dx(p.node), dx(q.node)).ptr(); });
                    next.offer(std::move(hi), [&] { return dstar::disj(dx(p.node), dx(q.node)).ptr(); });
                }
            }
        }
        pool = std::move(next);
    }

    const std::size_t ia = x < y ? 0 : 1;
    const std::size_t ib = 1 - ia;
    for (const auto& c : pool.items) {
        const double gap = std::abs(c.v[ia] - c.v[ib]);
        if (gap > result.value) {
            result.value = gap;
            result.witness = dx(c.node);
        }
    }

    DstarSynthesizer synth(metric, 1e-9);
    DstarFormula guided = synth.witness(depth, x, y);
    DstarEvaluator ev(g);
    const double gap = std::abs(ev(guided, x) - ev(guided, y));
    if (gap > result.value) {
        result.value = gap;
        result.witness = guided;
    }
    return result;
}

}  // namespace pmetric
