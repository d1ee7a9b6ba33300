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

#include <memory>
#include <string>
#include <string_view>
#include <variant>

// Abstract syntax of the three real-valued modal logics:
//
//   state formulas         phi ::= tt | !phi | phi - p | phi & phi | <a> psi
//   distribution formulas  psi ::= psi - p | psi & psi | [phi]
//   distribution-only      chi ::= tt | !chi | chi - p | chi & chi | <a> chi
//
// All three share one immutable node type; the wrapper classes keep the sorts
// apart at compile time. Subterms are shared, so formulas are DAGs.

namespace pmetric {

enum class Op { True, Not, Minus, And, Diamond, Box };

struct FormulaNode;
using NodePtr = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
    Op op;
    double literal = 0.0;  // Minus
    std::string action;    // Diamond
    NodePtr left;          // operand, or left conjunct
    NodePtr right;         // right conjunct
};

namespace detail {
template <class Tag>
class Formula {
public:
    explicit Formula(NodePtr node) : node_(std::move(node)) {}
    const FormulaNode& node() const noexcept { return *node_; }
    const NodePtr& ptr() const noexcept { return node_; }
    Op op() const noexcept { return node_->op; }

private:
    NodePtr node_;
};
struct StateTag {};
struct DistTag {};
struct DstarTag {};
}  // namespace detail

class StateFormula;
class DistFormula;

class StateFormula : public detail::Formula<detail::StateTag> {
public:
    using Formula::Formula;
    DistFormula operand_dist() const;   // Diamond
    StateFormula operand() const;       // Not, Minus, And (left)
    StateFormula right() const;         // And
};

class DistFormula : public detail::Formula<detail::DistTag> {
public:
    using Formula::Formula;
    DistFormula operand() const;        // Minus, And (left)
    DistFormula right() const;          // And
    StateFormula operand_state() const; // Box
};

class DstarFormula : public detail::Formula<detail::DstarTag> {
public:
    using Formula::Formula;
    DstarFormula operand() const;
    DstarFormula right() const;
};

namespace mhml {

StateFormula tt();
StateFormula neg(const StateFormula& f);
/// f - p: max(f - p, 0).
StateFormula minus(const StateFormula& f, double p);
StateFormula conj(const StateFormula& a, const StateFormula& b);
StateFormula diamond(std::string action, const DistFormula& body);

DistFormula minus(const DistFormula& f, double p);
DistFormula conj(const DistFormula& a, const DistFormula& b);
DistFormula box(const StateFormula& f);

/// Derived operators, expanded into the core connectives.
StateFormula constant(double p);                                // tt - (1-p)
StateFormula plus(const StateFormula& f, double p);             // !((!f) - p)
StateFormula disj(const StateFormula& a, const StateFormula& b);  // !(!a & !b)

}  // namespace mhml

namespace dstar {

DstarFormula tt();
DstarFormula neg(const DstarFormula& f);
DstarFormula minus(const DstarFormula& f, double p);
DstarFormula conj(const DstarFormula& a, const DstarFormula& b);
DstarFormula diamond(std::string action, const DstarFormula& body);
DstarFormula plus(const DstarFormula& f, double p);
DstarFormula disj(const DstarFormula& a, const DstarFormula& b);

}  // namespace dstar

enum class Sort { State, Dist };

/// Parses the ASCII concrete syntax. Sugar (`const(p)`, `+p`, `|`) is expanded.
/// Throws FormulaError.
StateFormula parse_state_formula(std::string_view text);
DistFormula parse_dist_formula(std::string_view text);
std::variant<StateFormula, DistFormula> parse_formula(std::string_view text, Sort sort);
/// Distribution-only logic: `<a>` binds like `!`, no brackets, no const().
DstarFormula parse_dstar_formula(std::string_view text);

/// Concrete syntax that parses back to the same tree.
std::string to_string(const StateFormula& f);
std::string to_string(const DistFormula& f);
std::string to_string(const DstarFormula& f);

/// Largest nesting depth of diamonds.
std::size_t modal_depth(const StateFormula& f);
std::size_t modal_depth(const DistFormula& f);
std::size_t modal_depth(const DstarFormula& f);

/// Number of nodes of the formula seen as a tree (shared subterms counted
/// once per occurrence); saturates at SIZE_MAX.
std::size_t tree_size(const StateFormula& f);

/// Structural equality.
bool same_formula(const NodePtr& a, const NodePtr& b);

/// True when the formula uses conjunction or subtraction on distribution
/// formulas anywhere.
bool uses_distribution_connectives(const StateFormula& f);

/// Formulas built only from tt and <a>[...]: the trace fragment.
bool is_trace_formula(const StateFormula& f);

}  // namespace pmetric
