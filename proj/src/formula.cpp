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

#include "pmetric/formula.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "pmetric/errors.hpp"

namespace pmetric {

namespace {

NodePtr make(Op op, NodePtr left = nullptr, NodePtr right = nullptr, double literal = 0.0, std::string action = {}) {
    return std::make_shared<const FormulaNode>(FormulaNode{op, literal, std::move(action), std::move(left), std::move(right)});
}

double checked_literal(double p) {
    if (p < -1e-9 || p > 1.0 + 1e-9 || p != p) throw std::invalid_argument("probability literal outside [0,1]");
    return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
}

}  // namespace

DistFormula StateFormula::operand_dist() const { return DistFormula(node().left); }
StateFormula StateFormula::operand() const { return StateFormula(node().left); }
StateFormula StateFormula::right() const { return StateFormula(node().right); }
DistFormula DistFormula::operand() const { return DistFormula(node().left); }
DistFormula DistFormula::right() const { return DistFormula(node().right); }
StateFormula DistFormula::operand_state() const { return StateFormula(node().left); }
DstarFormula DstarFormula::operand() const { return DstarFormula(node().left); }
DstarFormula DstarFormula::right() const { return DstarFormula(node().right); }

namespace mhml {

StateFormula tt() {
    static const NodePtr top = make(Op::True);
    return StateFormula(top);
}
StateFormula neg(const StateFormula& f) { return StateFormula(make(Op::Not, f.ptr())); }
StateFormula minus(const StateFormula& f, double p) {
    return StateFormula(make(Op::Minus, f.ptr(), nullptr, checked_literal(p)));
}
StateFormula conj(const StateFormula& a, const StateFormula& b) { return StateFormula(make(Op::And, a.ptr(), b.ptr())); }
StateFormula diamond(std::string action, const DistFormula& body) {
    return StateFormula(make(Op::Diamond, body.ptr(), nullptr, 0.0, std::move(action)));
}

DistFormula minus(const DistFormula& f, double p) {
    return DistFormula(make(Op::Minus, f.ptr(), nullptr, checked_literal(p)));
}
DistFormula conj(const DistFormula& a, const DistFormula& b) { return DistFormula(make(Op::And, a.ptr(), b.ptr())); }
DistFormula box(const StateFormula& f) { return DistFormula(make(Op::Box, f.ptr())); }

StateFormula constant(double p) { return minus(tt(), 1.0 - checked_literal(p)); }
StateFormula plus(const StateFormula& f, double p) { return neg(minus(neg(f), p)); }
StateFormula disj(const StateFormula& a, const StateFormula& b) { return neg(conj(neg(a), neg(b))); }

}  // namespace mhml

namespace dstar {

DstarFormula tt() {
    static const NodePtr top = make(Op::True);
    return DstarFormula(top);
}
DstarFormula neg(const DstarFormula& f) { return DstarFormula(make(Op::Not, f.ptr())); }
DstarFormula minus(const DstarFormula& f, double p) {
    return DstarFormula(make(Op::Minus, f.ptr(), nullptr, checked_literal(p)));
}
DstarFormula conj(const DstarFormula& a, const DstarFormula& b) { return DstarFormula(make(Op::And, a.ptr(), b.ptr())); }
DstarFormula diamond(std::string action, const DstarFormula& body) {
    return DstarFormula(make(Op::Diamond, body.ptr(), nullptr, 0.0, std::move(action)));
}
DstarFormula plus(const DstarFormula& f, double p) { return neg(minus(neg(f), p)); }
DstarFormula disj(const DstarFormula& a, const DstarFormula& b) { return neg(conj(neg(a), neg(b))); }

}  // namespace dstar

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    StateFormula state_formula() { return disj(); }

    DistFormula dist_formula() { return dconj(); }

    DstarFormula dstar_formula() { return xdisj(); }

    void expect_end() {
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
    }

private:
    [[noreturn]] void fail(const std::string& msg, FormulaError::Kind kind = FormulaError::Kind::Syntax) const {
        throw FormulaError(kind, msg, pos_);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(std::string_view tok) {
        skip_ws();
        return text_.substr(pos_, tok.size()) == tok;
    }

    bool accept(std::string_view tok) {
        if (!peek(tok)) return false;
        pos_ += tok.size();
        return true;
    }

    void expect(std::string_view tok) {
        if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
    }

    // "tt" followed by an identifier character is not the keyword.
    bool peek_keyword_tt() {
        if (!peek("tt")) return false;
        std::size_t after = pos_ + 2;
        return after >= text_.size() ||
               !(std::isalnum(static_cast<unsigned char>(text_[after])) || text_[after] == '_');
    }

    double prob() {
        skip_ws();
        const std::size_t start = pos_;
        std::size_t i = pos_;
        while (i < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[i])) || text_[i] == '.')) ++i;
        if (i < text_.size() && (text_[i] == 'e' || text_[i] == 'E')) {
            std::size_t j = i + 1;
            if (j < text_.size() && (text_[j] == '+' || text_[j] == '-')) ++j;
            if (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) {
                while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
                i = j;
            }
        }
        if (i == start) fail("expected a probability literal");
        std::string lit(text_.substr(start, i - start));
        char* end = nullptr;
        double v = std::strtod(lit.c_str(), &end);
        if (end != lit.c_str() + lit.size()) fail("malformed number '" + lit + "'");
        if (!(v >= 0.0 && v <= 1.0)) fail("probability literal " + lit + " outside [0,1]", FormulaError::Kind::LiteralOutOfRange);
        pos_ = i;
        return v;
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '.'))
            ++pos_;
        if (pos_ == start) fail("expected an action label");
        return std::string(text_.substr(start, pos_ - start));
    }

    // --- state sort -------------------------------------------------------

    StateFormula disj() {
        StateFormula f = conj();
        while (accept("|")) f = mhml::disj(f, conj());
        return f;
    }

    StateFormula conj() {
        StateFormula f = shift();
        while (accept("&")) f = mhml::conj(f, shift());
        return f;
    }

    StateFormula shift() {
        StateFormula f = atom();
        for (;;) {
            if (accept("-")) {
                f = mhml::minus(f, prob());
            } else if (accept("+")) {
                f = mhml::plus(f, prob());
            } else {
                return f;
            }
        }
    }

    StateFormula atom() {
        skip_ws();
        if (peek_keyword_tt()) {
            pos_ += 2;
            return mhml::tt();
        }
        if (accept("!")) return mhml::neg(atom());
        if (accept("const(")) {
            double p = prob();
            expect(")");
            return mhml::constant(p);
        }
        if (accept("<")) {
            std::string a = ident();
            expect(">");
            // `<a>tt` abbreviates `<a>[tt]`: a state atom right after a
            // diamond is lifted to the point-mass reading.
            if (peek_keyword_tt() || peek("!") || peek("const(") || peek("<"))
                return mhml::diamond(std::move(a), mhml::box(atom()));
            return mhml::diamond(std::move(a), dconj());
        }
        if (accept("(")) {
            StateFormula f = disj();
            expect(")");
            return f;
        }
        if (peek("[")) fail("distribution formula where a state formula is required", FormulaError::Kind::SortMismatch);
        fail("expected a state formula");
    }

    // --- distribution sort ------------------------------------------------

    DistFormula dconj() {
        DistFormula f = dshift();
        for (;;) {
            const std::size_t save = pos_;
            if (!accept("&")) return f;
            if (!peek("[") && !peek("(")) {
                pos_ = save;
                return f;
            }
            // `&` after a diamond body may belong to an enclosing state
            // conjunction; fall back when the right side is not a
            // distribution formula.
            try {
                f = mhml::conj(f, dshift());
            } catch (const FormulaError&) {
                pos_ = save;
                return f;
            }
        }
    }

    DistFormula dshift() {
        DistFormula f = datom();
        for (;;) {
            const std::size_t save = pos_;
            if (!accept("-")) return f;
            skip_ws();
            if (pos_ >= text_.size() || !(std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
                pos_ = save;
                return f;
            }
            f = mhml::minus(f, prob());
        }
    }

    DistFormula datom() {
        skip_ws();
        if (accept("[")) {
            StateFormula f = disj();
            expect("]");
            return mhml::box(f);
        }
        if (accept("(")) {
            DistFormula f = dconj();
            expect(")");
            return f;
        }
        if (peek_keyword_tt() || peek("!") || peek("const(") || peek("<"))
            fail("state formula where a distribution formula is required", FormulaError::Kind::SortMismatch);
        fail("expected a distribution formula");
    }

    // --- distribution-only logic -------------------------------------------

    DstarFormula xdisj() {
        DstarFormula f = xconj();
        while (accept("|")) f = dstar::disj(f, xconj());
        return f;
    }

    DstarFormula xconj() {
        DstarFormula f = xshift();
        while (accept("&")) f = dstar::conj(f, xshift());
        return f;
    }

    DstarFormula xshift() {
        DstarFormula f = xatom();
        for (;;) {
            if (accept("-")) {
                f = dstar::minus(f, prob());
            } else if (accept("+")) {
                f = dstar::plus(f, prob());
            } else {
                return f;
            }
        }
    }

    DstarFormula xatom() {
        skip_ws();
        if (peek_keyword_tt()) {
            pos_ += 2;
            return dstar::tt();
        }
        if (accept("!")) return dstar::neg(xatom());
        if (accept("<")) {
            std::string a = ident();
            expect(">");
            return dstar::diamond(std::move(a), xatom());
        }
        if (accept("(")) {
            DstarFormula f = xdisj();
            expect(")");
            return f;
        }
        if (peek("[")) fail("brackets are not part of the distribution-only logic", FormulaError::Kind::SortMismatch);
        if (peek("const(")) fail("const() is not available in the distribution-only logic");
        fail("expected a formula");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

StateFormula parse_state_formula(std::string_view text) {
    Parser p(text);
    StateFormula f = p.state_formula();
    p.expect_end();
    return f;
}

DistFormula parse_dist_formula(std::string_view text) {
    Parser p(text);
    DistFormula f = p.dist_formula();
    p.expect_end();
    return f;
}

std::variant<StateFormula, DistFormula> parse_formula(std::string_view text, Sort sort) {
    if (sort == Sort::State) return parse_state_formula(text);
    return parse_dist_formula(text);
}

DstarFormula parse_dstar_formula(std::string_view text) {
    Parser p(text);
    DstarFormula f = p.dstar_formula();
    p.expect_end();
    return f;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string number(double v) {
    char buf[32];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

enum Level { kDisj = 0, kConj = 1, kShift = 2, kAtom = 3 };

std::string paren(const std::string& s, bool wrap) { return wrap ? "(" + s + ")" : s; }

std::string print_dist(const FormulaNode& n, Level need);

std::string print_state(const FormulaNode& n, Level need, bool top) {
    switch (n.op) {
        case Op::True:
            return "tt";
        case Op::Not:
            return "!" + print_state(*n.left, kAtom, false);
        case Op::Minus:
            return paren(print_state(*n.left, kShift, false) + " - " + number(n.literal), need > kShift);
        case Op::And:
            return paren(print_state(*n.left, kConj, false) + " & " + print_state(*n.right, kShift, false),
                         need > kConj);
        case Op::Diamond:
            // The body extends as far right as it can, so a diamond that is
            // not the whole formula gets parenthesised.
            return paren("<" + n.action + ">" + print_dist(*n.left, kConj), !top);
        case Op::Box:
            break;
    }
    throw std::logic_error("ill-sorted state formula");
}

std::string print_dist(const FormulaNode& n, Level need) {
    switch (n.op) {
        case Op::Box:
            return "[" + print_state(*n.left, kDisj, true) + "]";
        case Op::Minus:
            return paren(print_dist(*n.left, kShift) + " - " + number(n.literal), need > kShift);
        case Op::And:
            return paren(print_dist(*n.left, kConj) + " & " + print_dist(*n.right, kShift), need > kConj);
        default:
            break;
    }
    throw std::logic_error("ill-sorted distribution formula");
}

std::string print_dstar(const FormulaNode& n, Level need) {
    switch (n.op) {
        case Op::True:
            return "tt";
        case Op::Not:
            return "!" + print_dstar(*n.left, kAtom);
        case Op::Minus:
            return paren(print_dstar(*n.left, kShift) + " - " + number(n.literal), need > kShift);
        case Op::And:
            return paren(print_dstar(*n.left, kConj) + " & " + print_dstar(*n.right, kShift), need > kConj);
        case Op::Diamond:
            return "<" + n.action + ">" + print_dstar(*n.left, kAtom);
        case Op::Box:
            break;
    }
    throw std::logic_error("ill-sorted formula");
}

std::size_t depth_of(const FormulaNode& n, std::unordered_map<const FormulaNode*, std::size_t>& memo) {
    if (auto it = memo.find(&n); it != memo.end()) return it->second;
    std::size_t d = 0;
    if (n.left) d = depth_of(*n.left, memo);
    if (n.right) d = std::max(d, depth_of(*n.right, memo));
    if (n.op == Op::Diamond) ++d;
    memo.emplace(&n, d);
    return d;
}

std::size_t size_of(const FormulaNode& n, std::unordered_map<const FormulaNode*, std::size_t>& memo) {
    if (auto it = memo.find(&n); it != memo.end()) return it->second;
    constexpr std::size_t cap = std::numeric_limits<std::size_t>::max();
    std::size_t s = 1;
    for (const auto* child : {n.left.get(), n.right.get()}) {
        if (!child) continue;
        std::size_t c = size_of(*child, memo);
        s = (c >= cap - s) ? cap : s + c;
    }
    memo.emplace(&n, s);
    return s;
}

bool dist_connectives(const FormulaNode& n, bool dist_sort, std::unordered_map<const FormulaNode*, bool>& memo) {
    if (auto it = memo.find(&n); it != memo.end()) return it->second;
    bool found = false;
    if (dist_sort && (n.op == Op::And || n.op == Op::Minus)) {
        found = true;
    } else {
        // Children of a diamond are distributions, children of a box are states.
        bool child_dist = n.op == Op::Diamond ? true : (n.op == Op::Box ? false : dist_sort);
        if (n.left) found = dist_connectives(*n.left, child_dist, memo);
        if (!found && n.right) found = dist_connectives(*n.right, child_dist, memo);
    }
    memo.emplace(&n, found);
    return found;
}

}  // namespace

std::string to_string(const StateFormula& f) { return print_state(f.node(), kDisj, true); }
std::string to_string(const DistFormula& f) { return print_dist(f.node(), kDisj); }
std::string to_string(const DstarFormula& f) { return print_dstar(f.node(), kDisj); }

std::size_t modal_depth(const StateFormula& f) {
    std::unordered_map<const FormulaNode*, std::size_t> memo;
    return depth_of(f.node(), memo);
}
std::size_t modal_depth(const DistFormula& f) {
    std::unordered_map<const FormulaNode*, std::size_t> memo;
    return depth_of(f.node(), memo);
}
std::size_t modal_depth(const DstarFormula& f) {
    std::unordered_map<const FormulaNode*, std::size_t> memo;
    return depth_of(f.node(), memo);
}

std::size_t tree_size(const StateFormula& f) {
    std::unordered_map<const FormulaNode*, std::size_t> memo;
    return size_of(f.node(), memo);
}

bool same_formula(const NodePtr& a, const NodePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->op != b->op || a->literal != b->literal || a->action != b->action) return false;
    return same_formula(a->left, b->left) && same_formula(a->right, b->right);
}

bool uses_distribution_connectives(const StateFormula& f) {
    std::unordered_map<const FormulaNode*, bool> memo;
    return dist_connectives(f.node(), false, memo);
}

bool is_trace_formula(const StateFormula& f) {
    const FormulaNode* n = &f.node();
    for (;;) {
        if (n->op == Op::True) return true;
        if (n->op != Op::Diamond || n->left->op != Op::Box) return false;
        n = n->left->left.get();
    }
}

}  // namespace pmetric
