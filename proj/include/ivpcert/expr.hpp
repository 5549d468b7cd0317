#pragma once

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ivpcert/scalar.hpp"

namespace ivpcert {

enum class AtomKind { Sin, Cos, ExpI };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

// Immutable expression tree. Sums and products are n-ary and kept flat;
// constants are exact Gaussian rationals. Power exponents are expressions
// until parameter resolution, integer constants afterwards. FiniteSum and
// Binom nodes exist only before expansion.
struct ExprNode {
    enum class Tag { Number, Symbol, Atom, Sum, Product, Power, FiniteSum, Binom };

    Tag tag;
    GaussianRational value; // Number
    std::string name;       // Symbol; FiniteSum binder
    AtomKind atom_kind = AtomKind::Sin;
    // Atom: {arg}; Power: {base, exponent}; FiniteSum: {lo, hi, body};
    // Binom: {n, k}; Sum/Product: terms/factors.
    std::vector<Expr> kids;
};

inline Expr num(GaussianRational v)
{
    auto n = std::make_shared<ExprNode>();
    n->tag = ExprNode::Tag::Number;
    n->value = std::move(v);
    return n;
}
inline Expr num(long v) { return num(GaussianRational(v)); }
inline Expr num(const Rational &v) { return num(GaussianRational(v)); }
inline Expr imag_unit() { return num(GaussianRational::unit_i()); }

inline Expr sym(std::string name)
{
    auto n = std::make_shared<ExprNode>();
    n->tag = ExprNode::Tag::Symbol;
    n->name = std::move(name);
    return n;
}

inline Expr atom(AtomKind kind, Expr arg)
{
    auto n = std::make_shared<ExprNode>();
    n->tag = ExprNode::Tag::Atom;
    n->atom_kind = kind;
    n->kids = {std::move(arg)};
    return n;
}
inline Expr sin_(Expr arg) { return atom(AtomKind::Sin, std::move(arg)); }
inline Expr cos_(Expr arg) { return atom(AtomKind::Cos, std::move(arg)); }
inline Expr expi(Expr arg) { return atom(AtomKind::ExpI, std::move(arg)); }

inline bool is_number(const Expr &e)
{
    return e->tag == ExprNode::Tag::Number;
}
inline bool is_zero_number(const Expr &e)
{
    return is_number(e) && e->value.is_zero();
}

// Flattens nested sums and merges constant terms (in place of the first
// constant encountered) so that structurally different spellings of the same
// flat sum normalize alike.
inline Expr sum(std::vector<Expr> terms)
{
    std::vector<Expr> flat;
    for (auto &t : terms) {
        if (t->tag == ExprNode::Tag::Sum)
            flat.insert(flat.end(), t->kids.begin(), t->kids.end());
        else
            flat.push_back(t);
    }
    GaussianRational c(0);
    long const_pos = -1;
    std::vector<Expr> out;
    for (auto &t : flat) {
        if (is_number(t)) {
            if (const_pos < 0) {
                const_pos = static_cast<long>(out.size());
                out.push_back(t); // placeholder, replaced below
            }
            c += t->value;
        } else {
            out.push_back(t);
        }
    }
    if (const_pos >= 0) {
        if (c.is_zero() && out.size() > 1)
            out.erase(out.begin() + const_pos);
        else
            out[const_pos] = num(c);
    }
    if (out.empty())
        return num(0);
    if (out.size() == 1)
        return out[0];
    auto n = std::make_shared<ExprNode>();
    n->tag = ExprNode::Tag::Sum;
    n->kids = std::move(out);
    return n;
}
inline Expr add(Expr a, Expr b) { return sum({std::move(a), std::move(b)}); }

inline Expr product(std::vector<Expr> factors)
{
    std::vector<Expr> flat;
    for (auto &t : factors) {
        if (t->tag == ExprNode::Tag::Product)
            flat.insert(flat.end(), t->kids.begin(), t->kids.end());
        else
            flat.push_back(t);
    }
    GaussianRational c(1);
    long const_pos = -1;
    std::vector<Expr> out;
    for (auto &t : flat) {
        if (is_number(t)) {
            if (const_pos < 0) {
                const_pos = static_cast<long>(out.size());
                out.push_back(t);
            }
            c = c * t->value;
        } else {
            out.push_back(t);
        }
    }
    if (c.is_zero())
        return num(0);
    if (const_pos >= 0) {
        if (c.is_one() && out.size() > 1)
            out.erase(out.begin() + const_pos);
        else
            out[const_pos] = num(c);
    }
    if (out.empty())
        return num(1);
    if (out.size() == 1)
        return out[0];
    auto n = std::make_shared<ExprNode>();
    n->tag = ExprNode::Tag::Product;
    n->kids = std::move(out);
    return n;
}
inline Expr mul(Expr a, Expr b)
{
    return product({std::move(a), std::move(b)});
}

inline Expr power(Expr base, Expr exponent)
{
    if (is_number(exponent) && exponent->value.is_real() &&
        exponent->value.re.is_integer()) {
        long e = exponent->value.re.to_long();
        if (e == 1)
            return base;
        if (e == 0)
            return num(1);
        // Constant bases fold, except 0^negative which must surface as a
        // canonicalization error later.
        if (is_number(base) && (e > 0 || !base->value.is_zero()))
            return num(pow_int(base->value, e));
    }
    auto n = std::make_shared<ExprNode>();
    n->tag = ExprNode::Tag::Power;
    n->kids = {std::move(base), std::move(exponent)};
    return n;
}
inline Expr power(Expr base, long e) { return power(std::move(base), num(e)); }

inline Expr neg(Expr e) { return product({num(-1), std::move(e)}); }
inline Expr sub(Expr a, Expr b) { return add(std::move(a), neg(std::move(b))); }
inline Expr div(Expr a, Expr b)
{
    return product({std::move(a), power(std::move(b), -1)});
}

inline Expr finite_sum(std::string binder, Expr lo, Expr hi, Expr body)
{
    auto n = std::make_shared<ExprNode>();
    n->tag = ExprNode::Tag::FiniteSum;
    n->name = std::move(binder);
    n->kids = {std::move(lo), std::move(hi), std::move(body)};
    return n;
}

inline Expr binom_node(Expr n_, Expr k_)
{
    auto n = std::make_shared<ExprNode>();
    n->tag = ExprNode::Tag::Binom;
    n->kids = {std::move(n_), std::move(k_)};
    return n;
}

bool struct_equal(const Expr &a, const Expr &b);

// Rebuilds the tree through the smart constructors; the normal form the
// parse/print round trip is stated against.
Expr normalize(const Expr &e);

// Replaces every occurrence of the named symbol.
Expr substitute(const Expr &e, const std::string &name, const Expr &value);

void for_each_node(const Expr &e, const std::function<void(const Expr &)> &fn);
bool contains_symbol(const Expr &e, const std::string &name);

// Folds a closed constant expression (Number/Sum/Product/Power/Binom only)
// to a Gaussian rational. Throws std::domain_error otherwise.
GaussianRational eval_const(const Expr &e);

// eval_const restricted to real integers; used for sum bounds and exponents.
long eval_const_int(const Expr &e);

// Eliminates FiniteSum and Binom nodes and resolves Power exponents to
// integer constants, substituting the given integer parameter bindings first.
// Empty ranges become 0; upper < lower - 1 is an error.
Expr expand_finite_sums(const Expr &e, const std::map<std::string, long> &bindings);

// True once expand_finite_sums has run: no FiniteSum/Binom nodes remain and
// every Power exponent is an integer constant.
bool is_fully_expanded(const Expr &e);

} // namespace ivpcert
