#include "ivpcert/expr.hpp"

namespace ivpcert {

bool struct_equal(const Expr &a, const Expr &b)
{
    if (a.get() == b.get())
        return true;
    if (a->tag != b->tag)
        return false;
    switch (a->tag) {
    case ExprNode::Tag::Number:
        return a->value == b->value;
    case ExprNode::Tag::Symbol:
        return a->name == b->name;
    case ExprNode::Tag::Atom:
        if (a->atom_kind != b->atom_kind)
            return false;
        break;
    case ExprNode::Tag::FiniteSum:
        if (a->name != b->name)
            return false;
        break;
    default:
        break;
    }
    if (a->kids.size() != b->kids.size())
        return false;
    for (size_t i = 0; i < a->kids.size(); ++i)
        if (!struct_equal(a->kids[i], b->kids[i]))
            return false;
    return true;
}

Expr normalize(const Expr &e)
{
    std::vector<Expr> kids;
    kids.reserve(e->kids.size());
    for (auto &k : e->kids)
        kids.push_back(normalize(k));
    switch (e->tag) {
    case ExprNode::Tag::Number:
    case ExprNode::Tag::Symbol:
        return e;
    case ExprNode::Tag::Atom:
        return atom(e->atom_kind, kids[0]);
    case ExprNode::Tag::Sum:
        return sum(std::move(kids));
    case ExprNode::Tag::Product:
        return product(std::move(kids));
    case ExprNode::Tag::Power:
        return power(kids[0], kids[1]);
    case ExprNode::Tag::FiniteSum:
        return finite_sum(e->name, kids[0], kids[1], kids[2]);
    case ExprNode::Tag::Binom:
        return binom_node(kids[0], kids[1]);
    }
    throw std::logic_error("normalize: bad tag");
}

Expr substitute(const Expr &e, const std::string &name, const Expr &value)
{
    if (e->tag == ExprNode::Tag::Symbol)
        return e->name == name ? value : e;
    if (e->tag == ExprNode::Tag::Number)
        return e;
    // A FiniteSum binder shadows an outer symbol of the same name in the
    // body, but not in the bounds.
    if (e->tag == ExprNode::Tag::FiniteSum && e->name == name) {
        Expr lo = substitute(e->kids[0], name, value);
        Expr hi = substitute(e->kids[1], name, value);
        return finite_sum(e->name, lo, hi, e->kids[2]);
    }
    std::vector<Expr> kids;
    kids.reserve(e->kids.size());
    bool changed = false;
    for (auto &k : e->kids) {
        Expr nk = substitute(k, name, value);
        changed |= nk.get() != k.get();
        kids.push_back(std::move(nk));
    }
    if (!changed)
        return e;
    auto n = std::make_shared<ExprNode>(*e);
    n->kids = std::move(kids);
    return n;
}

void for_each_node(const Expr &e, const std::function<void(const Expr &)> &fn)
{
    fn(e);
    for (auto &k : e->kids)
        for_each_node(k, fn);
}

bool contains_symbol(const Expr &e, const std::string &name)
{
    if (e->tag == ExprNode::Tag::Symbol)
        return e->name == name;
    for (auto &k : e->kids)
        if (contains_symbol(k, name))
            return true;
    return false;
}

GaussianRational eval_const(const Expr &e)
{
    switch (e->tag) {
    case ExprNode::Tag::Number:
        return e->value;
    case ExprNode::Tag::Sum: {
        GaussianRational acc(0);
        for (auto &k : e->kids)
            acc += eval_const(k);
        return acc;
    }
    case ExprNode::Tag::Product: {
        GaussianRational acc(1);
        for (auto &k : e->kids)
            acc = acc * eval_const(k);
        return acc;
    }
    case ExprNode::Tag::Power: {
        long ex = eval_const_int(e->kids[1]);
        return pow_int(eval_const(e->kids[0]), ex);
    }
    case ExprNode::Tag::Binom: {
        long n = eval_const_int(e->kids[0]);
        long k = eval_const_int(e->kids[1]);
        return GaussianRational(Rational(binomial(n, k)));
    }
    case ExprNode::Tag::Symbol:
        throw std::domain_error("unresolved symbol in constant expression: " +
                                e->name);
    default:
        throw std::domain_error("not a constant expression");
    }
}

long eval_const_int(const Expr &e)
{
    GaussianRational v = eval_const(e);
    if (!v.is_real() || !v.re.is_integer())
        throw std::domain_error("expected an integer, got " + v.str());
    return v.re.to_long();
}

namespace {

Expr expand_rec(const Expr &e)
{
    switch (e->tag) {
    case ExprNode::Tag::Number:
    case ExprNode::Tag::Symbol:
        return e;
    case ExprNode::Tag::Atom:
        return atom(e->atom_kind, expand_rec(e->kids[0]));
    case ExprNode::Tag::Sum: {
        std::vector<Expr> kids;
        for (auto &k : e->kids)
            kids.push_back(expand_rec(k));
        return sum(std::move(kids));
    }
    case ExprNode::Tag::Product: {
        std::vector<Expr> kids;
        for (auto &k : e->kids)
            kids.push_back(expand_rec(k));
        return product(std::move(kids));
    }
    case ExprNode::Tag::Power: {
        Expr base = expand_rec(e->kids[0]);
        long ex;
        try {
            ex = eval_const_int(expand_rec(e->kids[1]));
        } catch (const std::domain_error &err) {
            throw std::domain_error(std::string("power exponent: ") +
                                    err.what());
        }
        return power(std::move(base), ex);
    }
    case ExprNode::Tag::Binom: {
        long n = eval_const_int(expand_rec(e->kids[0]));
        long k = eval_const_int(expand_rec(e->kids[1]));
        return num(Rational(binomial(n, k)));
    }
    case ExprNode::Tag::FiniteSum: {
        long lo = eval_const_int(expand_rec(e->kids[0]));
        long hi = eval_const_int(expand_rec(e->kids[1]));
        if (hi < lo - 1)
            throw std::domain_error("finite sum: upper bound " +
                                    std::to_string(hi) + " below lower - 1");
        std::vector<Expr> terms;
        terms.reserve(static_cast<size_t>(std::max(0L, hi - lo + 1)));
        for (long j = lo; j <= hi; ++j)
            terms.push_back(expand_rec(substitute(e->kids[2], e->name, num(j))));
        return sum(std::move(terms));
    }
    }
    throw std::logic_error("expand: bad tag");
}

} // namespace

Expr expand_finite_sums(const Expr &e, const std::map<std::string, long> &bindings)
{
    Expr cur = e;
    for (auto &[name, val] : bindings)
        cur = substitute(cur, name, num(val));
    return expand_rec(cur);
}

bool is_fully_expanded(const Expr &e)
{
    if (e->tag == ExprNode::Tag::FiniteSum || e->tag == ExprNode::Tag::Binom)
        return false;
    if (e->tag == ExprNode::Tag::Power) {
        const Expr &ex = e->kids[1];
        if (!is_number(ex) || !ex->value.is_real() || !ex->value.re.is_integer())
            return false;
    }
    for (auto &k : e->kids)
        if (!is_fully_expanded(k))
            return false;
    return true;
}

} // namespace ivpcert
