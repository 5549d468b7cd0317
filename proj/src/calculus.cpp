#include "ivpcert/calculus.hpp"

namespace ivpcert {

Expr differentiate(const Expr &e, const std::string &var)
{
    switch (e->tag) {
    case ExprNode::Tag::Number:
        return num(0);
    case ExprNode::Tag::Symbol:
        return e->name == var ? num(1) : num(0);
    case ExprNode::Tag::Atom: {
        const Expr &u = e->kids[0];
        Expr du = differentiate(u, var);
        switch (e->atom_kind) {
        case AtomKind::Sin:
            return mul(cos_(u), du);
        case AtomKind::Cos:
            return mul(neg(sin_(u)), du);
        case AtomKind::ExpI:
            return product({imag_unit(), expi(u), du});
        }
        break;
    }
    case ExprNode::Tag::Sum: {
        std::vector<Expr> terms;
        terms.reserve(e->kids.size());
        for (auto &k : e->kids)
            terms.push_back(differentiate(k, var));
        return sum(std::move(terms));
    }
    case ExprNode::Tag::Product: {
        std::vector<Expr> terms;
        for (size_t i = 0; i < e->kids.size(); ++i) {
            std::vector<Expr> factors = e->kids;
            factors[i] = differentiate(e->kids[i], var);
            terms.push_back(product(std::move(factors)));
        }
        return sum(std::move(terms));
    }
    case ExprNode::Tag::Power: {
        const Expr &ex = e->kids[1];
        if (!is_number(ex) || !ex->value.is_real() ||
            !ex->value.re.is_integer())
            throw std::domain_error(
                "differentiate: unresolved power exponent");
        long m = ex->value.re.to_long();
        const Expr &base = e->kids[0];
        // d(f^m) = m f^(m-1) f', for any integer m (negative included; the
        // rational-function model downstream carries the inverse powers).
        return product(
            {num(m), power(base, m - 1), differentiate(base, var)});
    }
    default:
        break;
    }
    throw std::domain_error(
        "differentiate: expression must be expanded first");
}

CanonicalRF apply_operator(const LinOp &op, const Expr &y,
                           const CanonContext &ctx)
{
    if (op.order < 1)
        throw std::domain_error("operator order must be >= 1");
    std::vector<Expr> derivs{y};
    for (int j = 1; j <= op.order; ++j)
        derivs.push_back(differentiate(derivs.back(), op.var));

    std::vector<Expr> terms{derivs[op.order]};
    for (int j = 1; j <= op.order; ++j)
        terms.push_back(mul(op.coeffs[j - 1], derivs[op.order - j]));
    if (op.force && !is_zero_number(op.force))
        terms.push_back(neg(op.force));
    return canonicalize(sum(std::move(terms)), ctx);
}

} // namespace ivpcert
