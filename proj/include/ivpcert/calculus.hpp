#pragma once

#include <string>
#include <vector>

#include "ivpcert/canonical.hpp"
#include "ivpcert/expr.hpp"

namespace ivpcert {

// Linear differential operator y^(m) + a1 y^(m-1) + ... + am y - b.
// Coefficients are kept as the expressions they were declared with; nothing
// is cleared or rescaled behind the caller's back.
struct LinOp {
    int order = 1;
    std::vector<Expr> coeffs; // a1..am
    Expr force;               // b
    std::string var;
};

// d/dv. Requires a fully expanded expression (no finite sums, integer
// exponents). Constant symbols and the other variables differentiate to zero.
Expr differentiate(const Expr &e, const std::string &var);

// canonicalize(y^(m) + a1 y^(m-1) + ... + am y - b) with derivatives taken by
// iterated differentiate.
CanonicalRF apply_operator(const LinOp &op, const Expr &y,
                           const CanonContext &ctx);

} // namespace ivpcert
