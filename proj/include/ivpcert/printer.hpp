#pragma once

#include <string>

#include "ivpcert/decl.hpp"
#include "ivpcert/expr.hpp"

namespace ivpcert {

// Deterministic rendering in the DSL expression grammar; parsing the output
// reproduces the normalized tree.
std::string print_expr(const Expr &e);

// Renders a full identity block in DSL syntax. Used both for reports and to
// give derived declarations a canonical source text.
std::string print_identity(const IdentityDecl &decl);

} // namespace ivpcert
