#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ivpcert/decl.hpp"

namespace ivpcert {

struct ParseError : std::runtime_error {
    int line;
    int col;
    ParseError(const std::string &msg, int line_, int col_)
        : std::runtime_error(msg + " at " + std::to_string(line_) + ":" +
                             std::to_string(col_)),
          line(line_), col(col_)
    {
    }
};

// Parses a whole DSL file: one or more identity blocks. Rejects duplicate
// identity names and cyclic depends-on chains within the file.
std::vector<IdentityDecl> parse_file(const std::string &source);

// Parses exactly one identity block.
IdentityDecl parse_identity(const std::string &source);

// Parses an expression in the DSL grammar against an explicit symbol table
// (used by tests and by certificate replay).
Expr parse_expr_string(const std::string &source, const SymbolTable &symbols);

// Rebinds integer parameters, e.g. {"n", 64}. Unknown names are an error.
void apply_param_overrides(IdentityDecl &decl,
                           const std::vector<std::pair<std::string, long>> &overrides);

} // namespace ivpcert
