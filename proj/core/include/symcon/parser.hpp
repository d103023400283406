#pragma once

#include "symcon/expr.hpp"
#include "symcon/symbol.hpp"

#include <stdexcept>
#include <string>

namespace symcon {

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line, int column)
        : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " +
                             std::to_string(column)),
          line(line),
          column(column) {}
    int line;
    int column;
};

/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | base ('^' ['-'] integer)?
///   base   := integer | identifier | '(' expr ')'
/// Identifiers are letters, digits and '_'; a bracket index `q[3]`
/// desugars to the identifier `q_3`. All identifiers must be declared.
/// Negative powers move factors into the denominator.
Expr parse_expr(const std::string& text, const SymbolTable& symbols);

} // namespace symcon
