#ifndef DEFUNG_PARSER_H
#define DEFUNG_PARSER_H

#include "defung/ast.h"
#include "defung/sexpr.h"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace defung {

/// Parses a whole program: a sequence of def::ung and def::total forms.
Program parse_program(std::string_view text);

/// Reads the file at `path` and parses it.
Program parse_program_file(const std::string& path);

/// Lowers one expression in an explicit scope. `vars` are the names in
/// scope; `callables` maps callable function names to their arity.
ExprPtr parse_expression(std::string_view text, const std::vector<std::string>& vars,
                         const std::map<std::string, int>& callables);

/// Lowers an already-read s-expression (same scoping rules).
ExprPtr lower_expression(const SExpr& form, const std::vector<std::string>& vars,
                         const std::map<std::string, int>& callables);

/// Rejects definitions whose decision spine has recursive calls in test
/// position: the domain construction assumes spine tests are index-free.
/// Throws RecursiveCallInTestError.
void validate_transformability(const FunctionDef& def);

}  // namespace defung

#endif
