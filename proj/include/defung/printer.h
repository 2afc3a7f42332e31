#ifndef DEFUNG_PRINTER_H
#define DEFUNG_PRINTER_H

#include "defung/ast.h"

#include <string>

namespace defung {

/// Canonical single-line rendering. parse of the printed text gives back a
/// structurally equal tree.
std::string print_expr(const Expr& e);
inline std::string print_expr(const ExprPtr& e) { return print_expr(*e); }

/// (defun NAME (PARAMS) BODY)
std::string print_definition(const Definition& def);

/// def::ung form including any non-default options.
std::string print_definition(const FunctionDef& def);

/// def::total form.
std::string print_totality_spec(const TotalitySpec& spec);

}  // namespace defung

#endif
