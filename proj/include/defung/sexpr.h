#ifndef DEFUNG_SEXPR_H
#define DEFUNG_SEXPR_H

#include "defung/errors.h"

#include <string>
#include <string_view>
#include <vector>

namespace defung {

/// Plain s-expression data: an atom or a list, with source positions.
/// Comments run from ';' to end of line.
struct SExpr {
  enum class Kind { Atom, List };

  Kind kind = Kind::Atom;
  std::string atom;
  std::vector<SExpr> items;
  SourceLoc loc;

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_list() const { return kind == Kind::List; }
  bool is_atom(std::string_view s) const { return is_atom() && atom == s; }
};

/// Reads every top-level form in `text`. Throws ParseError with positions.
std::vector<SExpr> read_sexprs(std::string_view text);

/// Reads exactly one form (trailing content is an error).
SExpr read_one_sexpr(std::string_view text);

}  // namespace defung

#endif
