#include "defung/value.h"

namespace defung {

std::string Value::to_string() const {
  switch (kind_) {
    case Kind::Nil:
      return "nil";
    case Kind::Bool:
      return "t";
    case Kind::Int:
      return int_->str();
    case Kind::Sym:
      return *sym_;
    case Kind::Pair: {
      // Proper lists print as (a b c); improper tails use dotted notation.
      std::string out = "(";
      const Value* cur = this;
      bool first = true;
      while (cur->is_pair()) {
        if (!first) out += ' ';
        out += cur->car().to_string();
        first = false;
        cur = &cur->cdr();
      }
      if (!cur->is_nil()) {
        out += " . ";
        out += cur->to_string();
      }
      out += ')';
      return out;
    }
  }
  return "?";
}

}  // namespace defung
