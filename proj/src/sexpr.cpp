#include "defung/sexpr.h"

#include <cctype>

namespace defung {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip_space();
    while (!at_end()) {
      out.push_back(read_form());
      skip_space();
    }
    return out;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  SourceLoc here() const { return {line_, col_}; }

  void skip_space() {
    while (!at_end()) {
      char c = peek();
      if (c == ';') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  static bool atom_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ';';
  }

  SExpr read_form() {
    SourceLoc loc = here();
    if (peek() == '(') {
      advance();
      SExpr list;
      list.kind = SExpr::Kind::List;
      list.loc = loc;
      skip_space();
      while (true) {
        if (at_end()) throw ParseError("unterminated list", loc);
        if (peek() == ')') {
          advance();
          break;
        }
        list.items.push_back(read_form());
        skip_space();
      }
      return list;
    }
    if (peek() == ')') throw ParseError("unexpected ')'", loc);
    SExpr atom;
    atom.kind = SExpr::Kind::Atom;
    atom.loc = loc;
    while (!at_end() && atom_char(peek())) atom.atom.push_back(advance());
    if (atom.atom.empty()) throw ParseError("empty token", loc);
    return atom;
  }
};

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view text) { return Reader(text).read_all(); }

SExpr read_one_sexpr(std::string_view text) {
  auto forms = read_sexprs(text);
  if (forms.size() != 1)
    throw ParseError("expected exactly one form, got " + std::to_string(forms.size()));
  return std::move(forms.front());
}

}  // namespace defung
